#pragma once

#include <array>

#include "tightlag/rng.hpp"
#include "tightlag/so3.hpp"

namespace tightlag {

/// Element of so(3) + so(3); doubles as a Killing vector field on S^2 x S^2
/// via (X, Y) . (x, y) = (X x, Y y).
struct ProductAlgebraElement {
  So3Element first;
  So3Element second;

  ProductAlgebraElement() = default;
  ProductAlgebraElement(const So3Element& f, const So3Element& s) : first(f), second(s) {}
  ProductAlgebraElement(const Eigen::Vector3d& f, const Eigen::Vector3d& s)
      : first(f), second(s) {}

  ProductAlgebraElement operator+(const ProductAlgebraElement& o) const {
    return {first + o.first, second + o.second};
  }
  ProductAlgebraElement operator-(const ProductAlgebraElement& o) const {
    return {first - o.first, second - o.second};
  }
  ProductAlgebraElement operator-() const { return {-first, -second}; }

  double norm() const;
};

inline ProductAlgebraElement operator*(double s, const ProductAlgebraElement& x) {
  return {s * x.first, s * x.second};
}

/// Element of SO(3) x SO(3), the identity component of the isometry group.
struct ProductGroupElement {
  Rotation3 first;
  Rotation3 second;

  ProductGroupElement() = default;
  ProductGroupElement(const Rotation3& f, const Rotation3& s) : first(f), second(s) {}

  ProductGroupElement operator*(const ProductGroupElement& o) const {
    return {first * o.first, second * o.second};
  }
  ProductGroupElement inverse() const { return {first.inverse(), second.inverse()}; }
};

/// Bi-invariant inner product: -1/2 tr(AB) per factor, summed.  Normalized so
/// that ||(hat v, 0)|| = ||v|| and the quotient metric on S^2 x S^2 is the
/// product of unit round spheres; vol(SO(3)) = 8 pi^2 in this normalization.
double inner(const ProductAlgebraElement& x, const ProductAlgebraElement& y);

/// Componentwise commutator.
ProductAlgebraElement bracket(const ProductAlgebraElement& x, const ProductAlgebraElement& y);

/// Componentwise matrix exponential.
ProductGroupElement group_exp(const ProductAlgebraElement& x);

/// Ad_g Z, componentwise conjugation.
ProductAlgebraElement adjoint(const ProductGroupElement& g, const ProductAlgebraElement& z);

/// One Haar-uniform rotation (uniform unit quaternion, Shoemake's method).
Rotation3 haar_rotation(RngStream& rng);

/// Haar-uniform element of SO(3) x SO(3); deterministic for a fixed stream.
ProductGroupElement haar_sample(RngStream& rng);

// ---------------------------------------------------------------------------
// Distinguished subspaces at the base point o = (e1, e1).
//
// The isotropy algebra h is spanned by rotations about e1 in each factor.
// For theta in [pi/4, 3pi/4], m_theta is the 2-plane of algebra elements
// whose value at o sweeps the plane spanned by
//   cos(theta) (e2, 0) + sin(theta) (0, e2),
//   sin(theta) (e3, 0) - cos(theta) (0, e3),
// and m_theta_perp is its orthogonal complement inside the tangent part.
// All three bases below are orthonormal.
// ---------------------------------------------------------------------------

ProductAlgebraElement h_basis(int i);                              // i in {0, 1}
ProductAlgebraElement m_theta_basis(double theta, int i);          // i in {0, 1}
ProductAlgebraElement m_theta_perp_basis(double theta, int i);     // i in {0, 1}

/// Orthogonal decomposition g = h + m_theta + m_theta_perp of one element.
struct CanonicalSplit {
  ProductAlgebraElement h_part;
  ProductAlgebraElement m_part;
  ProductAlgebraElement perp_part;
};

/// Splits Z along the decomposition above.  theta outside [pi/4, 3pi/4] is an
/// error.
CanonicalSplit canonical_decompose(const ProductAlgebraElement& z, double theta);

}  // namespace tightlag

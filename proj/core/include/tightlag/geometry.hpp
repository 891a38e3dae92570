#pragma once

#include <vector>

#include <Eigen/Core>

#include "tightlag/liegroup.hpp"

namespace tightlag {

/// Point (x, y) of S^2 x S^2; both components unit within 1e-12.
struct SurfacePoint {
  Eigen::Vector3d x;
  Eigen::Vector3d y;

  SurfacePoint() : x(Eigen::Vector3d::UnitX()), y(Eigen::Vector3d::UnitX()) {}
  SurfacePoint(const Eigen::Vector3d& x_, const Eigen::Vector3d& y_);
};

SurfacePoint apply_group(const ProductGroupElement& g, const SurfacePoint& p);

/// Tangent vector (u, v) at a point, u orthogonal to x and v to y (1e-12).
struct Tangent4 {
  SurfacePoint base;
  Eigen::Vector3d u;
  Eigen::Vector3d v;

  Tangent4() : u(Eigen::Vector3d::Zero()), v(Eigen::Vector3d::Zero()) {}
  Tangent4(const SurfacePoint& base_, const Eigen::Vector3d& u_, const Eigen::Vector3d& v_);

  double norm() const { return std::sqrt(u.squaredNorm() + v.squaredNorm()); }
};

/// J0 + J0 (kPlus) or J0 + (-J0) (kMinus), with J0 u = x cross u on each S^2.
enum class ComplexStructureChoice { kPlus, kMinus };

Tangent4 apply_j(const Tangent4& t, ComplexStructureChoice choice);

/// Product round metric <u1,u2> + <v1,v2>.  Throws if base points differ.
double metric(const Tangent4& t1, const Tangent4& t2);

/// omega(t1, t2) = metric(J t1, t2); antisymmetric, and omega(X, JY) = g(X, Y).
double omega(const Tangent4& t1, const Tangent4& t2, ComplexStructureChoice choice);

/// Oriented tangent 2-plane, stored with an orthonormal basis.
struct TwoPlane {
  SurfacePoint base;
  Tangent4 b1;
  Tangent4 b2;

  /// Orthonormalizes the span of (t1, t2); throws on a degenerate pair
  /// (second direction shorter than 1e-10 after projection).
  static TwoPlane from_span(const Tangent4& t1, const Tangent4& t2);
};

/// Pair of isotropy invariants of a 2-plane, both folded into [0, pi/2]:
/// `diff` is the Kahler angle for J0 + J0, `sum` the one for J0 + (-J0).
struct AnglePair {
  double sum;
  double diff;
};

/// Kahler angles of a plane: arccos of the absolute omega-pairings of an
/// orthonormal basis.  Independent of the basis and of orientation.
AnglePair kahler_angles(const TwoPlane& p);

bool is_lagrangian_plane(const TwoPlane& p, ComplexStructureChoice choice, double tol);

/// The orbit-space representative plane at o = (e1, e1) with invariants
/// (theta1 + theta2, theta1 - theta2):
///   span{cos(t1) (e2,0) + sin(t1) (0,e2), cos(t2) (e3,0) + sin(t2) (0,e3)}.
TwoPlane plane_from_angles(double theta1, double theta2);

/// Lagrangian-line plane m_theta == plane_from_angles(theta, theta - pi/2).
TwoPlane m_theta_plane(double theta);

/// Rotates a plane at o by the isotropy action (angle phi about e1 on the
/// first factor, psi on the second).
TwoPlane isotropy_rotate(const TwoPlane& p, double phi, double psi);

/// Rank of the pairing Z in h |-> ([Z, .] projected to the plane's normal
/// complement) for the representative plane with invariants (sum, diff).
/// 2 when sin(sum) and sin(diff) are both nonzero, 1 when exactly one
/// vanishes, 0 at the corners.  Singular values below tol count as zero.
int dim_im_psi2_at(double sum, double diff, double tol = 1e-9);

struct ScanRow {
  double sum;
  double diff;
  int dim_im_psi2;
};

/// Uniform (resolution x resolution) grid over [0, pi]^2, endpoints included,
/// with the pairing rank at each node.  resolution must be >= 2.
std::vector<ScanRow> scan_fundamental_domain(int resolution);

/// CSV with header `sum,diff,dim_im_psi2`, one row per grid node.
void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out);

}  // namespace tightlag

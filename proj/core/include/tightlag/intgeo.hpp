#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tightlag/killing.hpp"
#include "tightlag/surfaces.hpp"

namespace tightlag {

/// Riemannian volume of SO(3) under the -1/2 tr pairing: 8 pi^2.
double vol_so3();
/// Volume of SO(3) x SO(3): 64 pi^4.
double vol_g();

/// Angle between subspaces spanned by the orthonormal columns of v and w:
/// the norm of the wedge of all columns, computed as the square root of the
/// Gram determinant of the concatenated family.  Throws if either family is
/// not orthonormal within 1e-10.
double wedge_angle(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w);

/// Coordinate frame for the 4-dimensional tangent space at a point: an
/// orthonormal basis of each factor's tangent plane.  The isotropy circle
/// actions rotate within these bases.
struct IsotropyFrame {
  Eigen::Matrix<double, 3, 2> fx;
  Eigen::Matrix<double, 3, 2> fy;

  static IsotropyFrame standard_at(const SurfacePoint& p) {
    return IsotropyFrame{unit_perp_frame(p.x), unit_perp_frame(p.y)};
  }
};

/// One value of the sigma_k integrand: the subspace angle between V and the
/// W-plane rotated by the isotropy element with angles (phi, psi).  The
/// second factor rotates by -psi, matching the k = b^{-1} a parametrization
/// under which the anti-diagonal sphere's normal-plane integrand comes out
/// as (1 - cos(phi + psi)) / 2.
double sigma_k_integrand(const TwoPlane& v, const TwoPlane& w, const IsotropyFrame& frame,
                         double phi, double psi);

/// Isotropy-averaged angle between two planes at a common point: the double
/// integral of sigma_k_integrand over both circles, each of circumference
/// 2 pi, by an n x n midpoint rule.
double sigma_k(const TwoPlane& v, const TwoPlane& w, int quadrature_n);
double sigma_k(const TwoPlane& v, const TwoPlane& w, int quadrature_n,
               const IsotropyFrame& frame);

/// Result of intersecting a surface with an isometric translate of itself.
/// degenerate means the intersection is not a finite point set (the translate
/// overlaps the surface along a curve or the whole surface); no count is
/// defined in that case.
struct IntersectionReport {
  bool degenerate = false;
  bool transverse = false;
  std::vector<SurfacePoint> points;

  int count() const { return degenerate ? -1 : static_cast<int>(points.size()); }
};

/// M0 and g M0 meet exactly at the fixed unit vectors of B^T A: two antipodal
/// points for every non-identity relative rotation.  Transversality margin:
/// rotation angle >= 1e-9.
IntersectionReport intersect_m0(const ProductGroupElement& g);

/// Latitude-product torus against its translate: per factor, the latitude
/// circle meets the rotated circle in 0, 1, or 2 points (two planes cutting
/// the sphere); total count is the product.  Tangency margin 1e-9.
IntersectionReport intersect_torus(double a, double b, const ProductGroupElement& g);

/// Mesh proximity scan plus damped Gauss-Newton on the six-component
/// coincidence residual; transversality via the smallest singular value
/// (>= 1e-7) of the combined tangent frame at each intersection point.
IntersectionReport intersect_generic(const LagrangianSurface& l1, const LagrangianSurface& l2,
                                     int mesh_resolution = 48, double tol = 1e-9);

/// Oracle dispatch: analytic counting for the built-in surfaces, the generic
/// solver against the transformed surface otherwise.
IntersectionReport count_intersection(const LagrangianSurface& surface,
                                      const ProductGroupElement& g, int mesh_resolution = 48);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long n_samples = 0;
  long long degenerate_draws = 0;
  std::uint64_t seed = 0;
};

/// Haar Monte Carlo estimate of the total intersection integral: the mean
/// sampled count scaled by vol(G) = 64 pi^4 (sampling is uniform, so the
/// probability mean is rescaled to the Riemannian-volume convention).
/// Degenerate draws are discarded and tallied.  Work splits across `workers`
/// derived streams; results are reproducible for a fixed (seed, workers).
MonteCarloEstimate poincare_mc(const LagrangianSurface& surface, long long n_samples,
                               std::uint64_t seed, int workers = 1);

enum class TightnessRegime { kLocal, kGlobal };

struct TightnessViolation {
  ProductGroupElement g;
  int count = 0;
};

struct TightnessVerdict {
  TightnessRegime regime = TightnessRegime::kGlobal;
  long long trials = 0;
  long long transverse_trials = 0;
  int expected_count = 0;  // sum of Z_2 Betti numbers of the surface
  double epsilon = 0.0;    // local-regime flow time bound
  std::uint64_t seed = 0;
  std::vector<TightnessViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// Samples isometries (Haar in the global regime; exp(t W) with W uniform on
/// the unit sphere of the algebra and t uniform in (0, epsilon] locally),
/// skips non-transverse draws, and records every transverse draw whose
/// intersection count differs from the Betti sum.  Violations replay
/// deterministically through count_intersection.
TightnessVerdict tightness_check(const LagrangianSurface& surface, TightnessRegime regime,
                                 long long n_trials, double epsilon, std::uint64_t seed);

/// Violation replay files: JSON with the two rotation matrices and the count
/// observed for each violating isometry.
void write_violations_json(const TightnessVerdict& verdict, std::ostream& out);
std::vector<TightnessViolation> read_violations_json(std::istream& in);

}  // namespace tightlag

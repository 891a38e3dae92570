#pragma once

#include <array>
#include <vector>

#include "tightlag/surfaces.hpp"

namespace tightlag {

/// Killing vector field on S^2 x S^2, identified with its algebra generator;
/// the field value at (x, y) is (a x x, b x y) for generator axes (a, b).
struct KillingField {
  ProductAlgebraElement generator;
};

/// The six coordinate fields (rotations about e1, e2, e3 in each factor).
std::array<KillingField, 6> standard_killing_basis();

Tangent4 killing_at(const KillingField& z, const SurfacePoint& p);

/// Hamiltonian potential of a Killing field: f(x, y) = s (<a, x> + <b, y>)
/// with the global sign s in {+1, -1} fixed by finite-difference validation
/// of df = omega(xi, .) at construction (residual <= 1e-6 at 10 points).
class MomentMap {
 public:
  explicit MomentMap(const KillingField& field);

  double value(const SurfacePoint& p) const;
  double sign() const { return sign_; }

 private:
  Eigen::Vector3d a_, b_;
  double sign_ = 1.0;
};

double moment_map_value(const KillingField& z, const SurfacePoint& p);

/// Coefficients of the normal part of the field in the normal frame at the
/// given surface point.  The surface is assumed Lagrangian.
Eigen::Vector2d normal_component(const KillingField& z, const LagrangianSurface& surface,
                                 const ChartParams& params);

struct SectionZero {
  ChartParams params;
  SurfacePoint p;
  bool nondegenerate = false;
};

struct ZeroReport {
  std::vector<SectionZero> zeros;
  /// True when the section vanishes identically on the mesh (max norm below
  /// 1e-10); no zeros are reported in that case.
  bool section_identically_zero = false;
  /// Mesh candidates whose Newton refinement did not converge.
  int failed_candidates = 0;

  int count() const { return static_cast<int>(zeros.size()); }
  bool all_nondegenerate() const;
};

/// All zeros of the normal part of the field along the surface: coarse mesh
/// scan, damped (pseudo-inverse) Newton refinement to |W^N| <= tol, and
/// dedup within parameter distance 1e-4 / ambient distance 1e-6.
ZeroReport find_zeros(const KillingField& z, const LagrangianSurface& surface,
                      int mesh_resolution = 128, double tol = 1e-9);

struct MorseCount {
  int count = 0;             // the agreed value
  int critical_points = 0;   // zeros of the moment-map differential
  int section_zeros = 0;     // zeros of the normal part of the field
  bool all_nondegenerate = false;
};

/// Counts critical points of the pulled-back moment map and, independently,
/// zeros of the normal part; the two totals must agree (NumericalError
/// otherwise; the zero sets coincide for Lagrangian surfaces).
MorseCount morse_count(const KillingField& z, const LagrangianSurface& surface,
                       int mesh_resolution = 128);

struct NullityReport {
  int rank = 0;
  bool stable = false;
  std::array<double, 3> tolerances{};     // one decade up, requested, one down
  std::array<int, 3> rank_by_tolerance{};
  std::vector<double> singular_values;
};

/// Killing nullity: numerical rank of the 6 x 2n matrix of normal components
/// of the standard basis fields over n sampled points.  Rank is evaluated at
/// the requested relative tolerance and one decade to each side; a rank that
/// moves across the decades is reported as unstable, not resolved silently.
NullityReport killing_nullity(const LagrangianSurface& surface, int n_points = 200,
                              double tol = 1e-8);

/// The isotropy pairing <[Z, X]^perp, Y> in the distinguished bases of
/// m_theta and its complement:
///   x1 y2 (z1 cos^2 + z2 sin^2) - x2 y1 (z1 sin^2 + z2 cos^2).
/// theta must lie in [pi/4, 3pi/4].
double psi2_pairing(const Eigen::Vector2d& z, const Eigen::Vector2d& x,
                    const Eigen::Vector2d& y, double theta);

/// Rank of the coefficient matrix [[cos^2, sin^2], [sin^2, cos^2]]:
/// 1 exactly at theta = pi/4 and 3pi/4, otherwise 2.
int dim_im_psi2(double theta, double tol = 1e-9);

/// Pointwise lower bound for the Killing nullity of a Lagrangian surface:
/// codimension (2) plus the pairing rank read off the tangent plane's
/// invariant angles.  Throws if the tangent plane is not Lagrangian.
int gotoh_bound(const LagrangianSurface& surface, const ChartParams& params,
                double corner_tol = 1e-6);

/// phi(p) = (f_1(p), ..., f_N(p)) for the chosen fields' moment maps.
class MomentEmbedding {
 public:
  explicit MomentEmbedding(std::vector<KillingField> fields);

  int dimension() const { return static_cast<int>(maps_.size()); }
  Eigen::VectorXd value(const SurfacePoint& p) const;

  /// True iff the affine hull of sampled images has full dimension N
  /// (numerical rank of the centered sample matrix).
  bool substantial_check(const LagrangianSurface& surface, int n_samples = 200,
                         double tol = 1e-8) const;

 private:
  std::vector<MomentMap> maps_;
};

/// Largest dimension of a Euclidean target admitting a tight substantial map
/// of a closed n-manifold: n(n+3)/2.
int kuiper_bound(int n);

}  // namespace tightlag

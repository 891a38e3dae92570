#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tightlag/geometry.hpp"

namespace tightlag {

/// Declared topology of a closed surface description.
enum class Topology { kSphere, kTorus };

/// Topologies understood by the Betti-sum lookup (wider than what the chart
/// machinery can represent).
enum class TopologyKind { kSphere, kTorus, kRealProjectivePlane, kKleinBottle };

/// Sum of Z_2 Betti numbers: sphere 2, torus 4, RP^2 3, Klein bottle 4.
int sb_z2(TopologyKind t);

/// Value and first partials of a chart map at one parameter point.
struct ChartJet {
  SurfacePoint p;
  Eigen::Vector3d dx_du, dx_dv;
  Eigen::Vector3d dy_du, dy_dv;
};

/// One chart: a rectangle of parameters mapped into S^2 x S^2.
struct Chart {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  std::function<ChartJet(double, double)> jet;
};

struct ChartParams {
  int chart = 0;
  double u = 0;
  double v = 0;
};

/// A closed parametrized surface in S^2 x S^2 (not necessarily Lagrangian;
/// check_lagrangian tests that).
///
/// Atlas conventions:
///  - torus: one chart on [0, 2pi)^2 (or any rectangle), periodic in both
///    parameters; periodicity is verified on construction within 1e-8.
///  - sphere: two stereographic-style charts whose domains contain
///    [-1.2, 1.2]^2 and that satisfy the transition law
///        chart1(s, t) == chart0(s / r^2, -t / r^2),  r^2 = s^2 + t^2,
///    verified on the annulus 1 <= r <= 1.1 within 1e-8.  Each chart owns the
///    closed unit disk of its domain; the two disks cover the surface and
///    meet only along the seam circle, so integrals split cleanly.
///
/// Charts must be immersions: the 2x6 Jacobian has to keep its smallest
/// singular value above 1e-6 at the validation mesh.
class LagrangianSurface {
 public:
  enum class Kind { kAntiDiagonalSphere, kLatitudeTorus, kParametricSphere, kParametricTorus };

  /// The totally geodesic sphere {(x, -x)}.
  static LagrangianSurface anti_diagonal_sphere();

  /// Product of latitude circles {x1 = a, y1 = b}, heights a, b in [0, 1).
  static LagrangianSurface latitude_torus(double a, double b);

  static LagrangianSurface parametric_torus(Chart chart);
  static LagrangianSurface parametric_sphere(Chart chart0, Chart chart1);

  Kind kind() const { return kind_; }
  Topology topology() const;
  TopologyKind topology_kind() const;

  /// Latitude heights; only valid for kLatitudeTorus.
  double torus_a() const { return a_; }
  double torus_b() const { return b_; }

  int num_charts() const { return static_cast<int>(charts_.size()); }
  const Chart& chart(int i) const { return charts_.at(static_cast<std::size_t>(i)); }

  /// Evaluates the chart map.  Torus parameters wrap periodically; sphere
  /// parameters outside the chart domain are an error.
  SurfacePoint point_at(const ChartParams& params) const { return jet_at(params).p; }
  ChartJet jet_at(const ChartParams& params) const;

 private:
  LagrangianSurface() = default;

  Kind kind_ = Kind::kParametricTorus;
  double a_ = 0, b_ = 0;
  std::vector<Chart> charts_;
};

/// The surface moved by an isometry; the result is parametric.
LagrangianSurface transformed(const LagrangianSurface& surface, const ProductGroupElement& g);

/// Orthonormal tangent frame from the chart partials (Gram-Schmidt).
/// Throws NumericalError if the Jacobian is rank-deficient at the point.
std::pair<Tangent4, Tangent4> tangent_frame(const LagrangianSurface& surface,
                                            const ChartParams& params);

/// Orthonormal normal frame.  For a Lagrangian surface this is exactly
/// (J t1, J t2); the implementation falls back to a nullspace computation
/// when the J-image grazes the tangent plane (non-Lagrangian points).
std::pair<Tangent4, Tangent4> normal_frame(const LagrangianSurface& surface,
                                           const ChartParams& params);

/// Deterministic spread of n interior parameter points (seeded stream).
std::vector<ChartParams> sample_params(const LagrangianSurface& surface, int n,
                                       std::uint64_t seed = 0x5eed);

struct MeshSample {
  ChartParams params;
  SurfacePoint p;
  Tangent4 t1, t2;  // tangent frame
  Tangent4 n1, n2;  // normal frame
};

/// Samples with frames over the whole surface (torus grid / per-chart disks).
std::vector<MeshSample> build_mesh(const LagrangianSurface& surface, int resolution);

/// True iff |omega(t1, t2)| <= tol at every sample (J0 + J0 structure).
bool check_lagrangian(const LagrangianSurface& surface, int n_samples = 400, double tol = 1e-8);

/// Class of the surface in H_2(S^2 x S^2): (m, n) mapping degrees of the two
/// factor projections via signed-area quadrature; degrees further than 0.1
/// from an integer raise NumericalError (broken atlas).
struct HomologyClass {
  int m = 0;
  int n = 0;
};
HomologyClass homology_class(const LagrangianSurface& surface, int quadrature_n = 48);

/// Self-intersection candidate 2mn of the homology class and its parity
/// (always even; the parity is the embedded-surface obstruction).
struct EulerParity {
  HomologyClass cls;
  int chi_candidate = 0;
  bool even = true;
};
EulerParity euler_parity_check(const LagrangianSurface& surface);

/// Riemannian area by induced-metric quadrature.
double surface_volume(const LagrangianSurface& surface, int quadrature_n = 64);

// ---------------------------------------------------------------------------
// Builders for common parametric families.
// ---------------------------------------------------------------------------

/// Closed curve on S^2: normalized trigonometric polynomial
/// p(s) = c0 + sum_k (a_k cos(ks) + b_k sin(ks)), gamma = p / |p|.
struct TrigCurve3 {
  std::vector<Eigen::Vector3d> cos_coef;  // index k starts at 0 (constant term)
  std::vector<Eigen::Vector3d> sin_coef;  // index k starts at 1 in sin(k s)

  Eigen::Vector3d raw(double s) const;
  Eigen::Vector3d raw_deriv(double s) const;
  /// Unit-sphere point and its derivative.
  std::pair<Eigen::Vector3d, Eigen::Vector3d> point(double s) const;
};

/// Product of two closed spherical curves; Lagrangian for any immersed pair.
LagrangianSurface product_curve_torus(const TrigCurve3& c1, const TrigCurve3& c2);

/// Sphere {(P q, Q q) : q in S^2} for orthogonal P, Q (graph of Q P^T).
/// Lagrangian exactly when det(P) * det(Q) = -1.
LagrangianSurface graph_sphere(const Eigen::Matrix3d& p_map, const Eigen::Matrix3d& q_map);

/// Orthonormal basis of the plane orthogonal to a unit vector, chosen
/// deterministically (least-aligned coordinate axis, then cross product).
Eigen::Matrix<double, 3, 2> unit_perp_frame(const Eigen::Vector3d& x);

}  // namespace tightlag

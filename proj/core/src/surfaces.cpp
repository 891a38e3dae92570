#include "tightlag/surfaces.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tightlag/errors.hpp"
#include "tightlag/quadrature.hpp"
#include "tightlag/rng.hpp"

namespace tightlag {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
// Sphere charts own the closed unit disk; meshes extend slightly past the
// seam so that every point is interior to at least one chart's mesh.
constexpr double kSphereMeshRadius = 1.15;

Eigen::Vector3d renormalize(const Eigen::Vector3d& x) { return x / x.norm(); }

/// Projects a raw jet onto the unit spheres and corrects the partials.
ChartJet normalized_jet(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                        const Eigen::Vector3d& dx_du, const Eigen::Vector3d& dx_dv,
                        const Eigen::Vector3d& dy_du, const Eigen::Vector3d& dy_dv) {
  const double nx = x.norm(), ny = y.norm();
  const Eigen::Vector3d xh = x / nx, yh = y / ny;
  auto fix = [](const Eigen::Vector3d& h, double n, const Eigen::Vector3d& d) {
    return Eigen::Vector3d(d / n - h * (h.dot(d) / n));
  };
  ChartJet jet;
  jet.p = SurfacePoint(xh, yh);
  jet.dx_du = fix(xh, nx, dx_du);
  jet.dx_dv = fix(xh, nx, dx_dv);
  jet.dy_du = fix(yh, ny, dy_du);
  jet.dy_dv = fix(yh, ny, dy_dv);
  return jet;
}

Chart wrap_normalizing(Chart c) {
  auto inner_fn = c.jet;
  c.jet = [inner_fn](double u, double v) {
    const ChartJet raw = inner_fn(u, v);
    return normalized_jet(raw.p.x, raw.p.y, raw.dx_du, raw.dx_dv, raw.dy_du, raw.dy_dv);
  };
  return c;
}

// Inverse stereographic pair covering S^2.  Chart 1 flips the second
// parameter so that the transition (s,t) -> (s/r^2, -t/r^2) preserves
// orientation and the signed-area integrals of the two charts add.
void stereo_jet(int chart, double s, double t, Eigen::Vector3d& q, Eigen::Vector3d& qs,
                Eigen::Vector3d& qt) {
  const double d = 1.0 + s * s + t * t;
  const double d2 = d * d;
  if (chart == 0) {
    q = Eigen::Vector3d(2 * s / d, 2 * t / d, (2.0 - d) / d);
    qs = Eigen::Vector3d(2 * (d - 2 * s * s) / d2, -4 * s * t / d2, -4 * s / d2);
    qt = Eigen::Vector3d(-4 * s * t / d2, 2 * (d - 2 * t * t) / d2, -4 * t / d2);
  } else {
    q = Eigen::Vector3d(2 * s / d, -2 * t / d, (d - 2.0) / d);
    qs = Eigen::Vector3d(2 * (d - 2 * s * s) / d2, 4 * s * t / d2, 4 * s / d2);
    qt = Eigen::Vector3d(-4 * s * t / d2, -2 * (d - 2 * t * t) / d2, 4 * t / d2);
  }
}

double chart_min_singular_value(const ChartJet& jet) {
  Eigen::Matrix<double, 6, 2> j;
  j.col(0) << jet.dx_du, jet.dy_du;
  j.col(1) << jet.dx_dv, jet.dy_dv;
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 2>> svd(j);
  return svd.singularValues()(1);
}

void validate_torus_chart(const Chart& c) {
  const int n = 17;
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    const double u = c.u0 + f * (c.u1 - c.u0);
    const double v = c.v0 + f * (c.v1 - c.v0);
    const SurfacePoint lo_u = c.jet(c.u0, v).p, hi_u = c.jet(c.u1, v).p;
    const SurfacePoint lo_v = c.jet(u, c.v0).p, hi_v = c.jet(u, c.v1).p;
    if ((lo_u.x - hi_u.x).norm() + (lo_u.y - hi_u.y).norm() > 1e-8 ||
        (lo_v.x - hi_v.x).norm() + (lo_v.y - hi_v.y).norm() > 1e-8) {
      throw NumericalError("parametric torus: chart is not periodic within 1e-8");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = c.u0 + (i + 0.5) * (c.u1 - c.u0) / n;
      const double v = c.v0 + (j + 0.5) * (c.v1 - c.v0) / n;
      if (chart_min_singular_value(c.jet(u, v)) < 1e-6) {
        throw NumericalError("parametric torus: chart Jacobian is rank-deficient");
      }
    }
  }
}

void validate_sphere_atlas(const Chart& c0, const Chart& c1) {
  for (const Chart* c : {&c0, &c1}) {
    if (c->u0 > -1.2 || c->u1 < 1.2 || c->v0 > -1.2 || c->v1 < 1.2) {
      throw NumericalError("parametric sphere: chart domain must contain [-1.2, 1.2]^2");
    }
  }
  // Transition check on the seam annulus.
  for (int i = 0; i < 64; ++i) {
    const double alpha = kTwoPi * (i + 0.5) / 64;
    const double r = 1.0 + 0.1 * (i % 3) / 2.0;
    const double s = r * std::cos(alpha), t = r * std::sin(alpha);
    const double r2 = s * s + t * t;
    const SurfacePoint a = c1.jet(s, t).p;
    const SurfacePoint b = c0.jet(s / r2, -t / r2).p;
    if ((a.x - b.x).norm() + (a.y - b.y).norm() > 1e-8) {
      throw NumericalError("parametric sphere: charts disagree on the overlap annulus");
    }
  }
  for (const Chart* c : {&c0, &c1}) {
    for (int i = 0; i < 13; ++i) {
      for (int j = 0; j < 13; ++j) {
        const double rho = kSphereMeshRadius * (i + 0.5) / 13;
        const double alpha = kTwoPi * (j + 0.5) / 13;
        if (chart_min_singular_value(c->jet(rho * std::cos(alpha), rho * std::sin(alpha))) < 1e-6) {
          throw NumericalError("parametric sphere: chart Jacobian is rank-deficient");
        }
      }
    }
  }
}

}  // namespace

int sb_z2(TopologyKind t) {
  switch (t) {
    case TopologyKind::kSphere: return 2;
    case TopologyKind::kTorus: return 4;
    case TopologyKind::kRealProjectivePlane: return 3;
    case TopologyKind::kKleinBottle: return 4;
  }
  throw std::invalid_argument("sb_z2: unknown topology");
}

namespace detail {
std::vector<Chart> graph_sphere_charts(const Eigen::Matrix3d& p_map, const Eigen::Matrix3d& q_map);
}

LagrangianSurface LagrangianSurface::anti_diagonal_sphere() {
  LagrangianSurface surface;
  surface.kind_ = Kind::kAntiDiagonalSphere;
  surface.charts_ =
      detail::graph_sphere_charts(Eigen::Matrix3d::Identity(), -Eigen::Matrix3d::Identity());
  return surface;
}

LagrangianSurface LagrangianSurface::latitude_torus(double a, double b) {
  if (!(a >= 0.0 && a < 1.0 && b >= 0.0 && b < 1.0)) {
    throw std::invalid_argument("latitude_torus: heights must lie in [0, 1)");
  }
  const double ra = std::sqrt(1.0 - a * a), rb = std::sqrt(1.0 - b * b);
  Chart c;
  c.u0 = 0; c.u1 = kTwoPi; c.v0 = 0; c.v1 = kTwoPi;
  c.jet = [a, b, ra, rb](double u, double v) {
    ChartJet jet;
    jet.p = SurfacePoint(Eigen::Vector3d(a, ra * std::cos(u), ra * std::sin(u)),
                         Eigen::Vector3d(b, rb * std::cos(v), rb * std::sin(v)));
    jet.dx_du = Eigen::Vector3d(0, -ra * std::sin(u), ra * std::cos(u));
    jet.dx_dv = Eigen::Vector3d::Zero();
    jet.dy_du = Eigen::Vector3d::Zero();
    jet.dy_dv = Eigen::Vector3d(0, -rb * std::sin(v), rb * std::cos(v));
    return jet;
  };
  LagrangianSurface surface;
  surface.kind_ = Kind::kLatitudeTorus;
  surface.a_ = a;
  surface.b_ = b;
  surface.charts_ = {std::move(c)};
  return surface;
}

LagrangianSurface LagrangianSurface::parametric_torus(Chart chart) {
  Chart c = wrap_normalizing(std::move(chart));
  validate_torus_chart(c);
  LagrangianSurface surface;
  surface.kind_ = Kind::kParametricTorus;
  surface.charts_ = {std::move(c)};
  return surface;
}

LagrangianSurface LagrangianSurface::parametric_sphere(Chart chart0, Chart chart1) {
  Chart c0 = wrap_normalizing(std::move(chart0));
  Chart c1 = wrap_normalizing(std::move(chart1));
  validate_sphere_atlas(c0, c1);
  LagrangianSurface surface;
  surface.kind_ = Kind::kParametricSphere;
  surface.charts_ = {std::move(c0), std::move(c1)};
  return surface;
}

Topology LagrangianSurface::topology() const {
  return (kind_ == Kind::kAntiDiagonalSphere || kind_ == Kind::kParametricSphere)
             ? Topology::kSphere
             : Topology::kTorus;
}

TopologyKind LagrangianSurface::topology_kind() const {
  return topology() == Topology::kSphere ? TopologyKind::kSphere : TopologyKind::kTorus;
}

ChartJet LagrangianSurface::jet_at(const ChartParams& params) const {
  const Chart& c = chart(params.chart);
  double u = params.u, v = params.v;
  if (topology() == Topology::kTorus) {
    const double pu = c.u1 - c.u0, pv = c.v1 - c.v0;
    u = c.u0 + std::fmod(std::fmod(u - c.u0, pu) + pu, pu);
    v = c.v0 + std::fmod(std::fmod(v - c.v0, pv) + pv, pv);
  } else if (u < c.u0 || u > c.u1 || v < c.v0 || v > c.v1) {
    throw std::invalid_argument("jet_at: parameters outside the chart domain");
  }
  return c.jet(u, v);
}

LagrangianSurface transformed(const LagrangianSurface& surface, const ProductGroupElement& g) {
  const Eigen::Matrix3d ma = g.first.matrix(), mb = g.second.matrix();
  std::vector<Chart> charts;
  for (int i = 0; i < surface.num_charts(); ++i) {
    Chart c = surface.chart(i);
    auto inner_fn = c.jet;
    c.jet = [inner_fn, ma, mb](double u, double v) {
      const ChartJet j = inner_fn(u, v);
      return normalized_jet(ma * j.p.x, mb * j.p.y, ma * j.dx_du, ma * j.dx_dv,
                            mb * j.dy_du, mb * j.dy_dv);
    };
    charts.push_back(std::move(c));
  }
  if (surface.topology() == Topology::kTorus) {
    return LagrangianSurface::parametric_torus(std::move(charts[0]));
  }
  return LagrangianSurface::parametric_sphere(std::move(charts[0]), std::move(charts[1]));
}

std::pair<Tangent4, Tangent4> tangent_frame(const LagrangianSurface& surface,
                                            const ChartParams& params) {
  const ChartJet jet = surface.jet_at(params);
  Eigen::Matrix<double, 6, 1> a, b;
  a << jet.dx_du, jet.dy_du;
  b << jet.dx_dv, jet.dy_dv;
  const double na = a.norm();
  if (na < 1e-8) throw NumericalError("tangent_frame: rank-deficient chart Jacobian");
  a /= na;
  b -= a.dot(b) * a;
  const double nb = b.norm();
  if (nb < 1e-8) throw NumericalError("tangent_frame: rank-deficient chart Jacobian");
  b /= nb;
  return {Tangent4(jet.p, a.head<3>(), a.tail<3>()), Tangent4(jet.p, b.head<3>(), b.tail<3>())};
}

std::pair<Tangent4, Tangent4> normal_frame(const LagrangianSurface& surface,
                                           const ChartParams& params) {
  const auto [t1, t2] = tangent_frame(surface, params);
  // For Lagrangian tangent planes, (J t1, J t2) is already the orthonormal
  // normal frame; Gram-Schmidt below only strips rounding residue.
  Tangent4 c1 = apply_j(t1, ComplexStructureChoice::kPlus);
  Tangent4 c2 = apply_j(t2, ComplexStructureChoice::kPlus);
  auto project_off = [](Tangent4& w, const Tangent4& dir) {
    const double c = metric(w, dir);
    w.u -= c * dir.u;
    w.v -= c * dir.v;
  };
  project_off(c1, t1);
  project_off(c1, t2);
  const double n1 = c1.norm();
  bool ok = n1 > 1e-6;
  if (ok) {
    c1.u /= n1;
    c1.v /= n1;
    project_off(c2, t1);
    project_off(c2, t2);
    project_off(c2, c1);
    const double n2 = c2.norm();
    ok = n2 > 1e-6;
    if (ok) {
      c2.u /= n2;
      c2.v /= n2;
      return {c1, c2};
    }
  }
  // Complex or near-complex point: build the complement from a nullspace.
  const SurfacePoint& p = t1.base;
  const Eigen::Matrix<double, 3, 2> fx = unit_perp_frame(p.x);
  const Eigen::Matrix<double, 3, 2> fy = unit_perp_frame(p.y);
  auto coords = [&](const Tangent4& t) {
    Eigen::Vector4d c;
    c << fx.col(0).dot(t.u), fx.col(1).dot(t.u), fy.col(0).dot(t.v), fy.col(1).dot(t.v);
    return c;
  };
  Eigen::Matrix<double, 2, 4> tang;
  tang.row(0) = coords(t1).transpose();
  tang.row(1) = coords(t2).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(tang, Eigen::ComputeFullV);
  auto from_coords = [&](const Eigen::Vector4d& c) {
    return Tangent4(p, c(0) * fx.col(0) + c(1) * fx.col(1), c(2) * fy.col(0) + c(3) * fy.col(1));
  };
  return {from_coords(svd.matrixV().col(2)), from_coords(svd.matrixV().col(3))};
}

std::vector<ChartParams> sample_params(const LagrangianSurface& surface, int n,
                                       std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<ChartParams> out;
  out.reserve(static_cast<std::size_t>(n));
  const bool torus = surface.topology() == Topology::kTorus;
  for (int i = 0; i < n; ++i) {
    ChartParams cp;
    if (torus) {
      const Chart& c = surface.chart(0);
      cp.chart = 0;
      cp.u = rng.uniform(c.u0, c.u1);
      cp.v = rng.uniform(c.v0, c.v1);
    } else {
      cp.chart = i % 2;
      const double rho = std::sqrt(rng.next_double());  // area-uniform in the disk
      const double alpha = rng.uniform(0.0, kTwoPi);
      cp.u = rho * std::cos(alpha);
      cp.v = rho * std::sin(alpha);
    }
    out.push_back(cp);
  }
  return out;
}

std::vector<MeshSample> build_mesh(const LagrangianSurface& surface, int resolution) {
  std::vector<MeshSample> mesh;
  auto push = [&](const ChartParams& cp) {
    MeshSample s;
    s.params = cp;
    auto [t1, t2] = tangent_frame(surface, cp);
    auto [n1, n2] = normal_frame(surface, cp);
    s.p = t1.base;
    s.t1 = t1; s.t2 = t2; s.n1 = n1; s.n2 = n2;
    mesh.push_back(std::move(s));
  };
  if (surface.topology() == Topology::kTorus) {
    const Chart& c = surface.chart(0);
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        push({0, c.u0 + (i + 0.5) * (c.u1 - c.u0) / resolution,
              c.v0 + (j + 0.5) * (c.v1 - c.v0) / resolution});
      }
    }
  } else {
    const int n_rho = std::max(4, resolution / 4);
    const int n_alpha = std::max(8, resolution);
    for (int chart = 0; chart < 2; ++chart) {
      for (int i = 0; i < n_rho; ++i) {
        for (int j = 0; j < n_alpha; ++j) {
          const double rho = kSphereMeshRadius * (i + 0.5) / n_rho;
          const double alpha = kTwoPi * (j + 0.5) / n_alpha;
          push({chart, rho * std::cos(alpha), rho * std::sin(alpha)});
        }
      }
    }
  }
  return mesh;
}

bool check_lagrangian(const LagrangianSurface& surface, int n_samples, double tol) {
  for (const ChartParams& cp : sample_params(surface, n_samples)) {
    const auto [t1, t2] = tangent_frame(surface, cp);
    if (std::abs(omega(t1, t2, ComplexStructureChoice::kPlus)) > tol) return false;
  }
  return true;
}

namespace {

/// Integral of f(jet) du dv over the closed surface (torus rectangle, or the
/// two owned unit disks of a sphere atlas in polar coordinates).
double integrate_param(const LagrangianSurface& surface, int n,
                       const std::function<double(const ChartJet&)>& f) {
  double total = 0.0;
  if (surface.topology() == Topology::kTorus) {
    const Chart& c = surface.chart(0);
    const double du = (c.u1 - c.u0) / n, dv = (c.v1 - c.v0) / n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        total += f(c.jet(c.u0 + (i + 0.5) * du, c.v0 + (j + 0.5) * dv)) * du * dv;
      }
    }
  } else {
    const GaussRule rho_rule = gauss_legendre(n, 0.0, 1.0);
    const int n_alpha = 2 * n;
    const double dalpha = kTwoPi / n_alpha;
    for (int chart = 0; chart < 2; ++chart) {
      const Chart& c = surface.chart(chart);
      for (int i = 0; i < n; ++i) {
        const double rho = rho_rule.nodes[i];
        for (int j = 0; j < n_alpha; ++j) {
          const double alpha = (j + 0.5) * dalpha;
          total += f(c.jet(rho * std::cos(alpha), rho * std::sin(alpha))) * rho *
                   rho_rule.weights[i] * dalpha;
        }
      }
    }
  }
  return total;
}

}  // namespace

HomologyClass homology_class(const LagrangianSurface& surface, int quadrature_n) {
  const double deg_m = integrate_param(surface, quadrature_n, [](const ChartJet& j) {
    return j.p.x.dot(j.dx_du.cross(j.dx_dv));
  }) / (4.0 * kPi);
  const double deg_n = integrate_param(surface, quadrature_n, [](const ChartJet& j) {
    return j.p.y.dot(j.dy_du.cross(j.dy_dv));
  }) / (4.0 * kPi);
  auto round_checked = [](double d, const char* which) {
    const double r = std::round(d);
    if (std::abs(d - r) >= 0.1) {
      throw NumericalError(std::string("homology_class: projection degree ") + which +
                           " is not near an integer (" + std::to_string(d) +
                           "); the atlas looks broken");
    }
    return static_cast<int>(r);
  };
  return HomologyClass{round_checked(deg_m, "m"), round_checked(deg_n, "n")};
}

EulerParity euler_parity_check(const LagrangianSurface& surface) {
  EulerParity result;
  result.cls = homology_class(surface);
  result.chi_candidate = 2 * result.cls.m * result.cls.n;
  result.even = (result.chi_candidate % 2) == 0;
  return result;
}

double surface_volume(const LagrangianSurface& surface, int quadrature_n) {
  return integrate_param(surface, quadrature_n, [](const ChartJet& j) {
    const double e = j.dx_du.squaredNorm() + j.dy_du.squaredNorm();
    const double f = j.dx_du.dot(j.dx_dv) + j.dy_du.dot(j.dy_dv);
    const double g = j.dx_dv.squaredNorm() + j.dy_dv.squaredNorm();
    return std::sqrt(std::max(0.0, e * g - f * f));
  });
}

Eigen::Vector3d TrigCurve3::raw(double s) const {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (std::size_t k = 0; k < cos_coef.size(); ++k) p += cos_coef[k] * std::cos(k * s);
  for (std::size_t k = 0; k < sin_coef.size(); ++k) p += sin_coef[k] * std::sin((k + 1) * s);
  return p;
}

Eigen::Vector3d TrigCurve3::raw_deriv(double s) const {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (std::size_t k = 1; k < cos_coef.size(); ++k) {
    p -= cos_coef[k] * (static_cast<double>(k) * std::sin(k * s));
  }
  for (std::size_t k = 0; k < sin_coef.size(); ++k) {
    p += sin_coef[k] * ((k + 1.0) * std::cos((k + 1) * s));
  }
  return p;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> TrigCurve3::point(double s) const {
  const Eigen::Vector3d p = raw(s), dp = raw_deriv(s);
  const double n = p.norm();
  if (n < 1e-3) throw NumericalError("TrigCurve3: curve passes too close to the origin");
  const Eigen::Vector3d g = p / n;
  return {g, dp / n - g * (g.dot(dp) / n)};
}

LagrangianSurface product_curve_torus(const TrigCurve3& c1, const TrigCurve3& c2) {
  Chart c;
  c.u0 = 0; c.u1 = kTwoPi; c.v0 = 0; c.v1 = kTwoPi;
  c.jet = [c1, c2](double u, double v) {
    const auto [x, dx] = c1.point(u);
    const auto [y, dy] = c2.point(v);
    ChartJet jet;
    jet.p = SurfacePoint(renormalize(x), renormalize(y));
    jet.dx_du = dx;
    jet.dx_dv = Eigen::Vector3d::Zero();
    jet.dy_du = Eigen::Vector3d::Zero();
    jet.dy_dv = dy;
    return jet;
  };
  return LagrangianSurface::parametric_torus(std::move(c));
}

namespace detail {

std::vector<Chart> graph_sphere_charts(const Eigen::Matrix3d& p_map,
                                       const Eigen::Matrix3d& q_map) {
  for (const Eigen::Matrix3d* m : {&p_map, &q_map}) {
    if ((m->transpose() * (*m) - Eigen::Matrix3d::Identity()).norm() > 1e-12) {
      throw std::invalid_argument("graph_sphere: maps must be orthogonal");
    }
  }
  std::vector<Chart> charts;
  for (int idx = 0; idx < 2; ++idx) {
    Chart c;
    c.u0 = c.v0 = -1.25;
    c.u1 = c.v1 = 1.25;
    c.jet = [idx, p_map, q_map](double s, double t) {
      Eigen::Vector3d q, qs, qt;
      stereo_jet(idx, s, t, q, qs, qt);
      ChartJet jet;
      jet.p = SurfacePoint(renormalize(p_map * q), renormalize(q_map * q));
      jet.dx_du = p_map * qs;
      jet.dx_dv = p_map * qt;
      jet.dy_du = q_map * qs;
      jet.dy_dv = q_map * qt;
      return jet;
    };
    charts.push_back(std::move(c));
  }
  return charts;
}

}  // namespace detail

LagrangianSurface graph_sphere(const Eigen::Matrix3d& p_map, const Eigen::Matrix3d& q_map) {
  auto charts = detail::graph_sphere_charts(p_map, q_map);
  return LagrangianSurface::parametric_sphere(charts[0], charts[1]);
}

Eigen::Matrix<double, 3, 2> unit_perp_frame(const Eigen::Vector3d& x) {
  int k = 0;
  if (std::abs(x(1)) < std::abs(x(k))) k = 1;
  if (std::abs(x(2)) < std::abs(x(k))) k = 2;
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e(k) = 1.0;
  Eigen::Vector3d a = e - x * x.dot(e);
  a.normalize();
  Eigen::Matrix<double, 3, 2> frame;
  frame.col(0) = a;
  frame.col(1) = x.cross(a);
  return frame;
}

}  // namespace tightlag

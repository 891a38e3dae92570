#include "tightlag/killing.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tightlag/errors.hpp"
#include "tightlag/rng.hpp"

namespace tightlag {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}

std::array<KillingField, 6> standard_killing_basis() {
  std::array<KillingField, 6> basis;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(i) = 1.0;
    basis[i] = KillingField{ProductAlgebraElement(e, Eigen::Vector3d::Zero())};
    basis[i + 3] = KillingField{ProductAlgebraElement(Eigen::Vector3d::Zero(), e)};
  }
  return basis;
}

Tangent4 killing_at(const KillingField& z, const SurfacePoint& p) {
  return Tangent4(p, z.generator.first.apply(p.x), z.generator.second.apply(p.y));
}

MomentMap::MomentMap(const KillingField& field)
    : a_(field.generator.first.axis()), b_(field.generator.second.axis()) {
  // Validate df = omega(xi, .) by central differences along random tangent
  // directions; the check also pins the global Hamiltonian sign.
  RngStream rng(0xf1e1d);
  auto raw_value = [this](const SurfacePoint& p) { return a_.dot(p.x) + b_.dot(p.y); };
  const double scale = std::max(1.0, field.generator.norm());
  double worst_plus = 0.0, worst_minus = 0.0;
  for (int i = 0; i < 10; ++i) {
    Eigen::Vector3d x(rng.normal(), rng.normal(), rng.normal());
    Eigen::Vector3d y(rng.normal(), rng.normal(), rng.normal());
    x.normalize();
    y.normalize();
    const SurfacePoint p(x, y);
    Eigen::Vector3d u(rng.normal(), rng.normal(), rng.normal());
    Eigen::Vector3d v(rng.normal(), rng.normal(), rng.normal());
    u -= x * x.dot(u);
    v -= y * y.dot(v);
    const Tangent4 dir(p, u, v);
    const double h = 1e-5;
    auto at = [&](double t) {
      return raw_value(SurfacePoint((x + t * u).normalized(), (y + t * v).normalized()));
    };
    const double fd = (at(h) - at(-h)) / (2.0 * h);
    const double pairing = omega(killing_at(field, p), dir, ComplexStructureChoice::kPlus);
    worst_plus = std::max(worst_plus, std::abs(fd - pairing) / scale);
    worst_minus = std::max(worst_minus, std::abs(-fd - pairing) / scale);
  }
  if (worst_plus <= 1e-6) {
    sign_ = 1.0;
  } else if (worst_minus <= 1e-6) {
    sign_ = -1.0;
  } else {
    throw NumericalError("MomentMap: differential identity failed validation (residual " +
                         std::to_string(std::min(worst_plus, worst_minus)) + ")");
  }
}

double MomentMap::value(const SurfacePoint& p) const {
  return sign_ * (a_.dot(p.x) + b_.dot(p.y));
}

double moment_map_value(const KillingField& z, const SurfacePoint& p) {
  return MomentMap(z).value(p);
}

Eigen::Vector2d normal_component(const KillingField& z, const LagrangianSurface& surface,
                                 const ChartParams& params) {
  const auto [n1, n2] = normal_frame(surface, params);
  const Tangent4 w = killing_at(z, n1.base);
  return Eigen::Vector2d(metric(w, n1), metric(w, n2));
}

bool ZeroReport::all_nondegenerate() const {
  for (const auto& z : zeros) {
    if (!z.nondegenerate) return false;
  }
  return true;
}

namespace {

using SectionFn = std::function<Eigen::Vector2d(const ChartParams&)>;

struct GridPoint {
  ChartParams params;
  double norm2;
};

/// Truncated-pseudo-inverse Newton step; handles rank-deficient Jacobians
/// (descending onto one-dimensional zero sets) in the same code path.
Eigen::Vector2d pinv_step(const Eigen::Matrix2d& j, const Eigen::Vector2d& f) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Vector2d c = svd.matrixU().transpose() * (-f);
  for (int i = 0; i < 2; ++i) {
    c(i) = (s(i) > 1e-10 * std::max(1.0, s(0))) ? c(i) / s(i) : 0.0;
  }
  return svd.matrixV() * c;
}

Eigen::Matrix2d fd_jacobian(const SectionFn& f, const ChartParams& cp, double h) {
  Eigen::Matrix2d j;
  ChartParams q = cp;
  q.u = cp.u + h;
  const Eigen::Vector2d fu_p = f(q);
  q.u = cp.u - h;
  const Eigen::Vector2d fu_m = f(q);
  q.u = cp.u;
  q.v = cp.v + h;
  const Eigen::Vector2d fv_p = f(q);
  q.v = cp.v - h;
  const Eigen::Vector2d fv_m = f(q);
  j.col(0) = (fu_p - fu_m) / (2.0 * h);
  j.col(1) = (fv_p - fv_m) / (2.0 * h);
  return j;
}

struct SectionSearch {
  std::vector<SectionZero> zeros;
  bool identically_zero = false;
  int failed = 0;
};

SectionSearch find_section_zeros(const LagrangianSurface& surface, const SectionFn& f,
                                 int resolution, double tol) {
  // Mesh the surface, collect local minima of |f|^2 as Newton candidates.
  std::vector<std::vector<GridPoint>> grids;  // row-major per chart
  std::vector<std::array<int, 2>> dims;       // (n_rows, n_cols)
  std::vector<bool> wrap_rows, wrap_cols;

  const bool torus = surface.topology() == Topology::kTorus;
  if (torus) {
    const Chart& c = surface.chart(0);
    std::vector<GridPoint> g;
    g.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        ChartParams cp{0, c.u0 + (i + 0.5) * (c.u1 - c.u0) / resolution,
                       c.v0 + (j + 0.5) * (c.v1 - c.v0) / resolution};
        g.push_back({cp, f(cp).squaredNorm()});
      }
    }
    grids.push_back(std::move(g));
    dims.push_back({resolution, resolution});
    wrap_rows.push_back(true);
    wrap_cols.push_back(true);
  } else {
    const int n_rho = std::max(8, resolution / 4);
    const int n_alpha = std::max(16, resolution);
    for (int chart = 0; chart < 2; ++chart) {
      std::vector<GridPoint> g;
      g.reserve(static_cast<std::size_t>(n_rho) * n_alpha);
      for (int i = 0; i < n_rho; ++i) {
        for (int j = 0; j < n_alpha; ++j) {
          const double rho = 1.15 * (i + 0.5) / n_rho;
          const double alpha = kTwoPi * (j + 0.5) / n_alpha;
          ChartParams cp{chart, rho * std::cos(alpha), rho * std::sin(alpha)};
          g.push_back({cp, f(cp).squaredNorm()});
        }
      }
      grids.push_back(std::move(g));
      dims.push_back({n_rho, n_alpha});
      wrap_rows.push_back(false);
      wrap_cols.push_back(true);
    }
  }

  SectionSearch result;
  double max_norm2 = 0.0;
  for (const auto& g : grids) {
    for (const auto& gp : g) max_norm2 = std::max(max_norm2, gp.norm2);
  }
  if (max_norm2 < 1e-20) {
    result.identically_zero = true;
    return result;
  }

  // Candidate = grid node not exceeded by any 8-neighborhood value.
  std::vector<ChartParams> candidates;
  for (std::size_t gi = 0; gi < grids.size(); ++gi) {
    const auto& g = grids[gi];
    const int nr = dims[gi][0], nc = dims[gi][1];
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nc; ++j) {
        const double val = g[i * nc + j].norm2;
        bool is_min = true;
        for (int di = -1; di <= 1 && is_min; ++di) {
          for (int dj = -1; dj <= 1 && is_min; ++dj) {
            if (di == 0 && dj == 0) continue;
            int ii = i + di, jj = j + dj;
            if (wrap_rows[gi]) ii = (ii + nr) % nr;
            if (wrap_cols[gi]) jj = (jj + nc) % nc;
            if (ii < 0 || ii >= nr || jj < 0 || jj >= nc) continue;
            if (g[ii * nc + jj].norm2 < val) is_min = false;
          }
        }
        if (is_min) candidates.push_back(g[i * nc + j].params);
      }
    }
  }

  const double fd_h = 1e-6;
  const double param_merge = 1e-4;
  const double ambient_merge = 1e-6;

  auto torus_param_dist = [&](const ChartParams& a, const ChartParams& b) {
    const Chart& c = surface.chart(0);
    const double pu = c.u1 - c.u0, pv = c.v1 - c.v0;
    double du = std::fmod(std::abs(a.u - b.u), pu);
    double dv = std::fmod(std::abs(a.v - b.v), pv);
    du = std::min(du, pu - du);
    dv = std::min(dv, pv - dv);
    return std::hypot(du, dv);
  };

  for (const ChartParams& start : candidates) {
    ChartParams cp = start;
    Eigen::Vector2d val = f(cp);
    bool converged = false;
    bool out_of_chart = false;
    for (int it = 0; it < 60; ++it) {
      if (val.norm() <= 1e-13) {
        converged = true;
        break;
      }
      const Eigen::Matrix2d j = fd_jacobian(f, cp, fd_h);
      const Eigen::Vector2d step = pinv_step(j, val);
      if (!step.allFinite() || step.norm() < 1e-16) break;
      double lambda = 1.0;
      bool improved = false;
      for (int half = 0; half < 14; ++half) {
        ChartParams trial = cp;
        trial.u = cp.u + lambda * step(0);
        trial.v = cp.v + lambda * step(1);
        if (!torus && std::hypot(trial.u, trial.v) > 1.24) {
          lambda *= 0.5;
          continue;
        }
        const Eigen::Vector2d tv = f(trial);
        if (tv.norm() < val.norm() * (1.0 - 0.25 * lambda) + 1e-300) {
          cp = trial;
          val = tv;
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved) break;
      if (!torus && std::hypot(cp.u, cp.v) > 1.2) {
        out_of_chart = true;  // the twin chart owns this region
        break;
      }
    }
    if (val.norm() <= 1e-13) converged = true;
    if (out_of_chart) continue;
    if (!converged || val.norm() > tol) {
      // Candidates that merely sit at a positive local minimum of |f| are
      // normal (no zero nearby); count only near-zero failures.
      if (val.norm() <= 1e3 * tol) ++result.failed;
      continue;
    }

    const SurfacePoint p = surface.point_at(cp);
    bool duplicate = false;
    for (const auto& z : result.zeros) {
      const double ambient =
          std::sqrt((z.p.x - p.x).squaredNorm() + (z.p.y - p.y).squaredNorm());
      if (ambient <= ambient_merge) {
        duplicate = true;
        break;
      }
      if (z.params.chart == cp.chart) {
        const double pd = torus ? torus_param_dist(z.params, cp)
                                : std::hypot(z.params.u - cp.u, z.params.v - cp.v);
        if (pd <= param_merge) {
          duplicate = true;
          break;
        }
      }
    }
    if (duplicate) continue;

    SectionZero zero;
    zero.params = cp;
    zero.p = p;
    const Eigen::Matrix2d j = fd_jacobian(f, cp, fd_h);
    zero.nondegenerate = std::abs(j.determinant()) > 1e-8;
    result.zeros.push_back(zero);
  }
  return result;
}

}  // namespace

ZeroReport find_zeros(const KillingField& z, const LagrangianSurface& surface,
                      int mesh_resolution, double tol) {
  SectionFn section = [&](const ChartParams& cp) { return normal_component(z, surface, cp); };
  SectionSearch search = find_section_zeros(surface, section, mesh_resolution, tol);
  ZeroReport report;
  report.zeros = std::move(search.zeros);
  report.section_identically_zero = search.identically_zero;
  report.failed_candidates = search.failed;
  return report;
}

MorseCount morse_count(const KillingField& z, const LagrangianSurface& surface,
                       int mesh_resolution) {
  const MomentMap moment(z);
  SectionFn gradient = [&](const ChartParams& cp) {
    const ChartJet jet = surface.jet_at(cp);
    const Eigen::Vector3d a = moment.sign() * z.generator.first.axis();
    const Eigen::Vector3d b = moment.sign() * z.generator.second.axis();
    return Eigen::Vector2d(a.dot(jet.dx_du) + b.dot(jet.dy_du),
                           a.dot(jet.dx_dv) + b.dot(jet.dy_dv));
  };
  SectionFn section = [&](const ChartParams& cp) { return normal_component(z, surface, cp); };

  const SectionSearch crit = find_section_zeros(surface, gradient, mesh_resolution, 1e-9);
  const SectionSearch zeros = find_section_zeros(surface, section, mesh_resolution, 1e-9);
  if (crit.identically_zero || zeros.identically_zero) {
    throw NumericalError("morse_count: the field is degenerate along the surface");
  }
  MorseCount mc;
  mc.critical_points = static_cast<int>(crit.zeros.size());
  mc.section_zeros = static_cast<int>(zeros.zeros.size());
  if (mc.critical_points != mc.section_zeros) {
    throw NumericalError("morse_count: critical-point count " +
                         std::to_string(mc.critical_points) + " != section-zero count " +
                         std::to_string(mc.section_zeros) +
                         " (bug or insufficient mesh resolution)");
  }
  mc.count = mc.critical_points;
  mc.all_nondegenerate = true;
  for (const auto& zr : zeros.zeros) mc.all_nondegenerate &= zr.nondegenerate;
  for (const auto& cr : crit.zeros) mc.all_nondegenerate &= cr.nondegenerate;
  return mc;
}

NullityReport killing_nullity(const LagrangianSurface& surface, int n_points, double tol) {
  if (n_points < 12) throw std::invalid_argument("killing_nullity: need at least 12 points");
  if (tol <= 0) throw std::invalid_argument("killing_nullity: tolerance must be positive");
  const auto basis = standard_killing_basis();
  const auto points = sample_params(surface, n_points, 0xa11);
  Eigen::MatrixXd m(6, 2 * n_points);
  for (int k = 0; k < n_points; ++k) {
    // One frame evaluation per point, shared by the six fields.
    const auto [n1, n2] = normal_frame(surface, points[k]);
    for (int i = 0; i < 6; ++i) {
      const Tangent4 w = killing_at(basis[i], n1.base);
      m(i, 2 * k) = metric(w, n1);
      m(i, 2 * k + 1) = metric(w, n2);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();

  NullityReport report;
  report.singular_values.assign(sv.data(), sv.data() + sv.size());
  report.tolerances = {10.0 * tol, tol, 0.1 * tol};
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  for (int t = 0; t < 3; ++t) {
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
      if (sv(i) > report.tolerances[t] * smax) ++rank;
    }
    report.rank_by_tolerance[t] = rank;
  }
  report.rank = report.rank_by_tolerance[1];
  report.stable = report.rank_by_tolerance[0] == report.rank_by_tolerance[1] &&
                  report.rank_by_tolerance[1] == report.rank_by_tolerance[2];
  return report;
}

double psi2_pairing(const Eigen::Vector2d& z, const Eigen::Vector2d& x,
                    const Eigen::Vector2d& y, double theta) {
  if (!(theta >= kPi / 4 - 1e-12 && theta <= 3 * kPi / 4 + 1e-12)) {
    throw std::invalid_argument("psi2_pairing: theta outside [pi/4, 3pi/4]");
  }
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  return x(0) * y(1) * (z(0) * c2 + z(1) * s2) - x(1) * y(0) * (z(0) * s2 + z(1) * c2);
}

int dim_im_psi2(double theta, double tol) {
  if (!(theta >= kPi / 4 - 1e-12 && theta <= 3 * kPi / 4 + 1e-12)) {
    throw std::invalid_argument("dim_im_psi2: theta outside [pi/4, 3pi/4]");
  }
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  Eigen::Matrix2d m;
  m << c2, s2, s2, c2;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  int rank = 0;
  for (int i = 0; i < 2; ++i) {
    if (svd.singularValues()(i) > tol * std::max(1.0, svd.singularValues()(0))) ++rank;
  }
  return rank;
}

int gotoh_bound(const LagrangianSurface& surface, const ChartParams& params, double corner_tol) {
  const auto [t1, t2] = tangent_frame(surface, params);
  const TwoPlane plane{t1.base, t1, t2};
  const AnglePair angles = kahler_angles(plane);
  if (std::abs(angles.diff - kPi / 2) > 1e-6) {
    throw NumericalError("gotoh_bound: tangent plane is not Lagrangian at this point");
  }
  const bool corner = angles.sum <= corner_tol || angles.sum >= kPi - corner_tol;
  return 2 + (corner ? 1 : 2);
}

MomentEmbedding::MomentEmbedding(std::vector<KillingField> fields) {
  if (fields.empty()) throw std::invalid_argument("MomentEmbedding: need at least one field");
  maps_.reserve(fields.size());
  for (const auto& f : fields) maps_.emplace_back(f);
}

Eigen::VectorXd MomentEmbedding::value(const SurfacePoint& p) const {
  Eigen::VectorXd out(dimension());
  for (int i = 0; i < dimension(); ++i) out(i) = maps_[static_cast<std::size_t>(i)].value(p);
  return out;
}

bool MomentEmbedding::substantial_check(const LagrangianSurface& surface, int n_samples,
                                        double tol) const {
  const auto points = sample_params(surface, n_samples, 0x5b57);
  Eigen::MatrixXd samples(n_samples, dimension());
  for (int k = 0; k < n_samples; ++k) {
    samples.row(k) = value(surface.point_at(points[static_cast<std::size_t>(k)])).transpose();
  }
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  samples.rowwise() -= mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(samples);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return false;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank == dimension();
}

int kuiper_bound(int n) {
  if (n < 1) throw std::invalid_argument("kuiper_bound: n must be >= 1");
  return n * (n + 3) / 2;
}

}  // namespace tightlag

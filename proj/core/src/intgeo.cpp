#include "tightlag/intgeo.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <nlohmann/json.hpp>

#include "tightlag/errors.hpp"
#include "tightlag/rng.hpp"

namespace tightlag {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kAngleMargin = 1e-9;    // relative-rotation transversality
constexpr double kTangencyMargin = 1e-9; // circle-pair tangency
}

double vol_so3() { return 8.0 * kPi * kPi; }
double vol_g() { return vol_so3() * vol_so3(); }

double wedge_angle(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w) {
  for (const Eigen::MatrixXd* m : {&v, &w}) {
    const Eigen::MatrixXd g = m->transpose() * (*m);
    if ((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).norm() > 1e-10) {
      throw std::invalid_argument("wedge_angle: input family is not orthonormal");
    }
  }
  Eigen::MatrixXd all(v.rows(), v.cols() + w.cols());
  all << v, w;
  const Eigen::MatrixXd gram = all.transpose() * all;
  return std::sqrt(std::max(0.0, gram.determinant()));
}

namespace {

Eigen::Vector4d frame_coords(const IsotropyFrame& frame, const Tangent4& t) {
  Eigen::Vector4d c;
  c << frame.fx.col(0).dot(t.u), frame.fx.col(1).dot(t.u),
       frame.fy.col(0).dot(t.v), frame.fy.col(1).dot(t.v);
  return c;
}

Eigen::Matrix<double, 4, 2> plane_coords(const IsotropyFrame& frame, const TwoPlane& p) {
  Eigen::Matrix<double, 4, 2> m;
  m.col(0) = frame_coords(frame, p.b1);
  m.col(1) = frame_coords(frame, p.b2);
  return m;
}

void require_common_base(const TwoPlane& v, const TwoPlane& w) {
  if ((v.base.x - w.base.x).norm() > 1e-9 || (v.base.y - w.base.y).norm() > 1e-9) {
    throw std::invalid_argument("sigma_k: planes must sit at a common base point");
  }
}

Eigen::Matrix4d isotropy_block(double phi, double psi) {
  Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
  k(0, 0) = std::cos(phi);  k(0, 1) = -std::sin(phi);
  k(1, 0) = std::sin(phi);  k(1, 1) = std::cos(phi);
  k(2, 2) = std::cos(psi);  k(2, 3) = -std::sin(psi);
  k(3, 2) = std::sin(psi);  k(3, 3) = std::cos(psi);
  return k;
}

}  // namespace

double sigma_k_integrand(const TwoPlane& v, const TwoPlane& w, const IsotropyFrame& frame,
                         double phi, double psi) {
  require_common_base(v, w);
  const Eigen::Matrix<double, 4, 2> vc = plane_coords(frame, v);
  const Eigen::Matrix<double, 4, 2> wc = isotropy_block(phi, -psi) * plane_coords(frame, w);
  return wedge_angle(vc, wc);
}

double sigma_k(const TwoPlane& v, const TwoPlane& w, int quadrature_n,
               const IsotropyFrame& frame) {
  if (quadrature_n < 1) throw std::invalid_argument("sigma_k: quadrature_n must be >= 1");
  require_common_base(v, w);
  const Eigen::Matrix<double, 4, 2> vc = plane_coords(frame, v);
  const Eigen::Matrix<double, 4, 2> wc = plane_coords(frame, w);
  const double h = kTwoPi / quadrature_n;
  double total = 0.0;
  for (int i = 0; i < quadrature_n; ++i) {
    const double phi = (i + 0.5) * h;
    for (int j = 0; j < quadrature_n; ++j) {
      const double psi = (j + 0.5) * h;
      Eigen::Matrix4d m;
      m.leftCols<2>() = vc;
      m.rightCols<2>() = isotropy_block(phi, -psi) * wc;
      total += std::abs(m.determinant());
    }
  }
  return total * h * h;
}

double sigma_k(const TwoPlane& v, const TwoPlane& w, int quadrature_n) {
  return sigma_k(v, w, quadrature_n, IsotropyFrame::standard_at(v.base));
}

IntersectionReport intersect_m0(const ProductGroupElement& g) {
  IntersectionReport report;
  const Rotation3 rel = g.second.inverse() * g.first;  // B^T A
  const double angle = rel.angle();
  if (angle < 1e-12) {
    report.degenerate = true;  // g M0 == M0
    return report;
  }
  report.transverse = angle >= kAngleMargin;
  const Eigen::Vector3d axis = rel.axis();
  for (const double s : {1.0, -1.0}) {
    const Eigen::Vector3d x = g.first * (s * axis);
    report.points.emplace_back(x, -x);
  }
  return report;
}

namespace {

struct CircleFactor {
  int count = 0;          // 0, 1, 2; -1 when the circles coincide
  bool margin_ok = false; // decisively 0 or decisively 2
  std::vector<Eigen::Vector3d> points;
};

/// Intersection of the latitude circle {<e1,x> = a} with {<m,x> = a}.
CircleFactor latitude_circle_pair(double a, const Eigen::Vector3d& m) {
  CircleFactor factor;
  const Eigen::Vector3d e1 = Eigen::Vector3d::UnitX();
  const Eigen::Vector3d cr = e1.cross(m);
  const double cross_norm = cr.norm();
  const double d = m.x();
  if (cross_norm < 1e-12) {
    // Parallel axes: identical circles, or mirrored latitudes.
    if (d > 0.0 || a < 1e-12) {
      factor.count = -1;  // same circle (m = e1, or great circle with m = -e1)
    } else {
      factor.count = 0;   // {x1 = a} and {x1 = -a} are disjoint for a > 0
      factor.margin_ok = true;
    }
    return factor;
  }
  const double alpha = a / (1.0 + d);
  const double gamma2 = 1.0 - 2.0 * a * a / (1.0 + d);
  if (gamma2 > kTangencyMargin) {
    const Eigen::Vector3d base = alpha * (e1 + m);
    const Eigen::Vector3d dir = cr / cross_norm;
    const double gamma = std::sqrt(gamma2);
    factor.count = 2;
    factor.margin_ok = true;
    factor.points = {base + gamma * dir, base - gamma * dir};
  } else if (gamma2 < -kTangencyMargin) {
    factor.count = 0;
    factor.margin_ok = true;
  } else {
    factor.count = (gamma2 >= 0.0) ? 1 : 0;  // tangent or grazing: no margin
    if (gamma2 >= 0.0) factor.points = {alpha * (e1 + m)};
  }
  return factor;
}

}  // namespace

IntersectionReport intersect_torus(double a, double b, const ProductGroupElement& g) {
  IntersectionReport report;
  const CircleFactor f1 = latitude_circle_pair(a, g.first * Eigen::Vector3d::UnitX());
  const CircleFactor f2 = latitude_circle_pair(b, g.second * Eigen::Vector3d::UnitX());
  const bool f1_empty = f1.count == 0, f2_empty = f2.count == 0;
  if ((f1.count == -1 || f2.count == -1) && !f1_empty && !f2_empty) {
    report.degenerate = true;  // a whole circle (or the torus) survives
    return report;
  }
  if (f1_empty || f2_empty) {
    report.transverse = (f1_empty ? f1.margin_ok : true) && (f2_empty ? f2.margin_ok : true);
    return report;
  }
  report.transverse = f1.margin_ok && f2.margin_ok;
  for (const auto& x : f1.points) {
    for (const auto& y : f2.points) {
      report.points.emplace_back(x.normalized(), y.normalized());
    }
  }
  return report;
}

namespace {

struct MeshPoint {
  ChartParams params;
  SurfacePoint p;
};

std::vector<MeshPoint> surface_cloud(const LagrangianSurface& surface, int resolution) {
  std::vector<MeshPoint> cloud;
  if (surface.topology() == Topology::kTorus) {
    const Chart& c = surface.chart(0);
    cloud.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        ChartParams cp{0, c.u0 + (i + 0.5) * (c.u1 - c.u0) / resolution,
                       c.v0 + (j + 0.5) * (c.v1 - c.v0) / resolution};
        cloud.push_back({cp, surface.point_at(cp)});
      }
    }
  } else {
    const int n_rho = std::max(6, resolution / 4);
    const int n_alpha = std::max(12, resolution);
    for (int chart = 0; chart < 2; ++chart) {
      for (int i = 0; i < n_rho; ++i) {
        for (int j = 0; j < n_alpha; ++j) {
          const double rho = 1.1 * (i + 0.5) / n_rho;
          const double alpha = kTwoPi * (j + 0.5) / n_alpha;
          ChartParams cp{chart, rho * std::cos(alpha), rho * std::sin(alpha)};
          cloud.push_back({cp, surface.point_at(cp)});
        }
      }
    }
  }
  return cloud;
}

double dist6(const SurfacePoint& a, const SurfacePoint& b) {
  return std::sqrt((a.x - b.x).squaredNorm() + (a.y - b.y).squaredNorm());
}

std::int64_t cell_key(const Eigen::Vector3d& x, double cell) {
  const auto q = [cell](double t) { return static_cast<std::int64_t>(std::floor(t / cell)) + 512; };
  return (q(x(0)) << 20) | (q(x(1)) << 10) | q(x(2));
}

}  // namespace

IntersectionReport intersect_generic(const LagrangianSurface& l1, const LagrangianSurface& l2,
                                     int mesh_resolution, double tol) {
  IntersectionReport report;
  const std::vector<MeshPoint> cloud1 = surface_cloud(l1, mesh_resolution);
  const std::vector<MeshPoint> cloud2 = surface_cloud(l2, mesh_resolution);

  // Mesh spacing estimate drives the proximity threshold.
  const double spacing = 2.5 * kTwoPi / mesh_resolution;
  const double thresh = std::max(0.15, spacing);

  // Bucket cloud2 by the first-factor position to keep pairing near-linear.
  std::unordered_map<std::int64_t, std::vector<int>> buckets;
  for (int i = 0; i < static_cast<int>(cloud2.size()); ++i) {
    buckets[cell_key(cloud2[static_cast<std::size_t>(i)].p.x, thresh)].push_back(i);
  }

  struct Candidate {
    double dist;
    int i, j;
  };
  std::vector<Candidate> candidates;
  int overlap_hits = 0;
  for (int i = 0; i < static_cast<int>(cloud1.size()); ++i) {
    const auto& mp = cloud1[static_cast<std::size_t>(i)];
    double best = 1e300;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          const Eigen::Vector3d probe =
              mp.p.x + thresh * Eigen::Vector3d(dx, dy, dz);
          const auto it = buckets.find(cell_key(probe, thresh));
          if (it == buckets.end()) continue;
          for (int j : it->second) {
            const double d = dist6(mp.p, cloud2[static_cast<std::size_t>(j)].p);
            best = std::min(best, d);
            if (d < thresh) candidates.push_back({d, i, j});
          }
        }
      }
    }
    if (best < 0.75 * spacing) ++overlap_hits;
  }

  // If most mesh points of l1 essentially lie on l2 the surfaces overlap.
  if (overlap_hits > static_cast<int>(0.9 * cloud1.size())) {
    report.degenerate = true;
    return report;
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
  if (candidates.size() > 600) candidates.resize(600);

  const bool torus1 = l1.topology() == Topology::kTorus;
  const bool torus2 = l2.topology() == Topology::kTorus;
  auto in_range = [](bool torus, const ChartParams& cp) {
    return torus || std::hypot(cp.u, cp.v) <= 1.24;
  };

  struct Found {
    SurfacePoint p;
    ChartParams cp1, cp2;
  };
  std::vector<Found> found;

  for (const Candidate& cand : candidates) {
    ChartParams cp1 = cloud1[static_cast<std::size_t>(cand.i)].params;
    ChartParams cp2 = cloud2[static_cast<std::size_t>(cand.j)].params;
    bool converged = false;
    double residual = 1e300;
    for (int it = 0; it < 60; ++it) {
      const ChartJet j1 = l1.jet_at(cp1);
      const ChartJet j2 = l2.jet_at(cp2);
      Eigen::Matrix<double, 6, 1> f;
      f << j1.p.x - j2.p.x, j1.p.y - j2.p.y;
      residual = f.norm();
      if (residual <= 1e-11) {
        converged = true;
        break;
      }
      Eigen::Matrix<double, 6, 4> jac;
      jac.col(0) << j1.dx_du, j1.dy_du;
      jac.col(1) << j1.dx_dv, j1.dy_dv;
      jac.col(2) << -j2.dx_du, -j2.dy_du;
      jac.col(3) << -j2.dx_dv, -j2.dy_dv;
      const Eigen::Vector4d step = jac.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-f);
      if (!step.allFinite()) break;
      double lambda = 1.0;
      bool improved = false;
      for (int half = 0; half < 12; ++half) {
        ChartParams t1{cp1.chart, cp1.u + lambda * step(0), cp1.v + lambda * step(1)};
        ChartParams t2{cp2.chart, cp2.u + lambda * step(2), cp2.v + lambda * step(3)};
        if (!in_range(torus1, t1) || !in_range(torus2, t2)) {
          lambda *= 0.5;
          continue;
        }
        Eigen::Matrix<double, 6, 1> ft;
        const SurfacePoint q1 = l1.point_at(t1), q2 = l2.point_at(t2);
        ft << q1.x - q2.x, q1.y - q2.y;
        if (ft.norm() < residual * (1.0 - 0.25 * lambda) + 1e-300) {
          cp1 = t1;
          cp2 = t2;
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved) break;
    }
    if (!converged || residual > std::max(tol, 1e-11)) continue;

    const SurfacePoint p = l1.point_at(cp1);
    bool duplicate = false;
    for (const auto& fz : found) {
      if (dist6(fz.p, p) <= 1e-6) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.push_back({p, cp1, cp2});
  }

  // Unexpectedly many isolated solutions means a non-transverse overlap the
  // point-count heuristic did not catch.
  if (found.size() > 16) {
    report.degenerate = true;
    return report;
  }

  report.transverse = true;
  for (const auto& fz : found) {
    const auto [a1, a2] = tangent_frame(l1, fz.cp1);
    const auto [b1, b2] = tangent_frame(l2, fz.cp2);
    const IsotropyFrame frame = IsotropyFrame::standard_at(fz.p);
    Eigen::Matrix4d span;
    span.col(0) = frame_coords(frame, a1);
    span.col(1) = frame_coords(frame, a2);
    span.col(2) = frame_coords(frame, b1);
    span.col(3) = frame_coords(frame, b2);
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(span);
    if (svd.singularValues()(3) < 1e-7) report.transverse = false;
    report.points.push_back(fz.p);
  }
  return report;
}

IntersectionReport count_intersection(const LagrangianSurface& surface,
                                      const ProductGroupElement& g, int mesh_resolution) {
  switch (surface.kind()) {
    case LagrangianSurface::Kind::kAntiDiagonalSphere:
      return intersect_m0(g);
    case LagrangianSurface::Kind::kLatitudeTorus:
      return intersect_torus(surface.torus_a(), surface.torus_b(), g);
    default:
      return intersect_generic(surface, transformed(surface, g), mesh_resolution);
  }
}

MonteCarloEstimate poincare_mc(const LagrangianSurface& surface, long long n_samples,
                               std::uint64_t seed, int workers) {
  if (n_samples <= 0) throw std::invalid_argument("poincare_mc: need a positive sample count");
  if (workers < 1) throw std::invalid_argument("poincare_mc: need at least one worker");

  struct Chunk {
    double sum = 0.0, sum_sq = 0.0;
    long long kept = 0, degenerate = 0;
  };
  const RngStream root(seed);
  auto run_chunk = [&surface, &root](int worker, long long count) {
    Chunk chunk;
    RngStream rng = root.derived(static_cast<std::uint64_t>(worker));
    for (long long i = 0; i < count; ++i) {
      const ProductGroupElement g = haar_sample(rng);
      const IntersectionReport rep = count_intersection(surface, g);
      if (rep.degenerate) {
        ++chunk.degenerate;
        continue;
      }
      const double c = rep.count();
      chunk.sum += c;
      chunk.sum_sq += c * c;
      ++chunk.kept;
    }
    return chunk;
  };

  std::vector<std::future<Chunk>> futures;
  const long long base = n_samples / workers, extra = n_samples % workers;
  for (int w = 0; w < workers; ++w) {
    const long long count = base + (w < extra ? 1 : 0);
    futures.push_back(std::async(std::launch::async, run_chunk, w, count));
  }
  Chunk total;
  for (auto& f : futures) {
    const Chunk c = f.get();  // worker order: deterministic accumulation
    total.sum += c.sum;
    total.sum_sq += c.sum_sq;
    total.kept += c.kept;
    total.degenerate += c.degenerate;
  }

  MonteCarloEstimate est;
  est.n_samples = n_samples;
  est.seed = seed;
  est.degenerate_draws = total.degenerate;
  if (total.kept == 0) throw NumericalError("poincare_mc: every draw was degenerate");
  const double mean_count = total.sum / total.kept;
  est.mean = vol_g() * mean_count;
  if (total.kept > 1) {
    const double var =
        std::max(0.0, (total.sum_sq - total.kept * mean_count * mean_count) / (total.kept - 1));
    est.std_error = vol_g() * std::sqrt(var / total.kept);
  }
  return est;
}

TightnessVerdict tightness_check(const LagrangianSurface& surface, TightnessRegime regime,
                                 long long n_trials, double epsilon, std::uint64_t seed) {
  if (n_trials <= 0) throw std::invalid_argument("tightness_check: need a positive trial count");
  if (regime == TightnessRegime::kLocal && epsilon <= 0) {
    throw std::invalid_argument("tightness_check: local regime needs epsilon > 0");
  }
  TightnessVerdict verdict;
  verdict.regime = regime;
  verdict.trials = n_trials;
  verdict.expected_count = sb_z2(surface.topology_kind());
  verdict.epsilon = epsilon;
  verdict.seed = seed;

  RngStream rng(seed);
  for (long long i = 0; i < n_trials; ++i) {
    ProductGroupElement g;
    if (regime == TightnessRegime::kGlobal) {
      g = haar_sample(rng);
    } else {
      Eigen::Matrix<double, 6, 1> w;
      for (int k = 0; k < 6; ++k) w(k) = rng.normal();
      w.normalize();
      const double t = epsilon * (1.0 - rng.next_double());  // uniform in (0, epsilon]
      g = group_exp(t * ProductAlgebraElement(w.head<3>(), w.tail<3>()));
    }
    const IntersectionReport rep = count_intersection(surface, g);
    if (rep.degenerate || !rep.transverse) continue;
    ++verdict.transverse_trials;
    if (rep.count() != verdict.expected_count) {
      verdict.violations.push_back({g, rep.count()});
    }
  }
  return verdict;
}

void write_violations_json(const TightnessVerdict& verdict, std::ostream& out) {
  char buf[64];
  auto num = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  auto matrix = [&](const Rotation3& r) {
    std::string s = "[";
    for (int i = 0; i < 3; ++i) {
      s += "[";
      for (int j = 0; j < 3; ++j) {
        s += num(r.matrix()(i, j));
        if (j < 2) s += ", ";
      }
      s += (i < 2) ? "], " : "]";
    }
    return s + "]";
  };
  out << "{\n  \"expected_count\": " << verdict.expected_count << ",\n  \"violations\": [";
  for (std::size_t i = 0; i < verdict.violations.size(); ++i) {
    const auto& v = verdict.violations[i];
    out << (i ? ",\n    " : "\n    ") << "{\"first\": " << matrix(v.g.first)
        << ", \"second\": " << matrix(v.g.second) << ", \"count\": " << v.count << "}";
  }
  out << (verdict.violations.empty() ? "]" : "\n  ]") << "\n}\n";
}

std::vector<TightnessViolation> read_violations_json(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<TightnessViolation> out;
  for (const auto& item : doc.at("violations")) {
    Eigen::Matrix3d a, b;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        a(i, j) = item.at("first").at(i).at(j).get<double>();
        b(i, j) = item.at("second").at(i).at(j).get<double>();
      }
    }
    out.push_back({ProductGroupElement(Rotation3::from_matrix(a), Rotation3::from_matrix(b)),
                   item.at("count").get<int>()});
  }
  return out;
}

}  // namespace tightlag

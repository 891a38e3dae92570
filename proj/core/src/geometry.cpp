#include "tightlag/geometry.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/SVD>

namespace tightlag {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require_same_base(const SurfacePoint& a, const SurfacePoint& b, const char* op) {
  if ((a.x - b.x).norm() > 1e-9 || (a.y - b.y).norm() > 1e-9) {
    throw std::invalid_argument(std::string(op) + ": tangent vectors have different base points");
  }
}
}  // namespace

SurfacePoint::SurfacePoint(const Eigen::Vector3d& x_, const Eigen::Vector3d& y_) : x(x_), y(y_) {
  if (std::abs(x.norm() - 1.0) > 1e-12 || std::abs(y.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("SurfacePoint: components must be unit vectors");
  }
}

SurfacePoint apply_group(const ProductGroupElement& g, const SurfacePoint& p) {
  return SurfacePoint(g.first * p.x, g.second * p.y);
}

Tangent4::Tangent4(const SurfacePoint& base_, const Eigen::Vector3d& u_, const Eigen::Vector3d& v_)
    : base(base_), u(u_), v(v_) {
  if (std::abs(u.dot(base.x)) > 1e-12 * std::max(1.0, u.norm()) ||
      std::abs(v.dot(base.y)) > 1e-12 * std::max(1.0, v.norm())) {
    throw std::invalid_argument("Tangent4: vector is not tangent to the base point");
  }
}

Tangent4 apply_j(const Tangent4& t, ComplexStructureChoice choice) {
  const Eigen::Vector3d ju = t.base.x.cross(t.u);
  Eigen::Vector3d jv = t.base.y.cross(t.v);
  if (choice == ComplexStructureChoice::kMinus) jv = -jv;
  return Tangent4(t.base, ju, jv);
}

double metric(const Tangent4& t1, const Tangent4& t2) {
  require_same_base(t1.base, t2.base, "metric");
  return t1.u.dot(t2.u) + t1.v.dot(t2.v);
}

double omega(const Tangent4& t1, const Tangent4& t2, ComplexStructureChoice choice) {
  return metric(apply_j(t1, choice), t2);
}

TwoPlane TwoPlane::from_span(const Tangent4& t1, const Tangent4& t2) {
  require_same_base(t1.base, t2.base, "TwoPlane");
  const double n1 = t1.norm();
  if (n1 < 1e-10) throw std::invalid_argument("TwoPlane: degenerate span");
  Tangent4 b1(t1.base, t1.u / n1, t1.v / n1);
  const double c = metric(b1, t2);
  Tangent4 r(t2.base, t2.u - c * b1.u, t2.v - c * b1.v);
  const double n2 = r.norm();
  if (n2 < 1e-10) throw std::invalid_argument("TwoPlane: degenerate span");
  Tangent4 b2(r.base, r.u / n2, r.v / n2);
  return TwoPlane{t1.base, b1, b2};
}

AnglePair kahler_angles(const TwoPlane& p) {
  auto clamp01 = [](double x) { return std::min(1.0, std::max(0.0, x)); };
  const double w_plus = std::abs(omega(p.b1, p.b2, ComplexStructureChoice::kPlus));
  const double w_minus = std::abs(omega(p.b1, p.b2, ComplexStructureChoice::kMinus));
  return AnglePair{std::acos(clamp01(w_minus)), std::acos(clamp01(w_plus))};
}

bool is_lagrangian_plane(const TwoPlane& p, ComplexStructureChoice choice, double tol) {
  return std::abs(omega(p.b1, p.b2, choice)) <= tol;
}

TwoPlane plane_from_angles(double theta1, double theta2) {
  const SurfacePoint o(Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitX());
  const Eigen::Vector3d e2 = Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e3 = Eigen::Vector3d::UnitZ();
  Tangent4 t1(o, std::cos(theta1) * e2, std::sin(theta1) * e2);
  Tangent4 t2(o, std::cos(theta2) * e3, std::sin(theta2) * e3);
  return TwoPlane{o, t1, t2};
}

TwoPlane m_theta_plane(double theta) { return plane_from_angles(theta, theta - kPi / 2); }

TwoPlane isotropy_rotate(const TwoPlane& p, double phi, double psi) {
  const Rotation3 r1 = exp_so3(hat(phi * p.base.x));
  const Rotation3 r2 = exp_so3(hat(psi * p.base.y));
  auto rot = [&](const Tangent4& t) { return Tangent4(t.base, r1 * t.u, r2 * t.v); };
  return TwoPlane{p.base, rot(p.b1), rot(p.b2)};
}

int dim_im_psi2_at(double sum, double diff, double tol) {
  const double ss = std::sin(sum), sd = std::sin(diff);
  Eigen::Matrix2d m;
  m << 0.5 * (ss - sd), -0.5 * (ss + sd),
       0.5 * (ss + sd), -0.5 * (ss - sd);
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  int rank = 0;
  for (int i = 0; i < 2; ++i) {
    if (svd.singularValues()(i) > tol) ++rank;
  }
  return rank;
}

std::vector<ScanRow> scan_fundamental_domain(int resolution) {
  if (resolution < 2) throw std::invalid_argument("scan_fundamental_domain: resolution must be >= 2");
  std::vector<ScanRow> rows;
  rows.reserve(static_cast<std::size_t>(resolution) * resolution);
  const double h = kPi / (resolution - 1);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const double sum = i * h, diff = j * h;
      rows.push_back(ScanRow{sum, diff, dim_im_psi2_at(sum, diff)});
    }
  }
  return rows;
}

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out) {
  out << "sum,diff,dim_im_psi2\n";
  char buf[80];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d\n", r.sum, r.diff, r.dim_im_psi2);
    out << buf;
  }
}

}  // namespace tightlag

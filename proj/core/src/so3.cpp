#include "tightlag/so3.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

namespace tightlag {

Eigen::Matrix3d So3Element::matrix() const {
  Eigen::Matrix3d m;
  const double v1 = axis_(0), v2 = axis_(1), v3 = axis_(2);
  m << 0.0, -v3, v2,
       v3, 0.0, -v1,
       -v2, v1, 0.0;
  return m;
}

So3Element hat(const Eigen::Vector3d& v) { return So3Element(v); }

double inner_so3(const So3Element& a, const So3Element& b) { return a.axis().dot(b.axis()); }

So3Element bracket_so3(const So3Element& a, const So3Element& b) {
  return So3Element(a.axis().cross(b.axis()));
}

Rotation3 Rotation3::from_matrix(const Eigen::Matrix3d& m) {
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).norm();
  if (ortho > 1e-12) {
    throw std::invalid_argument("Rotation3: matrix is not orthogonal (residual " +
                                std::to_string(ortho) + ")");
  }
  if (std::abs(m.determinant() - 1.0) > 1e-12) {
    throw std::invalid_argument("Rotation3: determinant is not +1");
  }
  Rotation3 r;
  r.m_ = m;
  return r;
}

Rotation3 Rotation3::from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  w /= n; x /= n; y /= n; z /= n;
  Eigen::Matrix3d m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  Rotation3 r;
  r.m_ = m;
  return r;
}

double Rotation3::angle() const {
  // clamp handles trace rounding just past the [-1, 3] range
  const double c = std::min(1.0, std::max(-1.0, (m_.trace() - 1.0) / 2.0));
  return std::acos(c);
}

Eigen::Vector3d Rotation3::axis() const {
  Eigen::AngleAxisd aa(m_);
  if (aa.angle() == 0.0) return Eigen::Vector3d::UnitX();
  return aa.axis();
}

Rotation3 exp_so3(const So3Element& x) {
  const double t = x.norm();
  double a, b;  // R = I + a*hat + b*hat^2
  if (t < 1e-4) {
    const double t2 = t * t;
    a = 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0);
    b = 0.5 - t2 / 24.0 * (1.0 - t2 / 30.0);
  } else {
    a = std::sin(t) / t;
    b = (1.0 - std::cos(t)) / (t * t);
  }
  const Eigen::Matrix3d k = x.matrix();
  const Eigen::Matrix3d m = Eigen::Matrix3d::Identity() + a * k + b * (k * k);
  return Rotation3::from_matrix(m);
}

}  // namespace tightlag

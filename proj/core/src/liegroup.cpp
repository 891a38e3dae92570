#include "tightlag/liegroup.hpp"

#include <cmath>
#include <stdexcept>

namespace tightlag {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ProductAlgebraElement::norm() const {
  return std::sqrt(first.axis().squaredNorm() + second.axis().squaredNorm());
}

double inner(const ProductAlgebraElement& x, const ProductAlgebraElement& y) {
  return inner_so3(x.first, y.first) + inner_so3(x.second, y.second);
}

ProductAlgebraElement bracket(const ProductAlgebraElement& x, const ProductAlgebraElement& y) {
  return {bracket_so3(x.first, y.first), bracket_so3(x.second, y.second)};
}

ProductGroupElement group_exp(const ProductAlgebraElement& x) {
  return {exp_so3(x.first), exp_so3(x.second)};
}

ProductAlgebraElement adjoint(const ProductGroupElement& g, const ProductAlgebraElement& z) {
  return {g.first.adjoint(z.first), g.second.adjoint(z.second)};
}

Rotation3 haar_rotation(RngStream& rng) {
  // Shoemake's subgroup algorithm: exactly uniform on the unit quaternions.
  const double u1 = rng.next_double();
  const double u2 = rng.next_double();
  const double u3 = rng.next_double();
  const double r1 = std::sqrt(1.0 - u1), r2 = std::sqrt(u1);
  const double t1 = 2.0 * kPi * u2, t2 = 2.0 * kPi * u3;
  return Rotation3::from_quaternion(std::cos(t2) * r2, std::sin(t1) * r1,
                                    std::cos(t1) * r1, std::sin(t2) * r2);
}

ProductGroupElement haar_sample(RngStream& rng) {
  const Rotation3 a = haar_rotation(rng);
  const Rotation3 b = haar_rotation(rng);
  return {a, b};
}

ProductAlgebraElement h_basis(int i) {
  switch (i) {
    case 0: return {Eigen::Vector3d::UnitX(), Eigen::Vector3d::Zero()};
    case 1: return {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX()};
    default: throw std::invalid_argument("h_basis: index must be 0 or 1");
  }
}

ProductAlgebraElement m_theta_basis(double theta, int i) {
  const double c = std::cos(theta), s = std::sin(theta);
  switch (i) {
    case 0:
      return {Eigen::Vector3d(0, 0, c), Eigen::Vector3d(0, 0, s)};
    case 1:
      return {Eigen::Vector3d(0, -s, 0), Eigen::Vector3d(0, c, 0)};
    default: throw std::invalid_argument("m_theta_basis: index must be 0 or 1");
  }
}

ProductAlgebraElement m_theta_perp_basis(double theta, int i) {
  const double c = std::cos(theta), s = std::sin(theta);
  switch (i) {
    case 0:
      return {Eigen::Vector3d(0, 0, s), Eigen::Vector3d(0, 0, -c)};
    case 1:
      return {Eigen::Vector3d(0, -c, 0), Eigen::Vector3d(0, -s, 0)};
    default: throw std::invalid_argument("m_theta_perp_basis: index must be 0 or 1");
  }
}

CanonicalSplit canonical_decompose(const ProductAlgebraElement& z, double theta) {
  if (!(theta >= kPi / 4 - 1e-12 && theta <= 3 * kPi / 4 + 1e-12)) {
    throw std::invalid_argument("canonical_decompose: theta outside [pi/4, 3pi/4]");
  }
  auto project = [&z](const ProductAlgebraElement& b0, const ProductAlgebraElement& b1) {
    return inner(z, b0) * b0 + inner(z, b1) * b1;
  };
  CanonicalSplit split;
  split.h_part = project(h_basis(0), h_basis(1));
  split.m_part = project(m_theta_basis(theta, 0), m_theta_basis(theta, 1));
  split.perp_part = project(m_theta_perp_basis(theta, 0), m_theta_perp_basis(theta, 1));
  return split;
}

}  // namespace tightlag

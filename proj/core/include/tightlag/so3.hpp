#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tightlag {

/// Element of so(3), stored as its axis vector v so that the matrix form is
/// hat(v) with hat(v)w = v x w.  Antisymmetry is exact by construction.
class So3Element {
 public:
  So3Element() : axis_(Eigen::Vector3d::Zero()) {}
  explicit So3Element(const Eigen::Vector3d& axis) : axis_(axis) {}

  const Eigen::Vector3d& axis() const { return axis_; }
  Eigen::Matrix3d matrix() const;

  /// Matrix action hat(v) * w == v x w.
  Eigen::Vector3d apply(const Eigen::Vector3d& w) const { return axis_.cross(w); }

  /// Norm under <A,B> = -1/2 tr(AB), which equals the Euclidean axis norm.
  double norm() const { return axis_.norm(); }

  So3Element operator+(const So3Element& o) const { return So3Element(axis_ + o.axis_); }
  So3Element operator-(const So3Element& o) const { return So3Element(axis_ - o.axis_); }
  So3Element operator-() const { return So3Element(-axis_); }

 private:
  Eigen::Vector3d axis_;
};

inline So3Element operator*(double s, const So3Element& x) { return So3Element(s * x.axis()); }

So3Element hat(const Eigen::Vector3d& v);

/// -1/2 tr(AB); with axis storage this is the dot product of axes.
double inner_so3(const So3Element& a, const So3Element& b);

/// Matrix commutator AB - BA == hat(axis_a x axis_b).
So3Element bracket_so3(const So3Element& a, const So3Element& b);

/// Element of SO(3).  from_matrix validates orthogonality and det = +1 within
/// 1e-12; internal constructions (exponentials, quaternions, products) stay
/// well inside that envelope.
class Rotation3 {
 public:
  Rotation3() : m_(Eigen::Matrix3d::Identity()) {}

  static Rotation3 identity() { return Rotation3(); }
  static Rotation3 from_matrix(const Eigen::Matrix3d& m);
  /// Rotation from a unit quaternion (w, x, y, z).
  static Rotation3 from_quaternion(double w, double x, double y, double z);

  const Eigen::Matrix3d& matrix() const { return m_; }
  Rotation3 inverse() const { return Rotation3(m_.transpose(), unchecked_tag{}); }

  Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }
  Rotation3 operator*(const Rotation3& o) const { return Rotation3(m_ * o.m_, unchecked_tag{}); }

  /// Rotation angle in [0, pi].
  double angle() const;
  /// Unit rotation axis; arbitrary (e1) for the identity.
  Eigen::Vector3d axis() const;

  /// Conjugation action on the algebra: Ad_R hat(v) = hat(R v).
  So3Element adjoint(const So3Element& x) const { return So3Element(m_ * x.axis()); }

 private:
  struct unchecked_tag {};
  Rotation3(const Eigen::Matrix3d& m, unchecked_tag) : m_(m) {}
  Eigen::Matrix3d m_;
};

/// Matrix exponential of hat(v): Rodrigues form, series fallback near zero.
Rotation3 exp_so3(const So3Element& x);

}  // namespace tightlag

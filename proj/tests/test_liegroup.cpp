#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tightlag/liegroup.hpp"

using namespace tightlag;
using tightlag::testing::random_algebra;
using tightlag::testing::random_unit;
using tightlag::testing::random_vec;
using tightlag::testing::series_exp;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("hat of zero is the zero matrix") {
  CHECK(hat(Eigen::Vector3d::Zero()).matrix().norm() == 0.0);
}

TEST_CASE("hat of e3 is the generator of rotations about the z axis") {
  const Eigen::Matrix3d m = hat(Eigen::Vector3d::UnitZ()).matrix();
  CHECK(m(1, 0) == 1.0);
  CHECK(m(0, 1) == -1.0);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(2, 2) == 0.0);
  CHECK(m.cwiseAbs().sum() == 2.0);
}

TEST_CASE("hat acts as the cross product") {
  RngStream rng(11);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d u = random_vec(rng), w = random_vec(rng);
    worst = std::max(worst, (hat(u).matrix() * w - u.cross(w)).norm());
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("inner product normalization and symmetry") {
  const ProductAlgebraElement z(Eigen::Vector3d::UnitZ(), Eigen::Vector3d::Zero());
  CHECK(inner(z, z) == doctest::Approx(1.0).epsilon(1e-15));

  // -1/2 tr(AB) evaluated on the stored matrices, by hand.
  RngStream rng(12);
  for (int i = 0; i < 100; ++i) {
    const ProductAlgebraElement x = random_algebra(rng), y = random_algebra(rng);
    const double trace_form =
        -0.5 * ((x.first.matrix() * y.first.matrix()).trace() +
                (x.second.matrix() * y.second.matrix()).trace());
    CHECK(std::abs(inner(x, y) - trace_form) <= 1e-13);
    CHECK(std::abs(inner(x, y) - inner(y, x)) <= 1e-15);
  }
}

TEST_CASE("pairing of a bracket against the trace formula") {
  RngStream rng(13);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ProductAlgebraElement z = random_algebra(rng), x = random_algebra(rng),
                                y = random_algebra(rng);
    auto factor = [](const Eigen::Matrix3d& zm, const Eigen::Matrix3d& xm,
                     const Eigen::Matrix3d& ym) {
      return -0.5 * (zm * xm * ym - xm * zm * ym).trace();
    };
    const double trace_form =
        factor(z.first.matrix(), x.first.matrix(), y.first.matrix()) +
        factor(z.second.matrix(), x.second.matrix(), y.second.matrix());
    worst = std::max(worst, std::abs(inner(bracket(z, x), y) - trace_form));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("bracket is antisymmetric and matches the cross product") {
  RngStream rng(14);
  for (int i = 0; i < 50; ++i) {
    const ProductAlgebraElement x = random_algebra(rng);
    CHECK(bracket(x, x).norm() == 0.0);
    const Eigen::Vector3d u = random_vec(rng), v = random_vec(rng);
    const So3Element lhs = bracket_so3(hat(u), hat(v));
    CHECK((lhs.axis() - u.cross(v)).norm() <= 1e-14);
  }
}

TEST_CASE("bracket satisfies the Jacobi identity") {
  RngStream rng(15);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const ProductAlgebraElement x = random_algebra(rng), y = random_algebra(rng),
                                z = random_algebra(rng);
    const ProductAlgebraElement residual =
        bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    worst = std::max(worst, residual.norm());
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("exponential of zero is the identity") {
  CHECK((exp_so3(So3Element()).matrix() - Eigen::Matrix3d::Identity()).norm() == 0.0);
}

TEST_CASE("exponential matches the series oracle, including the quarter turn") {
  const So3Element quarter = hat(Eigen::Vector3d(0, 0, kPi / 2));
  const Eigen::Matrix3d closed = exp_so3(quarter).matrix();
  const Eigen::Matrix3d series = series_exp(quarter.matrix(), 30);
  CHECK((closed - series).norm() <= 1e-14);
  CHECK(closed(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(closed(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(closed(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(closed(0, 0)) <= 1e-15);

  RngStream rng(16);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const So3Element x = hat(random_vec(rng, 0.8));
    worst = std::max(worst, (exp_so3(x).matrix() - series_exp(x.matrix())).norm());
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("exponential near zero stays accurate through the series branch") {
  RngStream rng(17);
  for (const double scale : {1e-5, 1e-7, 1e-12}) {
    const So3Element x = hat(scale * random_unit(rng));
    const Eigen::Matrix3d closed = exp_so3(x).matrix();
    CHECK((closed - series_exp(x.matrix())).norm() <= 1e-15);
  }
}

TEST_CASE("exponential inverts by negation and recovers angle and axis") {
  RngStream rng(18);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d v = rng.uniform(0.05, 3.1) * random_unit(rng);
    const Rotation3 r = exp_so3(hat(v));
    const Rotation3 rinv = exp_so3(hat(-v));
    CHECK((r.matrix() * rinv.matrix() - Eigen::Matrix3d::Identity()).norm() <= 1e-14);
    CHECK(r.angle() == doctest::Approx(v.norm()).epsilon(1e-10));
    CHECK((r.axis() - v.normalized()).norm() <= 1e-9);
  }
}

TEST_CASE("4x4 block generator exponentiates to the cosine/sine block form") {
  RngStream rng(19);
  for (int i = 0; i < 20; ++i) {
    const double t1 = rng.uniform(0, kPi), t2 = rng.uniform(0, kPi);
    Eigen::Matrix4d x = Eigen::Matrix4d::Zero();
    x(0, 2) = -t1; x(2, 0) = t1;
    x(1, 3) = -t2; x(3, 1) = t2;
    Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
    expected(0, 0) = std::cos(t1); expected(0, 2) = -std::sin(t1);
    expected(2, 0) = std::sin(t1); expected(2, 2) = std::cos(t1);
    expected(1, 1) = std::cos(t2); expected(1, 3) = -std::sin(t2);
    expected(3, 1) = std::sin(t2); expected(3, 3) = std::cos(t2);
    CHECK((series_exp(x) - expected).norm() <= 1e-13);
  }
}

TEST_CASE("Rotation3 rejects non-orthogonal input") {
  Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(Rotation3::from_matrix(bad), std::invalid_argument);
  CHECK_THROWS_AS(Rotation3::from_matrix(-Eigen::Matrix3d::Identity()), std::invalid_argument);
}

TEST_CASE("haar sampling is deterministic for a fixed seed") {
  RngStream a(20250811), b(20250811);
  for (int i = 0; i < 100; ++i) {
    const ProductGroupElement ga = haar_sample(a), gb = haar_sample(b);
    CHECK(ga.first.matrix() == gb.first.matrix());
    CHECK(ga.second.matrix() == gb.second.matrix());
  }
}

TEST_CASE("haar samples average the sphere to zero") {
  RngStream rng(21);
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += haar_rotation(rng) * Eigen::Vector3d::UnitX();
  const Eigen::Vector3d mean = sum / n;
  const double bound = 3.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < 3; ++k) CHECK(std::abs(mean(k)) <= bound);
}

TEST_CASE("haar rotation angle follows the (1 - cos)/pi density") {
  // Kolmogorov-Smirnov against the exact CDF (alpha - sin alpha)/pi at the
  // 1% level (critical value 1.628/sqrt(n)).
  RngStream rng(22);
  const int n = 100000;
  std::vector<double> angles(n);
  for (int i = 0; i < n; ++i) angles[static_cast<std::size_t>(i)] = haar_rotation(rng).angle();
  std::sort(angles.begin(), angles.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = (angles[static_cast<std::size_t>(i)] -
                        std::sin(angles[static_cast<std::size_t>(i)])) / kPi;
    d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
  }
  CHECK(d <= 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("inner product is invariant under simultaneous conjugation") {
  RngStream rng(23);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ProductGroupElement g = haar_sample(rng);
    const ProductAlgebraElement x = random_algebra(rng), y = random_algebra(rng);
    worst = std::max(worst, std::abs(inner(adjoint(g, x), adjoint(g, y)) - inner(x, y)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("canonical decomposition: isotropy elements pass through") {
  const ProductAlgebraElement z(Eigen::Vector3d(0.7, 0, 0), Eigen::Vector3d(-1.3, 0, 0));
  const CanonicalSplit split = canonical_decompose(z, 1.1);
  CHECK((split.h_part - z).norm() <= 1e-15);
  CHECK(split.m_part.norm() <= 1e-15);
  CHECK(split.perp_part.norm() <= 1e-15);
}

TEST_CASE("canonical decomposition: the first tangent basis element is pure m") {
  const double theta = kPi / 3;
  const ProductAlgebraElement x = m_theta_basis(theta, 0);
  const CanonicalSplit split = canonical_decompose(x, theta);
  CHECK(split.h_part.norm() <= 1e-15);
  CHECK((split.m_part - x).norm() <= 1e-15);
  CHECK(split.perp_part.norm() <= 1e-15);
}

TEST_CASE("canonical decomposition against a Gram-projection oracle") {
  RngStream rng(24);
  for (int trial = 0; trial < 25; ++trial) {
    const double theta = rng.uniform(kPi / 4, 3 * kPi / 4);
    const ProductAlgebraElement z = random_algebra(rng);

    // Oracle: solve the Gram system over the six basis elements, then
    // reassemble the three orthogonal parts from the coefficients.
    std::vector<ProductAlgebraElement> basis = {
        h_basis(0), h_basis(1), m_theta_basis(theta, 0), m_theta_basis(theta, 1),
        m_theta_perp_basis(theta, 0), m_theta_perp_basis(theta, 1)};
    Eigen::MatrixXd gram(6, 6);
    Eigen::VectorXd rhs(6);
    for (int i = 0; i < 6; ++i) {
      rhs(i) = inner(z, basis[static_cast<std::size_t>(i)]);
      for (int j = 0; j < 6; ++j) {
        gram(i, j) = inner(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
      }
    }
    const Eigen::VectorXd c = gram.ldlt().solve(rhs);
    auto combine = [&](int i, int j) {
      return c(i) * basis[static_cast<std::size_t>(i)] + c(j) * basis[static_cast<std::size_t>(j)];
    };
    const ProductAlgebraElement h_expected = combine(0, 1);
    const ProductAlgebraElement m_expected = combine(2, 3);
    const ProductAlgebraElement perp_expected = combine(4, 5);

    const CanonicalSplit split = canonical_decompose(z, theta);
    CHECK((split.h_part - h_expected).norm() <= 1e-13);
    CHECK((split.m_part - m_expected).norm() <= 1e-13);
    CHECK((split.perp_part - perp_expected).norm() <= 1e-13);

    // Reconstruction and mutual orthogonality.
    const ProductAlgebraElement sum = split.h_part + split.m_part + split.perp_part;
    CHECK((sum - z).norm() <= 1e-14);
    CHECK(std::abs(inner(split.h_part, split.m_part)) <= 1e-12);
    CHECK(std::abs(inner(split.h_part, split.perp_part)) <= 1e-12);
    CHECK(std::abs(inner(split.m_part, split.perp_part)) <= 1e-12);
  }
}

TEST_CASE("canonical decomposition is idempotent on its parts") {
  RngStream rng(25);
  const double theta = 0.9;
  const ProductAlgebraElement z = random_algebra(rng);
  const CanonicalSplit split = canonical_decompose(z, theta);
  const CanonicalSplit again_h = canonical_decompose(split.h_part, theta);
  const CanonicalSplit again_m = canonical_decompose(split.m_part, theta);
  const CanonicalSplit again_p = canonical_decompose(split.perp_part, theta);
  CHECK((again_h.h_part - split.h_part).norm() <= 1e-14);
  CHECK(again_h.m_part.norm() + again_h.perp_part.norm() <= 1e-13);
  CHECK((again_m.m_part - split.m_part).norm() <= 1e-14);
  CHECK(again_m.h_part.norm() + again_m.perp_part.norm() <= 1e-13);
  CHECK((again_p.perp_part - split.perp_part).norm() <= 1e-14);
  CHECK(again_p.h_part.norm() + again_p.m_part.norm() <= 1e-13);
}

TEST_CASE("canonical decomposition rejects theta outside the window") {
  CHECK_THROWS_AS(canonical_decompose(ProductAlgebraElement{}, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(canonical_decompose(ProductAlgebraElement{}, 3.0), std::invalid_argument);
}

TEST_CASE("distinguished bases are orthonormal") {
  for (const double theta : {kPi / 4, 1.1, kPi / 2, 2.0, 3 * kPi / 4}) {
    std::vector<ProductAlgebraElement> basis = {
        h_basis(0), h_basis(1), m_theta_basis(theta, 0), m_theta_basis(theta, 1),
        m_theta_perp_basis(theta, 0), m_theta_perp_basis(theta, 1)};
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(inner(basis[i], basis[j]) - expected) <= 1e-14);
      }
    }
  }
}

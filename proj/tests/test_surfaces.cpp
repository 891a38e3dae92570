#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tightlag/errors.hpp"
#include "tightlag/surface_json.hpp"
#include "tightlag/surfaces.hpp"

using namespace tightlag;
using tightlag::testing::random_lagrangian_sphere;
using tightlag::testing::random_lagrangian_torus;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string data_path(const char* name) {
  return std::string(TIGHTLAG_TEST_DATA_DIR) + "/" + name;
}

// Does `expected` lie in the span of the (orthonormal) frame (a, b)?
bool in_span(const Tangent4& expected, const Tangent4& a, const Tangent4& b, double tol) {
  const double ca = metric(expected, a), cb = metric(expected, b);
  const Eigen::Vector3d ru = expected.u - ca * a.u - cb * b.u;
  const Eigen::Vector3d rv = expected.v - ca * a.v - cb * b.v;
  return std::sqrt(ru.squaredNorm() + rv.squaredNorm()) <= tol;
}
}  // namespace

TEST_CASE("anti-diagonal sphere goes through (e1, -e1)") {
  const LagrangianSurface m0 = LagrangianSurface::anti_diagonal_sphere();
  CHECK(m0.kind() == LagrangianSurface::Kind::kAntiDiagonalSphere);
  CHECK(m0.topology() == Topology::kSphere);
  const SurfacePoint p = m0.point_at({0, 1.0, 0.0});  // chart 0 parameter of x = e1
  CHECK((p.x - Eigen::Vector3d::UnitX()).norm() <= 1e-14);
  CHECK((p.y + Eigen::Vector3d::UnitX()).norm() <= 1e-14);
  // Every sampled point satisfies y = -x.
  for (const auto& cp : sample_params(m0, 50)) {
    const SurfacePoint q = m0.point_at(cp);
    CHECK((q.x + q.y).norm() <= 1e-13);
  }
}

TEST_CASE("latitude torus hits its defining heights exactly") {
  const LagrangianSurface t = LagrangianSurface::latitude_torus(0.0, 0.0);
  const SurfacePoint origin = t.point_at({0, 0.0, 0.0});
  CHECK((origin.x - Eigen::Vector3d(0, 1, 0)).norm() <= 1e-15);
  CHECK((origin.y - Eigen::Vector3d(0, 1, 0)).norm() <= 1e-15);

  const LagrangianSurface tab = LagrangianSurface::latitude_torus(0.62, 0.17);
  for (const auto& cp : sample_params(tab, 60)) {
    const SurfacePoint p = tab.point_at(cp);
    CHECK(p.x(0) == 0.62);
    CHECK(p.y(0) == 0.17);
  }
  CHECK_THROWS_AS(LagrangianSurface::latitude_torus(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(LagrangianSurface::latitude_torus(0.0, -0.1), std::invalid_argument);
}

TEST_CASE("frames of the anti-diagonal sphere at (e1, -e1)") {
  const LagrangianSurface m0 = LagrangianSurface::anti_diagonal_sphere();
  const ChartParams at_e1{0, 1.0, 0.0};
  const auto [t1, t2] = tangent_frame(m0, at_e1);
  const auto [n1, n2] = normal_frame(m0, at_e1);
  const SurfacePoint base = t1.base;
  const double s = 1.0 / std::sqrt(2.0);
  const Tangent4 exp_t1(base, s * Eigen::Vector3d::UnitY(), -s * Eigen::Vector3d::UnitY());
  const Tangent4 exp_t2(base, s * Eigen::Vector3d::UnitZ(), -s * Eigen::Vector3d::UnitZ());
  const Tangent4 exp_n1(base, s * Eigen::Vector3d::UnitY(), s * Eigen::Vector3d::UnitY());
  const Tangent4 exp_n2(base, s * Eigen::Vector3d::UnitZ(), s * Eigen::Vector3d::UnitZ());
  CHECK(in_span(exp_t1, t1, t2, 1e-12));
  CHECK(in_span(exp_t2, t1, t2, 1e-12));
  CHECK(in_span(exp_n1, n1, n2, 1e-12));
  CHECK(in_span(exp_n2, n1, n2, 1e-12));
}

TEST_CASE("frames are orthonormal and normals are the J-image for Lagrangian surfaces") {
  RngStream rng(51);
  const std::vector<LagrangianSurface> surfaces = {
      LagrangianSurface::anti_diagonal_sphere(), LagrangianSurface::latitude_torus(0.5, 0.3),
      random_lagrangian_torus(rng)};
  for (const auto& surface : surfaces) {
    for (const auto& cp : sample_params(surface, 40)) {
      const auto [t1, t2] = tangent_frame(surface, cp);
      const auto [n1, n2] = normal_frame(surface, cp);
      const std::vector<Tangent4> frame = {t1, t2, n1, n2};
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          const double expected = i == j ? 1.0 : 0.0;
          CHECK(std::abs(metric(frame[i], frame[j]) - expected) <= 1e-10);
        }
      }
      const Tangent4 jt1 = apply_j(t1, ComplexStructureChoice::kPlus);
      const Tangent4 jt2 = apply_j(t2, ComplexStructureChoice::kPlus);
      CHECK(std::sqrt((n1.u - jt1.u).squaredNorm() + (n1.v - jt1.v).squaredNorm()) <= 1e-10);
      CHECK(std::sqrt((n2.u - jt2.u).squaredNorm() + (n2.v - jt2.v).squaredNorm()) <= 1e-10);
    }
  }
}

TEST_CASE("mesh samples carry consistent frames") {
  const auto mesh = build_mesh(LagrangianSurface::anti_diagonal_sphere(), 12);
  CHECK(mesh.size() > 100);
  for (const auto& s : mesh) {
    CHECK(std::abs(metric(s.t1, s.t1) - 1.0) <= 1e-10);
    CHECK(std::abs(metric(s.t1, s.n1)) <= 1e-10);
    CHECK(std::abs(metric(s.t2, s.n2)) <= 1e-10);
  }
}

TEST_CASE("check_lagrangian separates the built-ins from the identity graph") {
  CHECK(check_lagrangian(LagrangianSurface::anti_diagonal_sphere()));
  CHECK(check_lagrangian(LagrangianSurface::latitude_torus(0.0, 0.0)));
  CHECK(check_lagrangian(LagrangianSurface::latitude_torus(0.9, 0.1)));
  // Graph of the identity: complex, so the pairing is nowhere near zero.
  const LagrangianSurface graph =
      graph_sphere(Eigen::Matrix3d::Identity(), Eigen::Matrix3d::Identity());
  CHECK_FALSE(check_lagrangian(graph));
  RngStream rng(52);
  CHECK(check_lagrangian(random_lagrangian_torus(rng)));
  CHECK(check_lagrangian(random_lagrangian_sphere(rng)));
}

TEST_CASE("homology classes of the standard surfaces") {
  const HomologyClass m0 = homology_class(LagrangianSurface::anti_diagonal_sphere());
  CHECK(m0.m == 1);
  CHECK(m0.n == -1);

  const HomologyClass torus = homology_class(LagrangianSurface::latitude_torus(0.4, 0.8));
  CHECK(torus.m == 0);
  CHECK(torus.n == 0);

  // Orientation-reversed copy: reflect the parametrizing sphere.
  Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
  reflect(2, 2) = -1.0;
  const HomologyClass reversed = homology_class(graph_sphere(reflect, -reflect));
  CHECK(reversed.m == -1);
  CHECK(reversed.n == 1);
}

TEST_CASE("homology class is invariant under the isometry action") {
  RngStream rng(53);
  for (int i = 0; i < 5; ++i) {
    const ProductGroupElement g = haar_sample(rng);
    const HomologyClass c =
        homology_class(transformed(LagrangianSurface::anti_diagonal_sphere(), g));
    CHECK(c.m == 1);
    CHECK(c.n == -1);
  }
}

TEST_CASE("euler parity reports 2mn and even parity") {
  const EulerParity m0 = euler_parity_check(LagrangianSurface::anti_diagonal_sphere());
  CHECK(m0.chi_candidate == -2);
  CHECK(m0.even);
  const EulerParity torus = euler_parity_check(LagrangianSurface::latitude_torus(0.2, 0.7));
  CHECK(torus.chi_candidate == 0);
  CHECK(torus.even);

  RngStream rng(54);
  for (int i = 0; i < 6; ++i) {
    CHECK(euler_parity_check(random_lagrangian_torus(rng)).even);
    CHECK(euler_parity_check(random_lagrangian_sphere(rng)).even);
  }
}

TEST_CASE("Betti sums by topology") {
  CHECK(sb_z2(TopologyKind::kSphere) == 2);
  CHECK(sb_z2(TopologyKind::kTorus) == 4);
  CHECK(sb_z2(TopologyKind::kRealProjectivePlane) == 3);
  CHECK(sb_z2(TopologyKind::kKleinBottle) == 4);
}

TEST_CASE("surface volumes") {
  const double vol_m0 = surface_volume(LagrangianSurface::anti_diagonal_sphere());
  CHECK(std::abs(vol_m0 - 8 * kPi) / (8 * kPi) <= 1e-6);

  const double vol_t00 = surface_volume(LagrangianSurface::latitude_torus(0, 0));
  CHECK(std::abs(vol_t00 - 4 * kPi * kPi) / (4 * kPi * kPi) <= 1e-6);

  for (const auto [a, b] : {std::pair{0.5, 0.3}, std::pair{0.9, 0.1}, std::pair{0.33, 0.77}}) {
    const double expected = 4 * kPi * kPi * std::sqrt(1 - a * a) * std::sqrt(1 - b * b);
    const double vol = surface_volume(LagrangianSurface::latitude_torus(a, b));
    CHECK(std::abs(vol - expected) / expected <= 1e-6);
  }
}

TEST_CASE("broken atlases are rejected") {
  // A non-periodic "torus" chart (spiral in the second factor).
  Chart spiral;
  spiral.u0 = 0; spiral.u1 = 2 * kPi; spiral.v0 = 0; spiral.v1 = 2 * kPi;
  spiral.jet = [](double u, double v) {
    const double h = 0.1 * v;  // drifts: chart(u, 0) != chart(u, 2pi)
    const double r = std::sqrt(1.0 - h * h);
    ChartJet jet;
    jet.p = SurfacePoint(Eigen::Vector3d(0, std::cos(u), std::sin(u)),
                         Eigen::Vector3d(h, r * std::cos(v), r * std::sin(v)));
    jet.dx_du = Eigen::Vector3d(0, -std::sin(u), std::cos(u));
    jet.dx_dv = Eigen::Vector3d::Zero();
    jet.dy_du = Eigen::Vector3d::Zero();
    const double dh = 0.1, dr = -h * dh / r;
    jet.dy_dv = Eigen::Vector3d(dh, dr * std::cos(v) - r * std::sin(v),
                                dr * std::sin(v) + r * std::cos(v));
    return jet;
  };
  CHECK_THROWS_AS(LagrangianSurface::parametric_torus(spiral), NumericalError);

  // Rank-deficient chart: first factor collapses to a point.
  Chart flat;
  flat.u0 = 0; flat.u1 = 2 * kPi; flat.v0 = 0; flat.v1 = 2 * kPi;
  flat.jet = [](double, double v) {
    ChartJet jet;
    jet.p = SurfacePoint(Eigen::Vector3d::UnitX(),
                         Eigen::Vector3d(0, std::cos(v), std::sin(v)));
    jet.dx_du = jet.dx_dv = jet.dy_du = Eigen::Vector3d::Zero();
    jet.dy_dv = Eigen::Vector3d(0, -std::sin(v), std::cos(v));
    return jet;
  };
  CHECK_THROWS_AS(LagrangianSurface::parametric_torus(flat), NumericalError);
}

TEST_CASE("out-of-domain sphere parameters are an error, torus parameters wrap") {
  const LagrangianSurface m0 = LagrangianSurface::anti_diagonal_sphere();
  CHECK_THROWS_AS(m0.point_at({0, 2.0, 0.0}), std::invalid_argument);
  const LagrangianSurface t = LagrangianSurface::latitude_torus(0.1, 0.2);
  const SurfacePoint a = t.point_at({0, 0.3, 0.4});
  const SurfacePoint b = t.point_at({0, 0.3 + 2 * kPi, 0.4 - 2 * kPi});
  CHECK((a.x - b.x).norm() + (a.y - b.y).norm() <= 1e-12);
}

TEST_CASE("JSON surfaces load and agree with their built-in counterparts") {
  const LagrangianSurface t00_json = load_surface_json_file(data_path("torus_t00.json"));
  const LagrangianSurface t00 = LagrangianSurface::latitude_torus(0, 0);
  for (const auto& cp : sample_params(t00, 25)) {
    const SurfacePoint p = t00.point_at(cp), q = t00_json.point_at(cp);
    CHECK((p.x - q.x).norm() + (p.y - q.y).norm() <= 1e-12);
  }
  CHECK(check_lagrangian(t00_json));
  CHECK(std::abs(surface_volume(t00_json) - 4 * kPi * kPi) / (4 * kPi * kPi) <= 1e-6);

  const LagrangianSurface m0_json = load_surface_json_file(data_path("anti_diagonal.json"));
  CHECK(check_lagrangian(m0_json));
  const HomologyClass cls = homology_class(m0_json);
  CHECK(cls.m == 1);
  CHECK(cls.n == -1);

  const LagrangianSurface graph = load_surface_json_file(data_path("graph_identity.json"));
  CHECK_FALSE(check_lagrangian(graph));
}

TEST_CASE("JSON loader rejects broken inputs") {
  CHECK_THROWS_AS(load_surface_json_file(data_path("bad_rank.json")), NumericalError);
  CHECK_THROWS_AS(load_surface_json_file(data_path("missing.json")), std::invalid_argument);
  std::istringstream not_json("{\"topology\": \"torus\"");
  CHECK_THROWS_AS(load_surface_json(not_json), std::invalid_argument);
  std::istringstream wrong_topology(
      "{\"topology\": \"plane\", \"charts\": []}");
  CHECK_THROWS_AS(load_surface_json(wrong_topology), std::invalid_argument);
}

TEST_CASE("sample_params is deterministic") {
  const LagrangianSurface t = LagrangianSurface::latitude_torus(0.3, 0.3);
  const auto a = sample_params(t, 20, 99), b = sample_params(t, 20, 99);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].v == b[i].v);
  }
}

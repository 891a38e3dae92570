#include "tightlag/surface_json.hpp"

#include <array>
#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "tightlag/errors.hpp"
#include "tightlag/expression.hpp"

namespace tightlag {

namespace {

struct ExpressionChart {
  std::array<Expression, 3> x;
  std::array<Expression, 3> y;
};

Chart build_chart(const nlohmann::json& spec) {
  const auto& domain = spec.at("domain");
  if (!domain.is_array() || domain.size() != 2) {
    throw std::invalid_argument("surface json: 'domain' must be [[u0,u1],[v0,v1]]");
  }
  Chart c;
  c.u0 = domain.at(0).at(0).get<double>();
  c.u1 = domain.at(0).at(1).get<double>();
  c.v0 = domain.at(1).at(0).get<double>();
  c.v1 = domain.at(1).at(1).get<double>();
  if (!(c.u0 < c.u1 && c.v0 < c.v1)) {
    throw std::invalid_argument("surface json: empty chart domain");
  }

  auto parse_triple = [&spec](const char* key) {
    const auto& arr = spec.at(key);
    if (!arr.is_array() || arr.size() != 3) {
      throw std::invalid_argument(std::string("surface json: '") + key +
                                  "' must list three coordinate expressions");
    }
    return std::array<Expression, 3>{Expression::parse(arr.at(0).get<std::string>()),
                                     Expression::parse(arr.at(1).get<std::string>()),
                                     Expression::parse(arr.at(2).get<std::string>())};
  };
  auto chart = std::make_shared<ExpressionChart>();
  chart->x = parse_triple("x");
  chart->y = parse_triple("y");

  c.jet = [chart](double u, double v) {
    Eigen::Vector3d x, y, xu, xv, yu, yv;
    for (int i = 0; i < 3; ++i) {
      x(i) = chart->x[i].eval(u, v);
      y(i) = chart->y[i].eval(u, v);
      xu(i) = chart->x[i].du(u, v);
      xv(i) = chart->x[i].dv(u, v);
      yu(i) = chart->y[i].du(u, v);
      yv(i) = chart->y[i].dv(u, v);
    }
    const double nx = x.norm(), ny = y.norm();
    if (std::abs(nx - 1.0) > 1e-8 || std::abs(ny - 1.0) > 1e-8) {
      throw NumericalError("surface json: chart leaves the unit spheres (deviation " +
                           std::to_string(std::max(std::abs(nx - 1.0), std::abs(ny - 1.0))) + ")");
    }
    // Exact projection onto the spheres, with the matching partial correction.
    const Eigen::Vector3d xh = x / nx, yh = y / ny;
    auto fix = [](const Eigen::Vector3d& h, double n, const Eigen::Vector3d& d) {
      return Eigen::Vector3d(d / n - h * (h.dot(d) / n));
    };
    ChartJet jet;
    jet.p = SurfacePoint(xh, yh);
    jet.dx_du = fix(xh, nx, xu);
    jet.dx_dv = fix(xh, nx, xv);
    jet.dy_du = fix(yh, ny, yu);
    jet.dy_dv = fix(yh, ny, yv);
    return jet;
  };
  return c;
}

}  // namespace

LagrangianSurface load_surface_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("surface json: parse failure: ") + e.what());
  }
  const std::string topology = doc.at("topology").get<std::string>();
  const auto& charts = doc.at("charts");
  if (topology == "torus") {
    if (!charts.is_array() || charts.size() != 1) {
      throw std::invalid_argument("surface json: a torus needs exactly one chart");
    }
    return LagrangianSurface::parametric_torus(build_chart(charts.at(0)));
  }
  if (topology == "sphere") {
    if (!charts.is_array() || charts.size() != 2) {
      throw std::invalid_argument("surface json: a sphere needs exactly two charts");
    }
    return LagrangianSurface::parametric_sphere(build_chart(charts.at(0)),
                                                build_chart(charts.at(1)));
  }
  throw std::invalid_argument("surface json: topology must be 'torus' or 'sphere'");
}

LagrangianSurface load_surface_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("surface json: cannot open '" + path + "'");
  return load_surface_json(in);
}

}  // namespace tightlag

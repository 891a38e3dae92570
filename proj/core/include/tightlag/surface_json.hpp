#pragma once

#include <iosfwd>
#include <string>

#include "tightlag/surfaces.hpp"

namespace tightlag {

/// Loads a parametric surface description:
///
///   {
///     "topology": "torus" | "sphere",
///     "charts": [
///       { "domain": [[u0, u1], [v0, v1]],
///         "x": ["expr", "expr", "expr"],
///         "y": ["expr", "expr", "expr"] },
///       ...
///     ]
///   }
///
/// Coordinate functions use the expression grammar documented in the README
/// (sums, products, powers, trig of the parameters u and v).  Tori take one
/// periodic chart; spheres take the two-chart stereographic-style atlas
/// described in surfaces.hpp.  Charts must land on the unit spheres within
/// 1e-8 (they are renormalized exactly after that check).  Partials come
/// from complex-step differentiation of the expressions.
LagrangianSurface load_surface_json(std::istream& in);
LagrangianSurface load_surface_json_file(const std::string& path);

}  // namespace tightlag

#pragma once

#include <nlohmann/json.hpp>

#include "holonomy/algebra.hpp"
#include "holonomy/npc.hpp"
#include "holonomy/states.hpp"
#include "holonomy/surface.hpp"
#include "holonomy/transport.hpp"

// JSON exchange formats. Complex numbers are [re, im] pairs; matrices are flat
// row-major lists of such pairs whose shape comes from the enclosing object.
namespace holonomy::io {

using json = nlohmann::json;

json to_json(cplx z);
cplx complex_from_json(const json& j);

json matrix_to_json(const CMatrix& m);
// Throws ContractError naming `field` on shape or type mismatch.
CMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& field);

// {"n", "k", "weights", "closed", "samples": [{"s", "rho", "frame"?}]}
json path_to_json(const DiscretizedPath& path);
DiscretizedPath path_from_json(const json& j);

// {"nu", "nv", "n", "k", "weights", "loop_edge": "top" | "right", "rho": [matrix, ...]}
json surface_to_json(const ParametrizedSurface& grid);
ParametrizedSurface surface_from_json(const json& j);

// Samples a callable surface onto a (nu x nv) node grid.
ParametrizedSurface sample_surface(const ParametrizedSurface& surface, int nu, int nv);

json phase_report_to_json(const PhaseReport& report);
// {"class", "witness": {...} | null}
json classification_to_json(const CurveClass& c);
json npm_to_json(const NpmReport& r);

}  // namespace holonomy::io

#include "holonomy/io.hpp"

#include "holonomy/errors.hpp"

namespace holonomy::io {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ContractError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

SpectralWeights weights_from(const json& j) {
  const json& w = require(j, "weights");
  if (!w.is_array() || w.empty()) throw ContractError("weights: expected a non-empty array");
  RVector v(static_cast<Eigen::Index>(w.size()));
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (!w[a].is_number()) throw ContractError("weights: entries must be numbers");
    v(static_cast<Eigen::Index>(a)) = w[a].get<double>();
  }
  try {
    return SpectralWeights(v);
  } catch (const ContractError& e) {
    throw ContractError(std::string("weights: ") + e.what());
  }
}

json weights_to(const SpectralWeights& w) {
  json out = json::array();
  for (int a = 0; a < w.k(); ++a) out.push_back(w[a]);
  return out;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ContractError("expected a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(to_json(m(i, j)));
  }
  return out;
}

CMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& field) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw ContractError(field + ": expected " + std::to_string(rows * cols) + " [re, im] entries");
  }
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      try {
        m(r, c) = complex_from_json(j[static_cast<std::size_t>(r * cols + c)]);
      } catch (const ContractError& e) {
        throw ContractError(field + ": " + e.what());
      }
    }
  }
  return m;
}

json path_to_json(const DiscretizedPath& path) {
  json samples = json::array();
  for (const auto& p : path.samples()) {
    json s = {{"s", p.s}, {"rho", matrix_to_json(p.rho)}};
    if (p.frame) s["frame"] = matrix_to_json(p.frame->matrix());
    samples.push_back(std::move(s));
  }
  return {{"n", path.n()},
          {"k", path.k()},
          {"weights", weights_to(path.weights())},
          {"closed", path.closed()},
          {"samples", std::move(samples)}};
}

DiscretizedPath path_from_json(const json& j) {
  const int n = require(j, "n").get<int>();
  const int k = require(j, "k").get<int>();
  SpectralWeights w = weights_from(j);
  if (w.k() != k) throw ContractError("weights: expected k entries");
  const json& arr = require(j, "samples");
  if (!arr.is_array()) throw ContractError("samples: expected an array");
  std::vector<PathSample> samples;
  samples.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = "samples[" + std::to_string(i) + "]";
    PathSample p;
    p.s = require(arr[i], "s").get<double>();
    p.rho = matrix_from_json(require(arr[i], "rho"), n, n, at + ".rho");
    if (arr[i].contains("frame")) {
      p.frame = Frame(matrix_from_json(arr[i]["frame"], n, k, at + ".frame"));
    }
    samples.push_back(std::move(p));
  }
  const bool closed = j.value("closed", false);
  return DiscretizedPath(std::move(w), std::move(samples), closed);
}

json surface_to_json(const ParametrizedSurface& grid) {
  if (!grid.is_grid()) throw ContractError("surface_to_json: sample the surface first");
  json nodes = json::array();
  for (const auto& m : grid.nodes()) nodes.push_back(matrix_to_json(m));
  return {{"nu", grid.nu()},
          {"nv", grid.nv()},
          {"n", grid.n()},
          {"k", grid.k()},
          {"weights", weights_to(grid.weights())},
          {"loop_edge", grid.loop_edge() == LoopEdge::kTop ? "top" : "right"},
          {"rho", std::move(nodes)}};
}

ParametrizedSurface surface_from_json(const json& j) {
  const int nu = require(j, "nu").get<int>();
  const int nv = require(j, "nv").get<int>();
  const int n = require(j, "n").get<int>();
  SpectralWeights w = weights_from(j);
  const std::string edge = j.value("loop_edge", std::string("top"));
  if (edge != "top" && edge != "right") throw ContractError("loop_edge: expected top or right");
  const json& arr = require(j, "rho");
  if (!arr.is_array()) throw ContractError("rho: expected an array of matrices");
  std::vector<CMatrix> nodes;
  nodes.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    nodes.push_back(matrix_from_json(arr[i], n, n, "rho[" + std::to_string(i) + "]"));
  }
  return ParametrizedSurface::from_grid(std::move(w), nu, nv, std::move(nodes),
                                        edge == "top" ? LoopEdge::kTop : LoopEdge::kRight);
}

ParametrizedSurface sample_surface(const ParametrizedSurface& surface, int nu, int nv) {
  if (nu < 2 || nv < 2) throw ContractError("sample_surface: need at least 2 x 2 nodes");
  std::vector<CMatrix> nodes;
  nodes.reserve(static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv));
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      nodes.push_back(surface.at(static_cast<double>(i) / (nu - 1), static_cast<double>(j) / (nv - 1)));
    }
  }
  return ParametrizedSurface::from_grid(surface.weights(), nu, nv, std::move(nodes),
                                        surface.loop_edge());
}

json phase_report_to_json(const PhaseReport& report) {
  json levels = json::array();
  for (Eigen::Index a = 0; a < report.per_level.size(); ++a) levels.push_back(report.per_level(a));
  return {{"per_level", std::move(levels)},
          {"weighted", report.weighted},
          {"dynamical_free", report.dynamical_free},
          {"steps", report.steps}};
}

json classification_to_json(const CurveClass& c) {
  json out = {{"class", to_string(c.kind)}, {"witness", nullptr}};
  if (c.witness) {
    out["witness"] = {{"kind", c.witness->kind},
                      {"level", c.witness->level},
                      {"s", c.witness->s},
                      {"value", to_json(c.witness->value)}};
  }
  return out;
}

json npm_to_json(const NpmReport& r) {
  return {{"isotropic", r.isotropic},
          {"npm", r.npm},
          {"pancharatnam_exact", r.pancharatnam_exact},
          {"max_omega", r.max_omega}};
}

}  // namespace holonomy::io

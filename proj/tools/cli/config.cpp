#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <fmt/format.h>

#include <holonomy/io.hpp>

#include "validation/fixtures.hpp"

namespace holonomy::cli {

namespace {

struct Parameter {
  const char* name;
  std::optional<double> fallback;  // nullopt: required
};

struct Generator {
  const char* name;
  std::vector<Parameter> params;
  bool closed;
};

const std::vector<Generator>& generators() {
  static const std::vector<Generator> g = {
      {"bloch_circle", {{"theta", std::nullopt}}, true},
      {"orbit_loop", {{"modes", 3.0}, {"amplitude", 0.6}}, true},
      {"constant", {}, true},
      {"geodesic", {{"angle", 1.0}}, false},
      {"real_rotation", {{"angle", 1.0}}, false},
      {"triangle", {{"scale", 0.8}}, false},
  };
  return g;
}

const Generator* find_generator(const std::string& name) {
  for (const auto& g : generators()) {
    if (name == g.name) return &g;
  }
  return nullptr;
}

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (!(v > 0.0) || !std::isfinite(v)) fail(field, "must be a positive number");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(field, "out of range");
  }
  return static_cast<int>(v);
}

std::string string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

void only_keys(const json& j, const std::string& prefix, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) fail(prefix + key, "unknown field");
  }
}

json read_json(const std::filesystem::path& file, const std::string& field) {
  std::ifstream in(file);
  if (!in) fail(field, "cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(field, "invalid JSON in " + file.string() + ": " + e.what());
  }
}

std::filesystem::path resolve(const ScenarioConfig& c, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() || c.base_dir.empty() ? p : c.base_dir / p;
}

void check_weights(const std::vector<double>& w, int k, const std::string& field) {
  if (static_cast<int>(w.size()) != k) fail(field, fmt::format("expected {} entries", k));
  try {
    (void)SpectralWeights(RVector::Map(w.data(), static_cast<Eigen::Index>(w.size())));
  } catch (const Error& e) {
    std::string message = e.what();
    if (message.starts_with("weights: ")) message.erase(0, 9);
    fail(field, message);
  }
}

CurveSpec parse_curve(const json& j, int n, int k) {
  if (!j.is_object()) fail("curve", "expected an object");
  only_keys(j, "curve.", {"generator", "params", "seed", "file"});
  CurveSpec c;
  if (j.contains("file") == j.contains("generator")) {
    fail("curve", "give exactly one of generator or file");
  }
  if (j.contains("file")) {
    c.file = string(j["file"], "curve.file");
    if (j.contains("params") || j.contains("seed")) fail("curve.file", "takes no params or seed");
    return c;
  }
  c.generator = string(j["generator"], "curve.generator");
  const Generator* g = find_generator(c.generator);
  if (!g) fail("curve.generator", "unknown generator '" + c.generator + "'");
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail("curve.seed", "expected a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  const json params = j.value("params", json::object());
  if (!params.is_object()) fail("curve.params", "expected an object");
  for (const auto& [key, value] : params.items()) {
    const std::string field = "curve.params." + key;
    const bool known = std::any_of(g->params.begin(), g->params.end(),
                                   [&](const Parameter& p) { return key == p.name; });
    if (!known) fail(field, "unknown parameter for generator '" + c.generator + "'");
    c.params[key] = number(value, field);
  }
  for (const auto& p : g->params) {
    if (c.params.contains(p.name)) continue;
    if (!p.fallback) fail(std::string("curve.params.") + p.name, "required");
    c.params[p.name] = *p.fallback;
  }
  if (c.generator == "bloch_circle" && (n != 2 || k > 2)) {
    fail("curve.generator", "bloch_circle needs n = 2 and k <= 2");
  }
  if (c.generator == "geodesic" && k >= n) fail("curve.generator", "geodesic needs k < n");
  if (c.params.contains("modes")) {
    const double m = c.params["modes"];
    if (m < 1 || m != std::floor(m)) fail("curve.params.modes", "must be a positive integer");
  }
  return c;
}

SurfaceSpec parse_surface(const json& j, const CurveSpec& curve) {
  SurfaceSpec s;
  if (j.is_string()) {
    s.kind = j.get<std::string>();
  } else if (j.is_object()) {
    only_keys(j, "surface.", {"kind", "file"});
    if (!j.contains("kind")) fail("surface.kind", "required");
    s.kind = string(j["kind"], "surface.kind");
    if (j.contains("file")) s.file = string(j["file"], "surface.file");
  } else {
    fail("surface", "expected a string or an object");
  }
  if (s.kind == "none") return s;
  if (s.kind == "cone") {
    if (curve.generator != "orbit_loop") fail("surface.kind", "cone needs the orbit_loop generator");
  } else if (s.kind == "cap") {
    if (curve.generator != "bloch_circle") fail("surface.kind", "cap needs the bloch_circle generator");
  } else if (s.kind == "file") {
    if (s.file.empty()) fail("surface.file", "required for kind 'file'");
  } else {
    fail("surface.kind", "expected none, cone, cap or file");
  }
  if (s.kind != "file" && !s.file.empty()) fail("surface.file", "only used with kind 'file'");
  return s;
}

Tolerances parse_tolerances(const json& j) {
  if (!j.is_object()) fail("tolerances", "expected an object");
  only_keys(j, "tolerances.", {"phase_tol", "quad_tol", "orbit_tol", "residual_tol", "noadd_tol"});
  Tolerances t;
  auto get = [&](const char* key, double& out) {
    if (j.contains(key)) out = positive(j[key], std::string("tolerances.") + key);
  };
  get("phase_tol", t.phase_tol);
  get("quad_tol", t.quad_tol);
  get("orbit_tol", t.orbit_tol);
  get("residual_tol", t.residual_tol);
  get("noadd_tol", t.noadd_tol);
  return t;
}

std::vector<SweepAxis> parse_sweep(const json& j, const ScenarioConfig& c) {
  if (!j.is_array()) fail("sweep", "expected an array of axes");
  if (j.size() > 2) fail("sweep", "at most two axes");
  std::vector<SweepAxis> axes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = fmt::format("sweep[{}]", i);
    const json& a = j[i];
    if (!a.is_object()) fail(at, "expected an object");
    only_keys(a, at + ".", {"parameter", "from", "to", "count"});
    for (const char* key : {"parameter", "from", "to", "count"}) {
      if (!a.contains(key)) fail(at + "." + key, "required");
    }
    SweepAxis axis;
    axis.parameter = string(a["parameter"], at + ".parameter");
    axis.from = number(a["from"], at + ".from");
    axis.to = number(a["to"], at + ".to");
    axis.count = integer(a["count"], at + ".count");
    if (axis.count < 0) fail(at + ".count", "must be >= 0");
    if (axis.parameter == "kappa1") {
      if (c.k != 2) fail(at + ".parameter", "kappa1 sweeps need k = 2");
      for (int p = 0; p < axis.count; ++p) {
        const double v = axis.value(p);
        check_weights({v, 1.0 - v}, 2, at + ".from/to (kappa1 = " + fmt::format("{}", v) + ")");
      }
    } else if (!c.curve.params.contains(axis.parameter)) {
      fail(at + ".parameter", "'" + axis.parameter + "' is not a parameter of the curve");
    } else if (axis.parameter == "modes") {
      fail(at + ".parameter", "modes cannot be swept");
    }
    for (const auto& other : axes) {
      if (other.parameter == axis.parameter) fail(at + ".parameter", "swept twice");
    }
    axes.push_back(axis);
  }
  return axes;
}

}  // namespace

double SweepAxis::value(int i) const {
  if (count <= 1) return from;
  return from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
}

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& g : generators()) out.emplace_back(g.name);
    return out;
  }();
  return names;
}

ScenarioConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) fail("<root>", "expected an object");
  only_keys(j, "", {"id", "n", "k", "weights", "curve", "surface", "tolerances", "steps", "sweep",
                    "output"});
  ScenarioConfig c;
  c.base_dir = base_dir;
  c.id = j.contains("id") ? string(j["id"], "id") : "scenario";
  for (const char* key : {"n", "k", "weights", "curve"}) {
    if (!j.contains(key)) fail(key, "required");
  }
  c.n = integer(j["n"], "n");
  c.k = integer(j["k"], "k");
  if (c.n < 1) fail("n", "must be >= 1");
  if (c.k < 1 || c.k > c.n) fail("k", "must satisfy 1 <= k <= n");
  if (!j["weights"].is_array()) fail("weights", "expected an array of numbers");
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    c.weights.push_back(number(j["weights"][i], fmt::format("weights[{}]", i)));
  }
  check_weights(c.weights, c.k, "weights");
  c.curve = parse_curve(j["curve"], c.n, c.k);
  if (j.contains("surface")) c.surface = parse_surface(j["surface"], c.curve);
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j["tolerances"]);
  if (j.contains("steps")) {
    c.steps = integer(j["steps"], "steps");
    if (*c.steps < 1) fail("steps", "must be >= 1");
  }
  if (j.contains("sweep")) c.sweep = parse_sweep(j["sweep"], c);
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) fail("output", "expected an object");
    only_keys(o, "output.", {"report", "csv"});
    if (o.contains("report")) c.output.report = string(o["report"], "output.report");
    if (o.contains("csv")) c.output.csv = string(o["csv"], "output.csv");
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  return parse_config(read_json(file, "--config"), file.parent_path());
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["id"] = c.id;
  j["n"] = c.n;
  j["k"] = c.k;
  j["weights"] = c.weights;
  json curve;
  if (!c.curve.file.empty()) {
    curve["file"] = c.curve.file;
  } else {
    curve["generator"] = c.curve.generator;
    curve["params"] = c.curve.params;
    curve["seed"] = c.curve.seed;
  }
  j["curve"] = curve;
  json surface{{"kind", c.surface.kind}};
  if (!c.surface.file.empty()) surface["file"] = c.surface.file;
  j["surface"] = surface;
  j["tolerances"] = {{"phase_tol", c.tolerances.phase_tol},
                     {"quad_tol", c.tolerances.quad_tol},
                     {"orbit_tol", c.tolerances.orbit_tol},
                     {"residual_tol", c.tolerances.residual_tol},
                     {"noadd_tol", c.tolerances.noadd_tol}};
  if (c.steps) j["steps"] = *c.steps;
  if (!c.sweep.empty()) {
    json axes = json::array();
    for (const auto& a : c.sweep) {
      axes.push_back({{"parameter", a.parameter}, {"from", a.from}, {"to", a.to}, {"count", a.count}});
    }
    j["sweep"] = axes;
  }
  json output = json::object();
  if (!c.output.report.empty()) output["report"] = c.output.report;
  if (!c.output.csv.empty()) output["csv"] = c.output.csv;
  j["output"] = output;
  return j;
}

ScenarioConfig with_parameter(const ScenarioConfig& config, const std::string& parameter,
                              double value) {
  ScenarioConfig c = config;
  if (parameter == "kappa1") {
    c.weights = {value, 1.0 - value};
  } else {
    c.curve.params[parameter] = value;
  }
  return c;
}

SpectralWeights weights_of(const ScenarioConfig& c) {
  return SpectralWeights(RVector::Map(c.weights.data(), static_cast<Eigen::Index>(c.weights.size())));
}

Scenario build_scenario(const ScenarioConfig& c) {
  const SpectralWeights w = weights_of(c);
  Scenario s;
  if (!c.curve.file.empty()) {
    const json j = read_json(resolve(c, c.curve.file), "curve.file");
    try {
      s.path = io::path_from_json(j);
    } catch (const Error& e) {
      fail("curve.file", e.what());
    } catch (const json::exception& e) {
      fail("curve.file", e.what());
    }
    if (s.path->n() != c.n || s.path->k() != c.k ||
        (s.path->weights().values() - w.values()).cwiseAbs().maxCoeff() > 1e-12) {
      fail("curve.file", "n, k or weights differ from the scenario");
    }
    s.closed = s.path->closed();
    return s;
  }
  const auto& p = c.curve.params;
  const std::string& g = c.curve.generator;
  if (g == "bloch_circle") {
    s.curve = bloch_circle(p.at("theta"), w);
  } else if (g == "orbit_loop") {
    s.loop = random_orbit_loop(w, c.n, static_cast<int>(p.at("modes")), c.curve.seed,
                               p.at("amplitude"));
    s.curve = s.loop->curve();
  } else if (g == "constant") {
    SplitMix64 rng(c.curve.seed);
    const CMatrix frame = random_frame_matrix(rng, c.n, c.k);
    Curve curve;
    curve.weights = w;
    curve.n = c.n;
    curve.frame = [frame](double) { return frame; };
    s.curve = curve;
  } else if (g == "geodesic" || g == "real_rotation") {
    s.curve = fixtures::real_rotation(w, c.n, p.at("angle"), c.curve.seed, g == "geodesic");
  } else {
    fail("curve.generator", "'" + g + "' only produces triangles (npc --triangle)");
  }
  s.closed = s.curve->closed;
  return s;
}

DiscretizedPath sampled(const Scenario& s, int steps) {
  if (s.path) return *s.path;
  return s.curve->sample(steps);
}

std::optional<ParametrizedSurface> build_surface(const ScenarioConfig& c, const Scenario& s) {
  if (c.surface.kind == "none") return std::nullopt;
  if (c.surface.kind == "cone") return cone_surface(*s.loop);
  if (c.surface.kind == "cap") return bloch_cap(c.curve.params.at("theta"), weights_of(c));
  const json j = read_json(resolve(c, c.surface.file), "surface.file");
  try {
    ParametrizedSurface surface = io::surface_from_json(j);
    if (surface.n() != c.n || surface.k() != c.k) fail("surface.file", "n or k differ from the scenario");
    return surface;
  } catch (const Error& e) {
    fail("surface.file", e.what());
  } catch (const json::exception& e) {
    fail("surface.file", e.what());
  }
}

std::array<DiscretizedPath, 3> build_triangle(const ScenarioConfig& c, int steps) {
  if (c.curve.generator != "triangle") fail("curve.generator", "--triangle needs the triangle generator");
  return fixtures::random_triangle(weights_of(c), c.n, c.curve.params.at("scale"), c.curve.seed, steps);
}

}  // namespace holonomy::cli

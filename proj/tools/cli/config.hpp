#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <holonomy/holonomy.hpp>

namespace holonomy::cli {

using json = nlohmann::json;

// A scenario file is invalid; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CurveSpec {
  std::string generator;  // one of generator_names(), or empty when `file` is set
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::string file;  // path JSON, relative to the scenario file
  bool operator==(const CurveSpec&) const = default;
};

struct SurfaceSpec {
  std::string kind = "none";  // none | cone | cap | file
  std::string file;
  bool operator==(const SurfaceSpec&) const = default;
};

struct Tolerances {
  double phase_tol = 1e-6;
  double quad_tol = 1e-6;
  double orbit_tol = 1e-9;
  double residual_tol = 1e-4;  // --strict threshold on |weighted phase + area|
  double noadd_tol = 1e-5;     // --strict threshold on the non-additivity residual
  bool operator==(const Tolerances&) const = default;
};

struct SweepAxis {
  std::string parameter;  // a curve parameter or "kappa1"
  double from = 0.0;
  double to = 0.0;
  int count = 0;
  bool operator==(const SweepAxis&) const = default;

  double value(int i) const;
};

struct OutputSpec {
  std::string report;
  std::string csv;
  bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
  std::string id;
  int n = 0;
  int k = 0;
  std::vector<double> weights;
  CurveSpec curve;
  SurfaceSpec surface;
  Tolerances tolerances;
  std::optional<int> steps;  // initial lift steps (closed curves) or samples (open curves)
  std::vector<SweepAxis> sweep;
  OutputSpec output;
  std::filesystem::path base_dir;  // not serialized; resolves relative file names

  bool operator==(const ScenarioConfig& o) const {
    return id == o.id && n == o.n && k == o.k && weights == o.weights && curve == o.curve &&
           surface == o.surface && tolerances == o.tolerances && steps == o.steps &&
           sweep == o.sweep && output == o.output;
  }
};

const std::vector<std::string>& generator_names();

ScenarioConfig parse_config(const json& j, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& file);
json config_to_json(const ScenarioConfig& config);

// The config with one sweep parameter set to `value`.
ScenarioConfig with_parameter(const ScenarioConfig& config, const std::string& parameter,
                              double value);

SpectralWeights weights_of(const ScenarioConfig& config);

// A curve generator instantiated from the config.
struct Scenario {
  std::optional<Curve> curve;          // generated curves
  std::optional<DiscretizedPath> path; // curves read from a file
  std::optional<OrbitLoop> loop;       // set for orbit_loop, for the cone surface
  bool closed = true;
};

Scenario build_scenario(const ScenarioConfig& config);
// The curve as samples: `steps` steps for generated curves, the file as is otherwise.
DiscretizedPath sampled(const Scenario& scenario, int steps);
// Spanning surface named by config.surface, if any.
std::optional<ParametrizedSurface> build_surface(const ScenarioConfig& config,
                                                 const Scenario& scenario);
// The three sides of the "triangle" generator.
std::array<DiscretizedPath, 3> build_triangle(const ScenarioConfig& config, int steps);

}  // namespace holonomy::cli

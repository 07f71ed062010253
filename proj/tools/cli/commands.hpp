#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "cli/config.hpp"

namespace holonomy::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kThresholdBreach = 2,
  kNumericFailure = 3,
};

struct RunOptions {
  bool strict = false;
  bool timing = false;    // include wall-clock fields (breaks byte-identical output)
  bool triangle = false;  // npc: run the non-additivity check on a triangle
  std::string out;        // overrides the config's output path
  std::string filter;     // selftest
  std::string fault;      // selftest: "kks-sign" injects a broken KKS formula
  std::optional<std::uint64_t> seed;
};

// Results of one phase run, shared by `phase` and every `sweep` grid point.
struct PhaseRun {
  PhaseReport report;
  std::optional<SurfaceIntegral> area;
  std::optional<double> residual;
  double runtime_ms = 0.0;
};

PhaseRun run_phase(const ScenarioConfig& config);

// Each command writes its report to `out` (or the configured file) and
// returns an ExitCode. Config problems throw ConfigError, numeric failures
// holonomy::Error; main maps both to exit codes.
int cmd_phase(const ScenarioConfig& config, const RunOptions& options, std::ostream& out);
int cmd_npc(const ScenarioConfig& config, const RunOptions& options, std::ostream& out);
int cmd_sweep(const ScenarioConfig& config, const RunOptions& options, std::ostream& out);
int cmd_selftest(const RunOptions& options, std::ostream& out);

// The sweep CSV header for a config.
std::string sweep_header(const ScenarioConfig& config);

}  // namespace holonomy::cli

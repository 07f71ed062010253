#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <holonomy/errors.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

using namespace holonomy::cli;

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("holonomy");
  logger->set_pattern("%^[%l]%$ %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("HOLONOMY_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

struct Flags {
  std::string config;
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  RunOptions run;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--strict", f.run.strict, "Exit with 2 when a residual exceeds its tolerance");
  cmd->add_option("--steps", f.steps, "Initial lift steps (closed) or samples (open curves)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.run.out, "Write the report here instead of stdout/config path");
  cmd->add_option("--seed", f.seed, "Override the curve seed");
  cmd->add_flag("--timing", f.run.timing, "Add wall-clock fields to the output");
}

ScenarioConfig load(const Flags& f) {
  ScenarioConfig c = load_config(f.config);
  if (f.steps) c.steps = *f.steps;
  if (f.seed) c.curve.seed = *f.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Geometric phases of mixed quantum states along loops and open curves"};
  app.require_subcommand(1);
  Flags flags;

  auto* phase = app.add_subcommand("phase", "Per-level and weighted phases of a closed curve");
  add_run_flags(phase, flags);
  auto* npc = app.add_subcommand("npc", "Classify an open curve; --triangle for non-additivity");
  add_run_flags(npc, flags);
  npc->add_flag("--triangle", flags.run.triangle, "Check non-additivity on a geodesic-free triangle");
  auto* sweep = app.add_subcommand("sweep", "Phase runs over a parameter grid, as CSV");
  add_run_flags(sweep, flags);
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance checks at reduced sizes");
  selftest->add_option("--filter", flags.run.filter, "Only checks whose name contains this");
  selftest->add_option("--seed", flags.seed, "Seed for the random instances");
  selftest->add_flag("--timing", flags.run.timing, "Print the total runtime");
  selftest->add_option("--inject-fault", flags.run.fault, "Deliberately break a formula (kks-sign)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }
  flags.run.seed = flags.seed;

  try {
    if (selftest->parsed()) return cmd_selftest(flags.run, std::cout);
    const ScenarioConfig config = load(flags);
    if (phase->parsed()) return cmd_phase(config, flags.run, std::cout);
    if (npc->parsed()) return cmd_npc(config, flags.run, std::cout);
    return cmd_sweep(config, flags.run, std::cout);
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kConfigError;
  } catch (const holonomy::Error& e) {
    spdlog::error("numeric failure: {}", e.what());
    return kNumericFailure;
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("config: {}", e.what());
    return kConfigError;
  }
}

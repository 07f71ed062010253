#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <holonomy/io.hpp>

#include "validation/checks.hpp"

namespace holonomy::cli {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kOpenCurveSteps = 400;
constexpr int kClassifySteps = 2000;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw ConfigError("--out: cannot write " + path);
  spdlog::info("wrote {}", path);
}

// Signed zeros print as "0" so equal values always give equal text.
std::string csv_number(double v) { return fmt::format("{:.17g}", v == 0.0 ? 0.0 : v); }

PhaseOptions phase_options(const ScenarioConfig& c) {
  PhaseOptions o;
  o.phase_tol = c.tolerances.phase_tol;
  o.orbit_tol = c.tolerances.orbit_tol;
  if (c.steps) o.initial_steps = *c.steps;
  return o;
}

}  // namespace

PhaseRun run_phase(const ScenarioConfig& c) {
  const auto t0 = Clock::now();
  const Scenario s = build_scenario(c);
  if (!s.closed) throw ConfigError("curve: phase needs a closed curve");
  const std::optional<ParametrizedSurface> surface = build_surface(c, s);
  QuadratureOptions quad;
  quad.quad_tol = c.tolerances.quad_tol;

  PhaseRun run;
  if (s.path) {
    run.report = geometric_phases(*s.path, std::nullopt, c.tolerances.orbit_tol);
    if (surface) run.area = verify_area_identity(*s.path, *surface, quad).area;
  } else {
    run.report = geometric_phases(*s.curve, phase_options(c));
    if (surface && c.surface.kind == "file") {
      // Checks that the file's loop edge is this curve.
      run.area = verify_area_identity(*s.curve, *surface, phase_options(c), quad).area;
    } else if (surface) {
      run.area = surface_integral(*surface, quad);
    }
  }
  if (run.area) run.residual = std::abs(run.report.weighted + run.area->value);
  spdlog::debug("phase {}: weighted {} after {} steps", c.id, run.report.weighted, run.report.steps);
  run.runtime_ms = elapsed_ms(t0);
  return run;
}

int cmd_phase(const ScenarioConfig& c, const RunOptions& o, std::ostream& out) {
  const PhaseRun run = run_phase(c);
  const Scenario s = build_scenario(c);
  json j;
  j["id"] = c.id;
  j["n"] = c.n;
  j["k"] = c.k;
  j["weights"] = c.weights;
  j["phases"] = io::phase_report_to_json(run.report);
  j["area"] = run.area ? json{{"value", run.area->value}, {"resolution", run.area->resolution}}
                       : json(nullptr);
  j["residual"] = run.residual ? json(*run.residual) : json(nullptr);
  j["classification"] = io::classification_to_json(classify_curve(sampled(s, kClassifySteps)));
  if (o.timing) j["runtime_ms"] = run.runtime_ms;
  emit(j.dump(2) + "\n", o.out.empty() ? c.output.report : o.out, out);
  if (o.strict && run.residual && *run.residual > c.tolerances.residual_tol) {
    spdlog::error("residual {} exceeds residual_tol {}", *run.residual, c.tolerances.residual_tol);
    return kThresholdBreach;
  }
  return kSuccess;
}

int cmd_npc(const ScenarioConfig& c, const RunOptions& o, std::ostream& out) {
  const auto t0 = Clock::now();
  const int steps = c.steps.value_or(kOpenCurveSteps);
  json j;
  j["id"] = c.id;
  int code = kSuccess;
  if (o.triangle) {
    const auto sides = build_triangle(c, steps);
    const NonAdditivity na = nonadditivity_check(sides[0], sides[1], sides[2]);
    json classes = json::array();
    for (const auto& side : sides) classes.push_back(to_string(classify_curve(side).kind));
    j["triangle"] = {{"lhs", na.lhs}, {"rhs", na.rhs}, {"residual", na.residual}, {"sides", classes}};
    if (o.strict && na.residual > c.tolerances.noadd_tol) {
      spdlog::error("non-additivity residual {} exceeds noadd_tol {}", na.residual,
                    c.tolerances.noadd_tol);
      code = kThresholdBreach;
    }
  } else {
    const Scenario s = build_scenario(c);
    const DiscretizedPath path = sampled(s, steps);
    const CurveClass cls = classify_curve(path);
    j.update(io::classification_to_json(cls));
    j["gp"] = nullptr;
    j["gp_levels"] = nullptr;
    j["closure"] = nullptr;
    if (cls.kind != CurveKind::kInvalid && !path.closed()) {
      const RVector levels = gp_open_levels(path);
      j["gp_levels"] = std::vector<double>(levels.data(), levels.data() + levels.size());
      j["gp"] = gp_open_curve(path);
      const ClosureResult closure = gp_via_npc_closure(path);
      j["closure"] = closure.available
                         ? json{{"available", true}, {"value", closure.value}}
                         : json{{"available", false}, {"reason", closure.reason}};
    }
  }
  if (o.timing) j["runtime_ms"] = elapsed_ms(t0);
  emit(j.dump(2) + "\n", o.out.empty() ? c.output.report : o.out, out);
  return code;
}

std::string sweep_header(const ScenarioConfig& c) {
  std::vector<std::string> cols;
  for (const auto& a : c.sweep) cols.push_back(a.parameter);
  cols.emplace_back("n");
  cols.emplace_back("k");
  for (int a = 1; a <= c.k; ++a) cols.push_back(fmt::format("w{}", a));
  for (int a = 1; a <= c.k; ++a) cols.push_back(fmt::format("phi{}", a));
  for (const char* name : {"weighted", "area", "residual", "steps", "runtime_ms"}) {
    cols.emplace_back(name);
  }
  return fmt::format("{}\n", fmt::join(cols, ","));
}

int cmd_sweep(const ScenarioConfig& c, const RunOptions& o, std::ostream& out) {
  // Grid points in row order: the first axis varies slowest.
  std::vector<std::vector<double>> points;
  if (!c.sweep.empty()) {
    points.emplace_back();
    for (const auto& axis : c.sweep) {
      std::vector<std::vector<double>> next;
      for (const auto& p : points) {
        for (int i = 0; i < axis.count; ++i) {
          next.push_back(p);
          next.back().push_back(axis.value(i));
        }
      }
      points = std::move(next);
    }
  }
  std::vector<ScenarioConfig> configs;
  for (const auto& p : points) {
    ScenarioConfig point = c;
    for (std::size_t a = 0; a < p.size(); ++a) point = with_parameter(point, c.sweep[a].parameter, p[a]);
    configs.push_back(std::move(point));
  }

  std::vector<PhaseRun> runs(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        runs[i] = run_phase(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(configs.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::string csv = sweep_header(c);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::vector<std::string> row;
    for (double v : points[i]) row.push_back(csv_number(v));
    row.push_back(std::to_string(c.n));
    row.push_back(std::to_string(c.k));
    for (double w : configs[i].weights) row.push_back(csv_number(w));
    const PhaseRun& r = runs[i];
    for (int a = 0; a < c.k; ++a) row.push_back(csv_number(r.report.per_level(a)));
    row.push_back(csv_number(r.report.weighted));
    row.push_back(r.area ? csv_number(r.area->value) : "");
    row.push_back(r.residual ? csv_number(*r.residual) : "");
    row.push_back(std::to_string(r.report.steps));
    row.push_back(o.timing ? fmt::format("{:.3f}", r.runtime_ms) : "");
    csv += fmt::format("{}\n", fmt::join(row, ","));
  }
  emit(csv, o.out.empty() ? c.output.csv : o.out, out);

  if (o.strict) {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].residual && *runs[i].residual > c.tolerances.residual_tol) {
        spdlog::error("grid point {}: residual {} exceeds residual_tol {}", i, *runs[i].residual,
                      c.tolerances.residual_tol);
        return kThresholdBreach;
      }
    }
  }
  return kSuccess;
}

int cmd_selftest(const RunOptions& o, std::ostream& out) {
  validation::CheckOptions options;
  options.reduced = true;
  if (o.seed) options.seed = *o.seed;
  if (o.fault == "kks-sign") {
    options.fault = validation::Fault::kKksSign;
  } else if (!o.fault.empty()) {
    throw ConfigError("--inject-fault: unknown fault '" + o.fault + "' (known: kks-sign)");
  }
  bool any = false;
  for (const auto& info : validation::check_catalog()) {
    any = any || o.filter.empty() || std::string(info.name).find(o.filter) != std::string::npos;
  }
  if (!any) throw ConfigError("--filter: no check matches '" + o.filter + "'");

  const auto t0 = Clock::now();
  int failed = 0;
  int total = 0;
  for (const auto& info : validation::check_catalog()) {
    if (!o.filter.empty() && std::string(info.name).find(o.filter) == std::string::npos) continue;
    const validation::CheckResult r = validation::run_check(info.id, options);
    out << validation::format_result(r) << "\n" << std::flush;
    ++total;
    if (!r.passed()) ++failed;
  }
  out << fmt::format("selftest: {}/{} checks passed", total - failed, total);
  if (o.timing) out << fmt::format(" in {:.1f} s", elapsed_ms(t0) / 1000.0);
  out << "\n";
  return failed == 0 ? kSuccess : kThresholdBreach;
}

}  // namespace holonomy::cli

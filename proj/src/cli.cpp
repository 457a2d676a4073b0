#include "pipeplan/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "pipeplan/annealer.hpp"
#include "pipeplan/io.hpp"
#include "pipeplan/oracle.hpp"
#include "pipeplan/parallel.hpp"
#include "pipeplan/report.hpp"

#ifndef PIPEPLAN_VERSION
#define PIPEPLAN_VERSION "0.0.0"
#endif

namespace pipeplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string scenario;
  std::string run_dir;
  std::string out_dir = ".";
  std::string cache_dir;
  std::string decision;
  std::string objective = "1A";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> iterations;
  std::optional<int> restarts;
  std::optional<std::int64_t> mc_iterations;
  std::optional<double> grid_step;
  int threads = 0;
  bool oracle = false;
  bool no_cache = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Stopwatch {
 public:
  void stage(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    timing_[name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  const json& timing() const { return timing_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  json timing_ = json::object();
};

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ScenarioConfig load_config(const std::string& path, const Options& o) {
  ScenarioConfig cfg = parse_scenario_unchecked(io::read_file(path));
  auto& s = cfg.solver;
  if (o.seed) s.seed = *o.seed;
  if (o.iterations) s.sa_schedule.iterations = *o.iterations;
  if (o.restarts) s.sa_schedule.restarts = *o.restarts;
  if (o.mc_iterations) s.mc_iterations = *o.mc_iterations;
  if (o.grid_step) s.grid_step = *o.grid_step;
  auto violations = validate(cfg);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return cfg;
}

Framing framing_of(const Options& o) {
  const auto f = parse_framing(o.objective);
  if (!f) throw UsageError("--objective: expected one of 1A..4B, got '" + o.objective + "'");
  return *f;
}

std::optional<fs::path> cache_path(const Options& o, const fs::path& fallback) {
  if (o.no_cache) return std::nullopt;
  return o.cache_dir.empty() ? fallback : fs::path(o.cache_dir);
}

UnitCurveSet curves_for(const ScenarioConfig& cfg, const Options& o, const fs::path& fallback, bool* hit) {
  return io::load_or_estimate_curves(cfg, cache_path(o, fallback), hit);
}

json manifest(const ScenarioConfig& cfg, const std::string& command, const Stopwatch& sw) {
  const json doc = json::parse(serialize_scenario(cfg));
  return {{"command", command},
          {"scenario_hash", hex(scenario_hash(cfg))},
          {"curves_key", io::curves_cache_name(cfg)},
          {"settings", doc.at("solver")},
          {"seed", cfg.solver.seed},
          {"version", version()},
          {"timing_seconds", sw.timing()}};
}

json launches_json(const ScenarioConfig& cfg, const ProjectionResult& proj) {
  json rows = json::array();
  for (const auto& r : launch_table(cfg, proj)) {
    rows.push_back({{"area", r.area}, {"expected", r.expected}, {"current_portfolio", r.current},
                    {"minimum", r.minimum}});
  }
  return rows;
}

json report_json(const ScenarioConfig& cfg, const ConstraintReport& rep) {
  json phases = json::object();
  for (std::size_t i = 0; i < kNumPhases; ++i) phases[std::string(phase_label(i))] = rep.slack_per_phase[i];
  json areas = json::object();
  json launches = json::object();
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    areas[cfg.areas[j].id] = rep.slack_per_area[j];
    launches[cfg.areas[j].id] = rep.slack_launches[j];
  }
  return {{"feasible", rep.feasible},
          {"per_phase", phases},
          {"per_area", areas},
          {"launches", launches},
          {"ramp", rep.slack_ramp},
          {"framing_constraint", rep.framing_constraint},
          {"framing_constraint_slack", rep.framing_constraint_slack}};
}

json trace_summary(const OptimizationResult& r) {
  json pts = json::array();
  const std::size_t stride = std::max<std::size_t>(1, r.trace.size() / 200);
  for (std::size_t k = 0; k < r.trace.size(); k += stride) pts.push_back({r.trace[k].iteration, r.trace[k].value});
  if (!r.trace.empty() && (r.trace.size() - 1) % stride != 0) {
    pts.push_back({r.trace.back().iteration, r.trace.back().value});
  }
  return {{"iterations", r.trace.empty() ? 0 : r.trace.back().iteration},
          {"accepted_moves", r.accepted_moves},
          {"exhausted_proposals", r.exhausted_proposals},
          {"initial_temperature", r.initial_temp},
          {"initial_value", r.initial_value},
          {"best_restart", r.best_restart},
          {"restart_best_values", r.restart_best_values},
          {"points", pts}};
}

void write_json(const fs::path& p, const json& doc) { io::write_file_atomic(p, doc.dump(2) + "\n"); }

int cmd_validate(const Options& o, std::ostream& out) {
  const ScenarioConfig cfg = load_config(o.scenario, o);
  out << "ok: " << (cfg.name.empty() ? o.scenario : cfg.name) << ", " << cfg.num_areas() << " areas, horizon "
      << cfg.horizon() << " years, hash " << hex(scenario_hash(cfg)) << "\n";
  return kExitOk;
}

int cmd_curves(const Options& o, std::ostream& out) {
  Stopwatch sw;
  const ScenarioConfig cfg = load_config(o.scenario, o);
  const fs::path dir(o.out_dir);
  sw.stage("load");
  bool hit = false;
  const UnitCurveSet curves = curves_for(cfg, o, dir / "cache", &hit);
  sw.stage(hit ? "curves_cached" : "curves");
  io::write_file_atomic(dir / "curves.csv", io::curves_csv(cfg, curves));
  sw.stage("write");
  write_json(dir / "manifest.json", manifest(cfg, "curves", sw));
  out << "wrote " << (dir / "curves.csv").string() << "\n";
  return kExitOk;
}

int cmd_project(const Options& o, std::ostream& out) {
  Stopwatch sw;
  const ScenarioConfig cfg = load_config(o.scenario, o);
  const fs::path dir(o.out_dir);
  const DecisionMatrix n =
      o.decision.empty() ? zero_decision(cfg) : io::parse_decision_csv(io::read_file(o.decision), cfg);
  sw.stage("load");
  bool hit = false;
  const UnitCurveSet curves = curves_for(cfg, o, dir / "cache", &hit);
  sw.stage(hit ? "curves_cached" : "curves");
  const ProjectionResult proj = project_portfolio(cfg, curves, n);
  sw.stage("project");
  io::write_file_atomic(dir / "projection.csv", io::projection_csv(cfg, proj));
  write_json(dir / "manifest.json", manifest(cfg, "project", sw));
  out << "wrote " << (dir / "projection.csv").string() << "\n";
  return kExitOk;
}

int cmd_optimize(const Options& o, std::ostream& out, std::ostream& err) {
  Stopwatch sw;
  const Framing framing = framing_of(o);
  const ScenarioConfig cfg = load_config(o.scenario, o);
  const ObjectiveSpec spec{framing};
  const auto missing = missing_inputs(cfg, spec);
  if (!missing.empty()) {
    std::vector<std::string> v;
    for (const auto& m : missing) v.push_back("framing " + std::string(framing_name(framing)) + " needs " + m);
    throw ValidationError(std::move(v));
  }
  const fs::path dir(o.out_dir);
  sw.stage("load");
  bool hit = false;
  const UnitCurveSet curves = curves_for(cfg, o, dir / "cache", &hit);
  sw.stage(hit ? "curves_cached" : "curves");

  const ProjectionModel model(cfg, curves);
  const SearchContext ctx{cfg, model, spec};
  AnnealOptions aopts;
  aopts.threads = o.threads;
  OptimizationResult res = anneal(ctx, aopts);
  sw.stage("optimize");

  json rep = {{"framing", framing_name(framing)}};
  if (o.oracle) {
    const OracleResult orc = exhaustive_search(ctx, {}, o.threads);
    sw.stage("oracle");
    rep["oracle"] = {{"value", orc.value},
                     {"enumerated", orc.enumerated},
                     {"feasible_points", orc.feasible},
                     {"anneal_value", res.best_value},
                     {"anneal_matches", res.best_value <= orc.value}};
    if (orc.value < res.best_value) {
      res.best = orc.best;
      res.best_value = orc.value;
      res.projection = model.project(res.best);
      res.report = check_constraints(res.projection, res.best, cfg, spec);
    }
  }

  rep["best_value"] = res.best_value;
  rep["slacks"] = report_json(cfg, res.report);
  rep["trace"] = trace_summary(res);
  rep["launches"] = launches_json(cfg, res.projection);
  rep["years_below_target"] = years_below_target(cfg, res.projection);
  rep["years_over_budget"] = years_over_budget(cfg, res.projection);

  io::write_file_atomic(dir / "decision.csv", io::decision_csv(cfg, res.best));
  io::write_file_atomic(dir / "projection.csv", io::projection_csv(cfg, res.projection));
  io::write_file_atomic(dir / "scenario.json", serialize_scenario(cfg) + "\n");
  write_json(dir / "report.json", rep);
  io::write_file_atomic(dir / "summary.md",
                        summary_markdown({cfg, res.projection, res.best, framing, res.best_value}));
  sw.stage("write");
  json man = manifest(cfg, "optimize", sw);
  man["framing"] = framing_name(framing);
  man["threads"] = resolve_threads(o.threads);
  write_json(dir / "manifest.json", man);

  out << "framing " << framing_name(framing) << ": best value " << res.best_value << ", "
      << res.best.total() << " new projects, outputs in " << dir.string() << "\n";
  if (!res.report.feasible) err << "warning: returned plan violates " << res.report.first_violation(cfg) << "\n";
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  const fs::path run(o.run_dir);
  for (const char* f : {"scenario.json", "decision.csv"}) {
    if (!fs::exists(run / f)) throw io::IoError("missing run output " + (run / f).string());
  }
  const ScenarioConfig cfg = parse_scenario(io::read_file(run / "scenario.json"));
  const DecisionMatrix n = io::parse_decision_csv(io::read_file(run / "decision.csv"), cfg);
  std::optional<Framing> framing;
  if (fs::exists(run / "manifest.json")) {
    try {
      const json man = json::parse(io::read_file(run / "manifest.json"));
      if (man.contains("framing")) framing = parse_framing(man["framing"].get<std::string>());
    } catch (const json::exception& e) {
      throw io::IoError("unreadable manifest: " + std::string(e.what()));
    }
  }
  const UnitCurveSet curves = curves_for(cfg, o, run / "cache", nullptr);
  const ProjectionResult proj = project_portfolio(cfg, curves, n);
  std::optional<double> value;
  if (framing && missing_inputs(cfg, {*framing}).empty()) value = objective_value(proj, cfg, {*framing});
  const fs::path dest = o.out_dir == "." ? run : fs::path(o.out_dir);
  io::write_file_atomic(dest / "summary.md", summary_markdown({cfg, proj, n, framing, value}));
  out << "wrote " << (dest / "summary.md").string() << "\n";
  return kExitOk;
}

void add_overrides(CLI::App* sc, Options& o) {
  sc->add_option("--seed", o.seed, "RNG seed");
  sc->add_option("--mc-iterations", o.mc_iterations, "Monte Carlo realizations per area")->check(CLI::PositiveNumber);
  sc->add_option("--grid-step", o.grid_step, "time grid step in years")->check(CLI::PositiveNumber);
  sc->add_option("--out-dir", o.out_dir, "output directory");
  sc->add_option("--cache-dir", o.cache_dir, "curve cache directory (default <out-dir>/cache)");
  sc->add_flag("--no-cache", o.no_cache, "always re-estimate the curves");
  sc->add_option("--threads", o.threads, "worker threads (default PLANNER_THREADS or all cores)");
}

}  // namespace

std::string version() { return PIPEPLAN_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"pipeplan: R&D pipeline inflow planning"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
  validate_cmd->add_option("scenario", o.scenario, "scenario JSON")->required();

  auto* curves_cmd = app.add_subcommand("curves", "estimate unit curves and write curves.csv");
  curves_cmd->add_option("scenario", o.scenario, "scenario JSON")->required();
  add_overrides(curves_cmd, o);

  auto* project_cmd = app.add_subcommand("project", "project a decision matrix and write projection.csv");
  project_cmd->add_option("scenario", o.scenario, "scenario JSON")->required();
  project_cmd->add_option("--decision", o.decision, "decision CSV (area,year,count); zero plan when omitted");
  add_overrides(project_cmd, o);

  auto* optimize_cmd = app.add_subcommand("optimize", "search for an inflow plan");
  optimize_cmd->add_option("scenario", o.scenario, "scenario JSON")->required();
  optimize_cmd->add_option("--objective", o.objective, "framing 1A..4B");
  optimize_cmd->add_option("--iterations", o.iterations, "annealing iterations per restart")
      ->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--restarts", o.restarts, "independent restarts")->check(CLI::PositiveNumber);
  optimize_cmd->add_flag("--oracle", o.oracle, "also enumerate the full lattice (tiny scenarios only)");
  add_overrides(optimize_cmd, o);

  auto* report_cmd = app.add_subcommand("report", "write summary.md from an optimize output directory");
  report_cmd->add_option("run_dir", o.run_dir, "directory holding decision.csv and scenario.json")->required();
  report_cmd->add_option("--out-dir", o.out_dir, "where to write summary.md (default run_dir)");
  report_cmd->add_option("--cache-dir", o.cache_dir, "curve cache directory (default <run_dir>/cache)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*curves_cmd) return cmd_curves(o, out);
    if (*project_cmd) return cmd_project(o, out);
    if (*optimize_cmd) return cmd_optimize(o, out, err);
    if (*report_cmd) return cmd_report(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "invalid scenario:\n";
    for (const auto& v : e.violations()) err << "  " << v << "\n";
    return kExitValidation;
  } catch (const ScenarioError& e) {
    err << "invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.constraint() << "\n";
    return kExitInfeasible;
  } catch (const OracleError& e) {
    err << "oracle: " << e.what() << "\n";
    return kExitValidation;
  } catch (const io::IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace pipeplan::cli

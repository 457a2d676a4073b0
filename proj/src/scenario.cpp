#include "pipeplan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace pipeplan {

using nlohmann::json;

double AreaParams::overall_success() const {
  double q = 1.0;
  for (double p : transition_prob) q *= p;
  return q;
}

double AreaParams::survival_to(Phase p) const {
  double s = 1.0;
  for (std::size_t i = 0; i < index_of(p); ++i) s *= transition_prob[i];
  return s;
}

int SolverSettings::steps_per_year() const {
  if (!(grid_step > 0.0) || grid_step > 1.0) return 0;
  const double inv = 1.0 / grid_step;
  const long steps = std::lround(inv);
  if (steps < 1 || std::abs(static_cast<double>(steps) * grid_step - 1.0) > 1e-9) return 0;
  return static_cast<int>(steps);
}

ValidationError::ValidationError(std::vector<std::string> violations)
    : ScenarioError([&] {
        std::string msg = "invalid scenario:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

namespace {

std::string path_join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ScenarioError("missing required field: " + path_join(where, key));
  }
  return obj.at(key);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ScenarioError("type mismatch at " + where + ": expected number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
    }
    throw ScenarioError("type mismatch at " + where + ": expected integer");
  }
  return v.get<std::int64_t>();
}

std::vector<double> as_series(const json& v, const std::string& where) {
  if (!v.is_array()) throw ScenarioError("type mismatch at " + where + ": expected array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

PerPhase<double> as_per_phase(const json& v, const std::string& where, bool allow_three) {
  auto s = as_series(v, where);
  if (allow_three && s.size() == 3) s.push_back(0.0);
  if (s.size() != kNumPhases) {
    throw ScenarioError("type mismatch at " + where + ": expected 4 phase entries (1, 2, 3, r)");
  }
  PerPhase<double> out{};
  std::copy(s.begin(), s.end(), out.begin());
  return out;
}

template <typename T>
T value_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
  if constexpr (std::is_integral_v<T>) {
    return static_cast<T>(as_integer(obj.at(key), path_join(where, key)));
  } else {
    return static_cast<T>(as_number(obj.at(key), path_join(where, key)));
  }
}

AreaParams parse_area(const json& a, std::size_t idx) {
  const std::string where = "areas[" + std::to_string(idx) + "]";
  if (!a.is_object()) throw ScenarioError("type mismatch at " + where + ": expected object");
  AreaParams p;
  if (a.contains("id")) {
    const auto& id = a.at("id");
    if (id.is_string()) {
      p.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      p.id = std::to_string(id.get<std::int64_t>());
    } else {
      throw ScenarioError("type mismatch at " + where + ".id: expected string");
    }
  } else {
    p.id = std::to_string(idx + 1);
  }
  p.median_duration = as_per_phase(require(a, "median_duration", where), where + ".median_duration", false);
  p.median_cost = as_per_phase(require(a, "median_cost", where), where + ".median_cost", false);
  p.sigma = as_number(require(a, "sigma", where), where + ".sigma");
  p.transition_prob = as_per_phase(require(a, "transition_prob", where), where + ".transition_prob", false);
  p.ramp_up_years = as_number(require(a, "ramp_up_years", where), where + ".ramp_up_years");
  p.peak_year_revenue = as_number(require(a, "peak_year_revenue", where), where + ".peak_year_revenue");
  p.exclusivity_years = value_or<double>(a, "exclusivity_years", 12.0, where);
  p.post_loe_fraction = as_number(require(a, "post_loe_fraction", where), where + ".post_loe_fraction");
  return p;
}

std::optional<std::vector<double>> optional_series(const json& obj, const std::string& key,
                                                   const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return as_series(obj.at(key), path_join(where, key));
}

std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return as_number(obj.at(key), path_join(where, key));
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> area_vector(const json& c, const std::string& key, std::size_t n, const std::string& where) {
  if (!c.contains(key) || c.at(key).is_null()) return std::vector<double>(n, 0.0);
  return as_series(c.at(key), path_join(where, key));
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  json areas = json::array();
  for (const auto& a : cfg.areas) {
    areas.push_back({{"id", a.id},
                     {"median_duration", a.median_duration},
                     {"median_cost", a.median_cost},
                     {"sigma", a.sigma},
                     {"transition_prob", a.transition_prob},
                     {"ramp_up_years", a.ramp_up_years},
                     {"peak_year_revenue", a.peak_year_revenue},
                     {"exclusivity_years", a.exclusivity_years},
                     {"post_loe_fraction", a.post_loe_fraction}});
  }
  doc["areas"] = areas;

  json portfolio = json::object();
  for (std::size_t j = 0; j < cfg.areas.size() && j < cfg.current_portfolio.counts.size(); ++j) {
    portfolio[cfg.areas[j].id] = cfg.current_portfolio.counts[j];
  }
  doc["current_portfolio"] = portfolio;

  const auto& c = cfg.constraints;
  doc["constraints"] = {{"min_per_phase", c.min_per_phase},
                        {"min_per_area", c.min_per_area},
                        {"min_launches", c.min_launches},
                        {"max_annual_increase", c.max_annual_increase},
                        {"initial_inflow", c.initial_inflow},
                        {"ramp_scope", c.ramp_scope == RampScope::kTotal ? "total" : "per_area"},
                        {"enforce_window", {c.window_start, c.window_end}}};

  const auto& f = cfg.forecasts;
  json fc = {{"marketed_revenue", f.marketed_revenue}};
  if (f.dev_revenue_override) fc["dev_revenue_override"] = *f.dev_revenue_override;
  if (f.revenue_target) fc["revenue_target"] = *f.revenue_target;
  if (f.mean_revenue_target) fc["mean_revenue_target"] = *f.mean_revenue_target;
  if (f.budget) fc["budget"] = *f.budget;
  if (f.mean_budget) fc["mean_budget"] = *f.mean_budget;
  doc["forecasts"] = fc;

  const auto& s = cfg.solver;
  doc["solver"] = {{"horizon_years", s.horizon_years},
                   {"inflow_years", s.inflow_years},
                   {"grid_step", s.grid_step},
                   {"mc_iterations", s.mc_iterations},
                   {"seed", s.seed},
                   {"max_new_per_area_year", s.max_new_per_area_year},
                   {"sa_schedule",
                    {{"initial_temp", s.sa_schedule.initial_temp},
                     {"cooling_factor", s.sa_schedule.cooling_factor},
                     {"iterations", s.sa_schedule.iterations},
                     {"moves_per_temp", s.sa_schedule.moves_per_temp},
                     {"restarts", s.sa_schedule.restarts}}}};
  return doc;
}

}  // namespace

ScenarioConfig parse_scenario_unchecked(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ScenarioError("missing required field: areas");
  }
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("syntax error: ") + e.what());
  }
  if (doc.is_null()) throw ScenarioError("missing required field: areas");
  if (!doc.is_object()) throw ScenarioError("type mismatch at document root: expected object");

  ScenarioConfig cfg;
  if (doc.contains("name") && doc.at("name").is_string()) cfg.name = doc.at("name").get<std::string>();

  const auto& areas = require(doc, "areas", "");
  if (!areas.is_array()) throw ScenarioError("type mismatch at areas: expected array");
  for (std::size_t j = 0; j < areas.size(); ++j) cfg.areas.push_back(parse_area(areas[j], j));
  const std::size_t n_areas = cfg.areas.size();

  cfg.current_portfolio.counts.assign(n_areas, PerPhase<std::int64_t>{});
  if (doc.contains("current_portfolio") && !doc.at("current_portfolio").is_null()) {
    const auto& cp = doc.at("current_portfolio");
    if (!cp.is_object()) throw ScenarioError("type mismatch at current_portfolio: expected object keyed by area id");
    for (const auto& [key, row] : cp.items()) {
      const std::string where = "current_portfolio." + key;
      std::size_t j = n_areas;
      for (std::size_t k = 0; k < n_areas; ++k) {
        if (cfg.areas[k].id == key) j = k;
      }
      if (j == n_areas) throw ScenarioError("unknown area id at " + where);
      if (!row.is_array() || row.size() != kNumPhases) {
        throw ScenarioError("type mismatch at " + where + ": expected 4 phase counts (1, 2, 3, r)");
      }
      for (std::size_t i = 0; i < kNumPhases; ++i) {
        cfg.current_portfolio.counts[j][i] = as_integer(row[i], where + "[" + std::to_string(i) + "]");
      }
    }
  }

  auto& bc = cfg.constraints;
  bc.min_per_area.assign(n_areas, 0.0);
  bc.min_launches.assign(n_areas, 0.0);
  if (doc.contains("constraints") && !doc.at("constraints").is_null()) {
    const auto& c = doc.at("constraints");
    const std::string where = "constraints";
    if (!c.is_object()) throw ScenarioError("type mismatch at constraints: expected object");
    if (c.contains("min_per_phase")) bc.min_per_phase = as_per_phase(c.at("min_per_phase"), where + ".min_per_phase", true);
    bc.min_per_area = area_vector(c, "min_per_area", n_areas, where);
    bc.min_launches = area_vector(c, "min_launches", n_areas, where);
    bc.max_annual_increase = value_or<std::int64_t>(c, "max_annual_increase", 2, where);
    bc.initial_inflow = value_or<std::int64_t>(c, "initial_inflow", 6, where);
    if (c.contains("ramp_scope")) {
      const auto& rs = c.at("ramp_scope");
      if (rs == "total") {
        bc.ramp_scope = RampScope::kTotal;
      } else if (rs == "per_area") {
        bc.ramp_scope = RampScope::kPerArea;
      } else {
        throw ScenarioError("type mismatch at constraints.ramp_scope: expected \"total\" or \"per_area\"");
      }
    }
    if (c.contains("enforce_window")) {
      const auto& w = c.at("enforce_window");
      if (!w.is_array() || w.size() != 2) {
        throw ScenarioError("type mismatch at constraints.enforce_window: expected [year_start, year_end]");
      }
      bc.window_start = static_cast<int>(as_integer(w[0], "constraints.enforce_window[0]"));
      bc.window_end = static_cast<int>(as_integer(w[1], "constraints.enforce_window[1]"));
    }
  }

  const auto& fc = require(doc, "forecasts", "");
  if (!fc.is_object()) throw ScenarioError("type mismatch at forecasts: expected object");
  auto& f = cfg.forecasts;
  f.marketed_revenue = as_series(require(fc, "marketed_revenue", "forecasts"), "forecasts.marketed_revenue");
  f.dev_revenue_override = optional_series(fc, "dev_revenue_override", "forecasts");
  f.revenue_target = optional_series(fc, "revenue_target", "forecasts");
  f.mean_revenue_target = optional_number(fc, "mean_revenue_target", "forecasts");
  f.budget = optional_series(fc, "budget", "forecasts");
  f.mean_budget = optional_number(fc, "mean_budget", "forecasts");
  if (!f.mean_revenue_target && f.revenue_target) f.mean_revenue_target = mean_of(*f.revenue_target);
  if (!f.mean_budget && f.budget) f.mean_budget = mean_of(*f.budget);

  auto& s = cfg.solver;
  if (doc.contains("solver") && !doc.at("solver").is_null()) {
    const auto& sv = doc.at("solver");
    const std::string where = "solver";
    if (!sv.is_object()) throw ScenarioError("type mismatch at solver: expected object");
    s.horizon_years = value_or<int>(sv, "horizon_years", 30, where);
    s.inflow_years = value_or<int>(sv, "inflow_years", s.horizon_years, where);
    s.grid_step = value_or<double>(sv, "grid_step", 1.0 / 12.0, where);
    s.mc_iterations = value_or<std::int64_t>(sv, "mc_iterations", 10000, where);
    if (sv.contains("seed")) {
      const auto& sd = sv.at("seed");
      if (!sd.is_number_integer()) throw ScenarioError("type mismatch at solver.seed: expected integer");
      s.seed = sd.is_number_unsigned() ? sd.get<std::uint64_t>()
                                       : static_cast<std::uint64_t>(sd.get<std::int64_t>());
    }
    s.max_new_per_area_year = value_or<std::int64_t>(sv, "max_new_per_area_year", 8, where);
    if (sv.contains("sa_schedule") && !sv.at("sa_schedule").is_null()) {
      const auto& sa = sv.at("sa_schedule");
      const std::string sw = "solver.sa_schedule";
      s.sa_schedule.initial_temp = value_or<double>(sa, "initial_temp", 0.0, sw);
      s.sa_schedule.cooling_factor = value_or<double>(sa, "cooling_factor", 0.95, sw);
      s.sa_schedule.iterations = value_or<std::int64_t>(sa, "iterations", 100000, sw);
      s.sa_schedule.moves_per_temp = value_or<std::int64_t>(sa, "moves_per_temp", 200, sw);
      s.sa_schedule.restarts = value_or<int>(sa, "restarts", 4, sw);
    }
  }
  return cfg;
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg = parse_scenario_unchecked(text);
  auto violations = validate(cfg);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<std::string> validate(const ScenarioConfig& cfg) {
  std::vector<std::string> out;
  const auto& s = cfg.solver;
  const int T = s.horizon_years;

  if (cfg.areas.empty()) out.emplace_back("areas: at least one disease area is required");
  for (const auto& a : cfg.areas) {
    const std::string tag = "area " + a.id;
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      const std::string ptag = tag + " phase " + std::string(phase_label(i));
      if (!(a.median_duration[i] > 0.0)) out.push_back(ptag + ": duration must be positive");
      if (!(a.median_cost[i] >= 0.0)) out.push_back(ptag + ": cost must be nonnegative");
      if (!(a.transition_prob[i] > 0.0 && a.transition_prob[i] <= 1.0)) {
        out.push_back(ptag + ": probability out of range");
      }
    }
    if (!(a.sigma >= 0.0)) out.push_back(tag + ": sigma must be nonnegative");
    if (!(a.ramp_up_years > 0.0)) out.push_back(tag + ": ramp_up_years must be positive");
    if (!(a.peak_year_revenue >= 0.0)) out.push_back(tag + ": peak_year_revenue must be nonnegative");
    if (!(a.exclusivity_years > a.ramp_up_years)) {
      out.push_back(tag + ": exclusivity_years must exceed ramp_up_years");
    }
    if (!(a.post_loe_fraction >= 0.0 && a.post_loe_fraction <= 1.0)) {
      out.push_back(tag + ": post_loe_fraction out of range");
    }
  }
  for (std::size_t j = 0; j < cfg.areas.size(); ++j) {
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      if (j < cfg.current_portfolio.counts.size() && cfg.current_portfolio.counts[j][i] < 0) {
        out.push_back("current_portfolio area " + cfg.areas[j].id + " phase " + std::string(phase_label(i)) +
                      ": count must be nonnegative");
      }
    }
  }
  if (cfg.current_portfolio.counts.size() != cfg.areas.size()) {
    out.push_back("current_portfolio: expected " + std::to_string(cfg.areas.size()) + " areas, got " +
                  std::to_string(cfg.current_portfolio.counts.size()));
  }

  const auto& c = cfg.constraints;
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    if (!(c.min_per_phase[i] >= 0.0)) out.push_back("min_per_phase: negative minimum");
  }
  auto check_area_vec = [&](const std::vector<double>& v, const char* name) {
    if (v.size() != cfg.areas.size()) {
      out.push_back(std::string(name) + ": expected " + std::to_string(cfg.areas.size()) + " entries, got " +
                    std::to_string(v.size()));
    }
    for (double x : v) {
      if (!(x >= 0.0)) {
        out.push_back(std::string(name) + ": negative minimum");
        break;
      }
    }
  };
  check_area_vec(c.min_per_area, "min_per_area");
  check_area_vec(c.min_launches, "min_launches");
  if (c.max_annual_increase < 0) out.emplace_back("max_annual_increase: must be nonnegative");
  if (c.initial_inflow < 0) out.emplace_back("initial_inflow: must be nonnegative");
  if (!(1 <= c.window_start && c.window_start <= c.window_end && c.window_end <= T)) {
    out.push_back("enforce_window: expected 1 <= start <= end <= " + std::to_string(T));
  }

  auto check_series = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != T) {
      out.push_back(std::string(name) + ": expected " + std::to_string(T) + " entries, got " +
                    std::to_string(v.size()));
    }
    for (double x : v) {
      if (!(x >= 0.0)) {
        out.push_back(std::string(name) + ": negative entry");
        break;
      }
    }
  };
  const auto& f = cfg.forecasts;
  check_series(f.marketed_revenue, "marketed_revenue");
  if (f.dev_revenue_override) check_series(*f.dev_revenue_override, "dev_revenue_override");
  if (f.revenue_target) check_series(*f.revenue_target, "revenue_target");
  if (f.budget) check_series(*f.budget, "budget");
  if (f.mean_revenue_target && !(*f.mean_revenue_target >= 0.0)) out.emplace_back("mean_revenue_target: negative");
  if (f.mean_budget && !(*f.mean_budget >= 0.0)) out.emplace_back("mean_budget: negative");

  if (!(T >= s.inflow_years && s.inflow_years >= 0 && T >= 1)) {
    out.emplace_back("solver: expected horizon_years >= inflow_years >= 0 and horizon_years >= 1");
  }
  if (s.steps_per_year() == 0) out.emplace_back("solver.grid_step: must divide one year evenly");
  if (s.mc_iterations < 1) out.emplace_back("solver.mc_iterations: must be at least 1");
  if (s.max_new_per_area_year < 0) out.emplace_back("solver.max_new_per_area_year: must be nonnegative");
  const auto& sa = s.sa_schedule;
  if (!(sa.cooling_factor > 0.0 && sa.cooling_factor <= 1.0)) {
    out.emplace_back("solver.sa_schedule.cooling_factor: expected (0, 1]");
  }
  if (sa.iterations < 0) out.emplace_back("solver.sa_schedule.iterations: must be nonnegative");
  if (sa.moves_per_temp < 1) out.emplace_back("solver.sa_schedule.moves_per_temp: must be at least 1");
  if (sa.restarts < 1) out.emplace_back("solver.sa_schedule.restarts: must be at least 1");
  return out;
}

std::string serialize_scenario(const ScenarioConfig& cfg) { return to_json(cfg).dump(2); }

std::uint64_t scenario_hash(const ScenarioConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pipeplan

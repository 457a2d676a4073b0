#include "pipeplan/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pipeplan::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

json curves_to_json(const ProjectCurves& pc) {
  return {{"phase_activity", pc.phase_activity}, {"activity", pc.activity},
          {"phase_cost_rate", pc.phase_cost_rate}, {"cost_rate", pc.cost_rate},
          {"launch_cdf", pc.launch_cdf},         {"revenue_rate", pc.revenue_rate},
          {"success", pc.success}};
}

ProjectCurves curves_from_json(const json& j) {
  ProjectCurves pc;
  j.at("phase_activity").get_to(pc.phase_activity);
  j.at("activity").get_to(pc.activity);
  j.at("phase_cost_rate").get_to(pc.phase_cost_rate);
  j.at("cost_rate").get_to(pc.cost_rate);
  j.at("launch_cdf").get_to(pc.launch_cdf);
  j.at("revenue_rate").get_to(pc.revenue_rate);
  pc.success = j.at("success").get<double>();
  return pc;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string decision_csv(const ScenarioConfig& cfg, const DecisionMatrix& n) {
  std::string out = "area,year,count\n";
  for (std::size_t j = 0; j < n.areas(); ++j) {
    for (int y = 0; y < n.years(); ++y) {
      out += cfg.areas[j].id + "," + std::to_string(y + 1) + "," + std::to_string(n(j, y)) + "\n";
    }
  }
  return out;
}

DecisionMatrix parse_decision_csv(std::string_view text, const ScenarioConfig& cfg) {
  DecisionMatrix n = zero_decision(cfg);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto line = trim(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("area", 0) == 0) continue;
    const auto f = split(line, ',');
    const std::string where = "decision csv line " + std::to_string(line_no);
    if (f.size() != 3) throw IoError(where + ": expected area,year,count");
    std::size_t j = cfg.num_areas();
    for (std::size_t k = 0; k < cfg.num_areas(); ++k) {
      if (cfg.areas[k].id == f[0]) j = k;
    }
    if (j == cfg.num_areas()) throw IoError(where + ": unknown area " + std::string(f[0]));
    int year = 0;
    long long count = 0;
    try {
      std::size_t used = 0;
      year = std::stoi(std::string(f[1]), &used);
      if (used != f[1].size()) throw std::invalid_argument("year");
      count = std::stoll(std::string(f[2]), &used);
      if (used != f[2].size()) throw std::invalid_argument("count");
    } catch (const std::exception&) {
      throw IoError(where + ": year and count must be integers");
    }
    if (year < 1 || year > n.years()) throw IoError(where + ": year outside decision window");
    if (count < 0) throw IoError(where + ": negative count");
    n(j, year - 1) = count;
  }
  return n;
}

std::string projection_csv(const ScenarioConfig& cfg, const ProjectionResult& p) {
  const auto& f = cfg.forecasts;
  std::string out = "year,revenue,cost,revenue_target,budget,revenue_marketed,revenue_current,revenue_new,"
                    "cost_current,cost_new";
  for (std::size_t i = 0; i < kNumPhases; ++i) out += ",phase_" + std::string(phase_label(i));
  for (const auto& a : cfg.areas) out += ",area_" + a.id;
  out += "\n";
  for (int t = 0; t < p.years(); ++t) {
    out += std::to_string(t + 1);
    out += "," + fmt_fixed(p.total.revenue[t]) + "," + fmt_fixed(p.total.cost[t]);
    out += "," + (f.revenue_target ? fmt_fixed((*f.revenue_target)[t]) : std::string());
    out += "," + (f.budget ? fmt_fixed((*f.budget)[t]) : std::string());
    out += "," + fmt_fixed(p.marketed_revenue[t]) + "," + fmt_fixed(p.current.revenue[t]) + "," +
           fmt_fixed(p.added.revenue[t]);
    out += "," + fmt_fixed(p.current.cost[t]) + "," + fmt_fixed(p.added.cost[t]);
    for (std::size_t i = 0; i < kNumPhases; ++i) out += "," + fmt_fixed(p.total.projects_per_phase[i][t]);
    for (std::size_t j = 0; j < cfg.num_areas(); ++j) out += "," + fmt_fixed(p.total.projects_per_area[j][t]);
    out += "\n";
  }
  return out;
}

std::string curves_csv(const ScenarioConfig& cfg, const UnitCurveSet& curves) {
  std::string out = "area,phase,t,activity,cost_rate,launch_cdf,unit_revenue\n";
  const int cells = curves.cells();
  auto emit = [&](const std::string& area, const std::string& phase, const std::vector<double>& act,
                  const std::vector<double>& cost, const std::vector<double>* launch,
                  const std::vector<double>* revenue) {
    for (int k = 0; k < cells; ++k) {
      out += area + "," + phase + "," + fmt(curves.node_time(k)) + "," + fmt(act[k]) + "," + fmt(cost[k]) + ",";
      if (launch) out += fmt((*launch)[k]);
      out += ",";
      if (revenue) out += fmt((*revenue)[k]);
      out += "\n";
    }
  };
  for (std::size_t j = 0; j < curves.areas.size(); ++j) {
    const auto& ac = curves.areas[j];
    const std::string id = j < cfg.areas.size() ? cfg.areas[j].id : ac.area_id;
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      emit(id, std::string(phase_label(i)), ac.fresh.phase_activity[i], ac.fresh.phase_cost_rate[i], nullptr, nullptr);
    }
    emit(id, "all", ac.fresh.activity, ac.fresh.cost_rate, &ac.fresh.launch_cdf, &ac.fresh.revenue_rate);
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      const auto& c = ac.current[i];
      emit(id, "current_" + std::string(phase_label(i)), c.activity, c.cost_rate, &c.launch_cdf, &c.revenue_rate);
    }
  }
  return out;
}

std::string serialize_curves(const UnitCurveSet& curves) {
  json doc = {{"horizon_years", curves.horizon_years},
              {"steps_per_year", curves.steps_per_year},
              {"mc_iterations", curves.mc_iterations},
              {"seed", curves.seed}};
  json areas = json::array();
  for (const auto& ac : curves.areas) {
    json cur = json::array();
    for (const auto& c : ac.current) cur.push_back(curves_to_json(c));
    areas.push_back({{"area_id", ac.area_id},
                     {"fresh", curves_to_json(ac.fresh)},
                     {"current", cur},
                     {"total_duration",
                      {{"mean", ac.total_duration.mean},
                       {"p05", ac.total_duration.p05},
                       {"median", ac.total_duration.median},
                       {"p95", ac.total_duration.p95}}}});
  }
  doc["areas"] = areas;
  return doc.dump();
}

UnitCurveSet deserialize_curves(std::string_view text) {
  try {
    const json doc = json::parse(text.begin(), text.end());
    UnitCurveSet s;
    s.horizon_years = doc.at("horizon_years").get<int>();
    s.steps_per_year = doc.at("steps_per_year").get<int>();
    s.mc_iterations = doc.at("mc_iterations").get<std::int64_t>();
    s.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& a : doc.at("areas")) {
      AreaCurves ac;
      ac.area_id = a.at("area_id").get<std::string>();
      ac.fresh = curves_from_json(a.at("fresh"));
      const auto& cur = a.at("current");
      if (cur.size() != kNumPhases) throw IoError("curve cache: expected 4 current-phase entries");
      for (std::size_t i = 0; i < kNumPhases; ++i) ac.current[i] = curves_from_json(cur[i]);
      const auto& d = a.at("total_duration");
      ac.total_duration = {d.at("mean").get<double>(), d.at("p05").get<double>(), d.at("median").get<double>(),
                           d.at("p95").get<double>()};
      s.areas.push_back(std::move(ac));
    }
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("curve cache unreadable: ") + e.what());
  }
}

std::string curves_cache_name(const ScenarioConfig& cfg) {
  // only the inputs of the estimation go into the key
  ScenarioConfig key;
  key.areas = cfg.areas;
  key.solver.horizon_years = cfg.solver.horizon_years;
  key.solver.grid_step = cfg.solver.grid_step;
  key.solver.mc_iterations = cfg.solver.mc_iterations;
  key.solver.seed = cfg.solver.seed;
  key.forecasts.marketed_revenue.assign(static_cast<std::size_t>(cfg.horizon()), 0.0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "curves-%016llx.json", static_cast<unsigned long long>(scenario_hash(key)));
  return buf;
}

UnitCurveSet load_or_estimate_curves(const ScenarioConfig& cfg, const std::optional<fs::path>& cache_dir,
                                     bool* cache_hit) {
  if (cache_hit) *cache_hit = false;
  if (cache_dir) {
    const fs::path file = *cache_dir / curves_cache_name(cfg);
    std::error_code ec;
    if (fs::exists(file, ec)) {
      try {
        UnitCurveSet s = deserialize_curves(read_file(file));
        if (cache_hit) *cache_hit = true;
        return s;
      } catch (const IoError&) {
        // stale or truncated cache entry; re-estimate below
      }
    }
  }
  UnitCurveSet s = estimate_all_curves(cfg);
  if (cache_dir) write_file_atomic(*cache_dir / curves_cache_name(cfg), serialize_curves(s));
  return s;
}

}  // namespace pipeplan::io

#include "pipeplan/report.hpp"

#include <algorithm>
#include <cstdio>

namespace pipeplan {

namespace {

std::string num(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string year_list(const std::vector<int>& years) {
  std::string out;
  for (std::size_t k = 0; k < years.size(); ++k) {
    if (k) out += ", ";
    out += std::to_string(years[k]);
  }
  return out;
}

}  // namespace

std::vector<LaunchRow> launch_table(const ScenarioConfig& cfg, const ProjectionResult& proj) {
  std::vector<LaunchRow> rows;
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    const double h = j < cfg.constraints.min_launches.size() ? cfg.constraints.min_launches[j] : 0.0;
    rows.push_back({cfg.areas[j].id, proj.total.launches[j], proj.current.launches[j], h});
  }
  return rows;
}

std::vector<int> years_below_target(const ScenarioConfig& cfg, const ProjectionResult& proj) {
  std::vector<int> out;
  if (!cfg.forecasts.revenue_target) return out;
  const auto& s = *cfg.forecasts.revenue_target;
  for (int t = 0; t < proj.years(); ++t) {
    if (proj.total.revenue[t] < s[t]) out.push_back(t + 1);
  }
  return out;
}

std::vector<int> years_over_budget(const ScenarioConfig& cfg, const ProjectionResult& proj) {
  std::vector<int> out;
  if (!cfg.forecasts.budget) return out;
  const auto& b = *cfg.forecasts.budget;
  for (int t = 0; t < proj.years(); ++t) {
    if (proj.total.cost[t] > b[t]) out.push_back(t + 1);
  }
  return out;
}

std::string summary_markdown(const SummaryInput& in) {
  const ScenarioConfig& cfg = in.cfg;
  const ProjectionResult& p = in.proj;
  std::string md = "# Portfolio plan";
  if (!cfg.name.empty()) md += ": " + cfg.name;
  md += "\n\n";
  if (in.framing) md += "Framing: " + std::string(framing_name(*in.framing)) + "\n";
  if (in.objective) md += "Objective value: " + num(*in.objective, 4) + "\n";
  md += "Total new projects: " + std::to_string(in.decision.total()) + "\n\n";

  md += "## Expected launches\n\n";
  md += "| area | expected launches | from current portfolio | minimum required | status |\n";
  md += "|---|---|---|---|---|\n";
  for (const auto& r : launch_table(cfg, p)) {
    md += "| " + r.area + " | " + num(r.expected) + " | " + num(r.current) + " | " + num(r.minimum) + " | " +
          (r.expected + 1e-9 >= r.minimum ? "ok" : "SHORT") + " |\n";
  }

  const auto below = years_below_target(cfg, p);
  const auto over = years_over_budget(cfg, p);

  md += "\n## Revenue vs target\n\n";
  if (cfg.forecasts.revenue_target) {
    md += "| year | revenue | target | gap | |\n|---|---|---|---|---|\n";
    for (int t = 0; t < p.years(); ++t) {
      const double s = (*cfg.forecasts.revenue_target)[t];
      md += "| " + std::to_string(t + 1) + " | " + num(p.total.revenue[t]) + " | " + num(s) + " | " +
            num(p.total.revenue[t] - s) + " | " + (p.total.revenue[t] < s ? "below target" : "") + " |\n";
    }
    md += "\n";
    md += below.empty() ? std::string("Revenue meets the target in every year.\n")
                        : "Years below revenue target: " + year_list(below) + "\n";
  } else {
    md += "No revenue target in the scenario.\n";
  }

  md += "\n## Cost vs budget\n\n";
  if (cfg.forecasts.budget) {
    md += "| year | cost | budget | headroom | |\n|---|---|---|---|---|\n";
    for (int t = 0; t < p.years(); ++t) {
      const double b = (*cfg.forecasts.budget)[t];
      md += "| " + std::to_string(t + 1) + " | " + num(p.total.cost[t]) + " | " + num(b) + " | " +
            num(b - p.total.cost[t]) + " | " + (p.total.cost[t] > b ? "over budget" : "") + " |\n";
    }
    md += "\n";
    md += over.empty() ? std::string("Cost stays within budget in every year.\n")
                       : "Years over budget: " + year_list(over) + "\n";
  } else {
    md += "No budget in the scenario.\n";
  }

  md += "\n## New projects, first " + std::to_string(kReportInflowYears) + " years\n\n| year |";
  for (const auto& a : cfg.areas) md += " area " + a.id + " |";
  md += " total |\n|---|";
  for (std::size_t j = 0; j <= cfg.num_areas(); ++j) md += "---|";
  md += "\n";
  const int years = std::min(kReportInflowYears, in.decision.years());
  for (int y = 0; y < years; ++y) {
    md += "| " + std::to_string(y + 1) + " |";
    for (std::size_t j = 0; j < in.decision.areas(); ++j) md += " " + std::to_string(in.decision(j, y)) + " |";
    md += " " + std::to_string(in.decision.year_total(y)) + " |\n";
  }
  return md;
}

}  // namespace pipeplan

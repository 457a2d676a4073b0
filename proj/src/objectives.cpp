#include "pipeplan/objectives.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pipeplan {

namespace {

enum class Family { kMeanRevenue, kYearlyRevenue, kMeanBudget, kYearlyBudget };

Family family_of(Framing f) {
  switch (f) {
    case Framing::k1A:
    case Framing::k1B: return Family::kMeanRevenue;
    case Framing::k2A:
    case Framing::k2B: return Family::kYearlyRevenue;
    case Framing::k3A:
    case Framing::k3B: return Family::kMeanBudget;
    case Framing::k4A:
    case Framing::k4B: return Family::kYearlyBudget;
  }
  return Family::kMeanRevenue;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

const std::vector<double>& need(const std::optional<std::vector<double>>& v, const char* name) {
  if (!v) throw std::invalid_argument(std::string("scenario lacks forecasts.") + name);
  return *v;
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw std::invalid_argument(std::string("scenario lacks forecasts.") + name);
  return *v;
}

double framing_slack(const ProjectionResult& proj, const ScenarioConfig& cfg, Family fam) {
  const auto& f = cfg.forecasts;
  const auto& R = proj.total.revenue;
  const auto& G = proj.total.cost;
  double slack = std::numeric_limits<double>::infinity();
  switch (fam) {
    case Family::kMeanRevenue: return mean(R) - need(f.mean_revenue_target, "mean_revenue_target");
    case Family::kYearlyRevenue: {
      const auto& S = need(f.revenue_target, "revenue_target");
      for (std::size_t t = 0; t < R.size(); ++t) slack = std::min(slack, R[t] - S[t]);
      return slack;
    }
    case Family::kMeanBudget: return need(f.mean_budget, "mean_budget") - mean(G);
    case Family::kYearlyBudget: {
      const auto& B = need(f.budget, "budget");
      for (std::size_t t = 0; t < G.size(); ++t) slack = std::min(slack, B[t] - G[t]);
      return slack;
    }
  }
  return slack;
}

const char* framing_constraint_name(Family fam) {
  switch (fam) {
    case Family::kMeanRevenue: return "mean_revenue >= S";
    case Family::kYearlyRevenue: return "revenue[t] >= S[t]";
    case Family::kMeanBudget: return "mean_cost <= B";
    case Family::kYearlyBudget: return "cost[t] <= B[t]";
  }
  return "";
}

std::pair<int, int> window(const ScenarioConfig& cfg, int years) {
  const auto& c = cfg.constraints;
  return {std::max(1, c.window_start) - 1, std::min(years, c.window_end)};
}

double window_min(const std::vector<double>& series, std::pair<int, int> w, double floor) {
  double m = std::numeric_limits<double>::infinity();
  for (int t = w.first; t < w.second; ++t) m = std::min(m, series[t] - floor);
  return m;
}

template <typename Visit>
void ramp_slacks(const DecisionMatrix& n, const BalanceConstraints& c, Visit&& visit) {
  const auto delta = c.max_annual_increase;
  if (c.ramp_scope == RampScope::kTotal) {
    std::int64_t prev = c.initial_inflow;
    for (int y = 0; y < n.years(); ++y) {
      const std::int64_t cur = n.year_total(y);
      if (!visit(y, static_cast<double>(prev + delta - cur))) return;
      prev = cur;
    }
  } else {
    for (int y = 0; y < n.years(); ++y) {
      std::int64_t worst = std::numeric_limits<std::int64_t>::max();
      for (std::size_t j = 0; j < n.areas(); ++j) {
        const std::int64_t prev = y == 0 ? c.initial_inflow : n(j, y - 1);
        worst = std::min(worst, prev + delta - n(j, y));
      }
      if (!visit(y, static_cast<double>(worst))) return;
    }
  }
}

}  // namespace

std::string_view framing_name(Framing f) {
  switch (f) {
    case Framing::k1A: return "1A";
    case Framing::k1B: return "1B";
    case Framing::k2A: return "2A";
    case Framing::k2B: return "2B";
    case Framing::k3A: return "3A";
    case Framing::k3B: return "3B";
    case Framing::k4A: return "4A";
    case Framing::k4B: return "4B";
  }
  return "?";
}

std::optional<Framing> parse_framing(std::string_view name) {
  for (Framing f : kAllFramings) {
    const auto n = framing_name(f);
    if (name.size() == 2 && name[0] == n[0] && (name[1] == n[1] || name[1] == n[1] + ('a' - 'A'))) return f;
  }
  return std::nullopt;
}

std::vector<std::string> missing_inputs(const ScenarioConfig& cfg, const ObjectiveSpec& spec) {
  const auto& f = cfg.forecasts;
  std::vector<std::string> out;
  const Framing fr = spec.framing;
  switch (family_of(fr)) {
    case Family::kMeanRevenue:
      if (!f.mean_revenue_target) out.emplace_back("mean_revenue_target");
      break;
    case Family::kYearlyRevenue:
      if (!f.revenue_target) out.emplace_back("revenue_target");
      break;
    case Family::kMeanBudget:
      if (!f.mean_budget) out.emplace_back("mean_budget");
      break;
    case Family::kYearlyBudget:
      if (!f.budget) out.emplace_back("budget");
      break;
  }
  const bool needs_budget_series = fr == Framing::k1B || fr == Framing::k2B;
  const bool needs_target_series = fr == Framing::k3B || fr == Framing::k4B;
  if (needs_budget_series && !f.budget) out.emplace_back("budget");
  if (needs_target_series && !f.revenue_target) out.emplace_back("revenue_target");
  return out;
}

std::string ConstraintReport::first_violation(const ScenarioConfig& cfg) const {
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    if (slack_per_phase[i] < 0.0) return "min_per_phase (phase " + std::string(phase_label(i)) + ")";
  }
  for (std::size_t j = 0; j < slack_per_area.size(); ++j) {
    if (slack_per_area[j] < 0.0) return "min_per_area (area " + cfg.areas[j].id + ")";
  }
  for (std::size_t j = 0; j < slack_launches.size(); ++j) {
    if (slack_launches[j] < 0.0) return "min_launches (area " + cfg.areas[j].id + ")";
  }
  for (std::size_t y = 0; y < slack_ramp.size(); ++y) {
    if (slack_ramp[y] < 0.0) return "max_annual_increase (year " + std::to_string(y + 1) + ")";
  }
  if (framing_constraint_slack < 0.0) return framing_constraint;
  return {};
}

ConstraintReport check_constraints(const ProjectionResult& proj, const DecisionMatrix& n, const ScenarioConfig& cfg,
                                   const ObjectiveSpec& spec) {
  const auto& c = cfg.constraints;
  const auto w = window(cfg, proj.years());
  ConstraintReport rep;
  bool ok = true;
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    rep.slack_per_phase[i] = window_min(proj.total.projects_per_phase[i], w, c.min_per_phase[i]);
    ok = ok && rep.slack_per_phase[i] >= 0.0;
  }
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    rep.slack_per_area.push_back(window_min(proj.total.projects_per_area[j], w, c.min_per_area[j]));
    rep.slack_launches.push_back(proj.total.launches[j] - c.min_launches[j]);
    ok = ok && rep.slack_per_area.back() >= 0.0 && rep.slack_launches.back() >= 0.0;
  }
  rep.slack_ramp.reserve(n.years());
  ramp_slacks(n, c, [&](int, double s) {
    rep.slack_ramp.push_back(s);
    ok = ok && s >= 0.0;
    return true;
  });
  const Family fam = family_of(spec.framing);
  rep.framing_constraint = framing_constraint_name(fam);
  rep.framing_constraint_slack = framing_slack(proj, cfg, fam);
  rep.feasible = ok && rep.framing_constraint_slack >= 0.0;
  return rep;
}

bool is_feasible(const ProjectionResult& proj, const DecisionMatrix& n, const ScenarioConfig& cfg,
                 const ObjectiveSpec& spec) {
  const auto& c = cfg.constraints;
  const auto w = window(cfg, proj.years());
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    if (proj.total.launches[j] - c.min_launches[j] < 0.0) return false;
  }
  bool ok = true;
  ramp_slacks(n, c, [&](int, double s) {
    ok = s >= 0.0;
    return ok;
  });
  if (!ok) return false;
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    if (window_min(proj.total.projects_per_phase[i], w, c.min_per_phase[i]) < 0.0) return false;
  }
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    if (window_min(proj.total.projects_per_area[j], w, c.min_per_area[j]) < 0.0) return false;
  }
  return framing_slack(proj, cfg, family_of(spec.framing)) >= 0.0;
}

double objective_value(const ProjectionResult& proj, const ScenarioConfig& cfg, const ObjectiveSpec& spec) {
  const auto& R = proj.total.revenue;
  const auto& G = proj.total.cost;
  const auto& f = cfg.forecasts;
  switch (spec.framing) {
    case Framing::k1A:
    case Framing::k2A: {
      double s = 0.0;
      for (double x : G) s += x;
      return s;
    }
    case Framing::k1B:
    case Framing::k2B: {
      const auto& B = need(f.budget, "budget");
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < G.size(); ++t) m = std::max(m, G[t] - B[t]);
      return m;
    }
    case Framing::k3A:
    case Framing::k4A: {
      double s = 0.0;
      for (double x : R) s += x;
      return -s;
    }
    case Framing::k3B:
    case Framing::k4B: {
      const auto& S = need(f.revenue_target, "revenue_target");
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < R.size(); ++t) m = std::min(m, R[t] - S[t]);
      return -m;
    }
  }
  return 0.0;
}

}  // namespace pipeplan

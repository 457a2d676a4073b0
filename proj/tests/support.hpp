#pragma once

#include <cmath>
#include <random>
#include <string>

#include "pipeplan/projection.hpp"
#include "pipeplan/riskmodel.hpp"
#include "pipeplan/scenario.hpp"

#ifndef PIPEPLAN_SOURCE_DIR
#define PIPEPLAN_SOURCE_DIR "."
#endif

namespace testsupport {

using namespace pipeplan;

inline std::string data_path(const std::string& name) { return std::string(PIPEPLAN_SOURCE_DIR) + "/data/" + name; }

inline ScenarioConfig demo() { return load_scenario(data_path("demo.json")); }

inline ScenarioConfig demo_sigma(double sigma) {
  ScenarioConfig cfg = demo();
  for (auto& a : cfg.areas) a.sigma = sigma;
  return cfg;
}

// Minimal valid scenario: one area, no portfolio, no minima.
inline ScenarioConfig bare(int horizon = 10, int inflow = 3) {
  ScenarioConfig cfg = demo();
  cfg.areas.resize(1);
  cfg.current_portfolio.counts.assign(1, PerPhase<std::int64_t>{});
  cfg.constraints.min_per_phase = {};
  cfg.constraints.min_per_area = {0.0};
  cfg.constraints.min_launches = {0.0};
  cfg.constraints.window_start = 1;
  cfg.constraints.window_end = horizon;
  cfg.solver.horizon_years = horizon;
  cfg.solver.inflow_years = inflow;
  cfg.solver.mc_iterations = 2000;
  cfg.forecasts.marketed_revenue.assign(horizon, 1.0);
  cfg.forecasts.revenue_target.reset();
  cfg.forecasts.mean_revenue_target.reset();
  cfg.forecasts.budget.reset();
  cfg.forecasts.mean_budget.reset();
  cfg.forecasts.dev_revenue_override.reset();
  return cfg;
}

// --- sigma = 0 closed forms, straight from the definitions -----------------

inline double phase_start(const AreaParams& p, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < i; ++k) s += p.median_duration[k];
  return s;
}

inline double survival(const AreaParams& p, std::size_t i) {
  double s = 1.0;
  for (std::size_t k = 0; k < i; ++k) s *= p.transition_prob[k];
  return s;
}

// Probability that a project started at 0 is in phase i at time t.
inline double step_activity(const AreaParams& p, std::size_t i, double t) {
  const double a = phase_start(p, i);
  const double b = a + p.median_duration[i];
  const bool inside = i == 0 ? (t >= a && t <= b) : (t > a && t <= b);
  return inside ? survival(p, i) : 0.0;
}

// Risk-adjusted cost rate at an interior time t (not on a phase boundary).
inline double step_cost_rate(const AreaParams& p, double t) {
  double r = 0.0;
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    const double a = phase_start(p, i);
    const double b = a + p.median_duration[i];
    if (t > a && t < b) r += survival(p, i) * p.median_cost[i] / p.median_duration[i];
  }
  return r;
}

inline double step_launch(const AreaParams& p, double s) {
  const double total = phase_start(p, kNumPhases);
  return s > total ? survival(p, kNumPhases) : 0.0;
}

// Hand-coded ramp: linear to peak, plateau, then the post-LOE fraction.
inline double hand_ramp(double u, double peak, double loe, double frac, double s) {
  if (s <= 0.0) return 0.0;
  if (s <= u) return s / u * peak;
  if (s <= loe) return peak;
  return frac * peak;
}

// --- tiny instances ----------------------------------------------------------

struct TinyInstance {
  ScenarioConfig cfg;
  UnitCurveSet curves;
};

// Two areas x three years with cap 2 and constraints drawn around a random
// reference plan so that the instance is feasible.
inline TinyInstance tiny_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioConfig cfg = demo();
  cfg.name = "tiny";
  cfg.areas.resize(2);
  cfg.current_portfolio.counts = {{2, 1, 1, 0}, {1, 1, 0, 1}};
  const int T = 12;
  cfg.solver.horizon_years = T;
  cfg.solver.inflow_years = 3;
  cfg.solver.max_new_per_area_year = 2;
  cfg.solver.mc_iterations = 2000;
  cfg.solver.seed = seed;
  cfg.forecasts.marketed_revenue.assign(T, 2.0);
  cfg.forecasts.dev_revenue_override.reset();
  cfg.constraints.window_start = 2;
  cfg.constraints.window_end = 6;
  cfg.constraints.initial_inflow = static_cast<std::int64_t>(rng() % 3);
  cfg.constraints.max_annual_increase = 1 + static_cast<std::int64_t>(rng() % 3);
  cfg.constraints.ramp_scope = RampScope::kTotal;

  const UnitCurveSet curves = estimate_all_curves(cfg, {Execution::kSerialReference, 1});

  // Reference plan that obeys cap and ramp.
  DecisionMatrix ref(2, 3);
  std::int64_t prev = cfg.constraints.initial_inflow;
  for (int y = 0; y < 3; ++y) {
    const std::int64_t room = std::min<std::int64_t>(4, prev + cfg.constraints.max_annual_increase);
    std::int64_t total = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(room + 1));
    ref(0, y) = std::min<std::int64_t>(2, total / 2 + total % 2);
    ref(1, y) = std::min<std::int64_t>(2, total - ref(0, y));
    prev = ref.year_total(y);
  }
  const ProjectionResult p = project_portfolio(cfg, curves, ref);

  auto frac = [&] { return 0.3 + 0.6 * u(rng); };
  const int w0 = cfg.constraints.window_start - 1;
  const int w1 = cfg.constraints.window_end;
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    double m = 1e9;
    for (int t = w0; t < w1; ++t) m = std::min(m, p.total.projects_per_phase[i][t]);
    cfg.constraints.min_per_phase[i] = u(rng) < 0.5 ? frac() * m : 0.0;
  }
  cfg.constraints.min_per_area.assign(2, 0.0);
  cfg.constraints.min_launches.assign(2, 0.0);
  for (std::size_t j = 0; j < 2; ++j) {
    double m = 1e9;
    for (int t = w0; t < w1; ++t) m = std::min(m, p.total.projects_per_area[j][t]);
    cfg.constraints.min_per_area[j] = u(rng) < 0.5 ? frac() * m : 0.0;
    cfg.constraints.min_launches[j] = u(rng) < 0.7 ? frac() * p.total.launches[j] : 0.0;
  }

  std::vector<double> s(T), b(T);
  double mean_r = 0.0, mean_g = 0.0;
  for (int t = 0; t < T; ++t) {
    s[t] = p.total.revenue[t] * (0.85 + 0.15 * u(rng));
    b[t] = p.total.cost[t] * (1.0 + 0.5 * u(rng)) + 0.01;
    mean_r += p.total.revenue[t] / T;
    mean_g += p.total.cost[t] / T;
  }
  cfg.forecasts.revenue_target = s;
  cfg.forecasts.budget = b;
  cfg.forecasts.mean_revenue_target = mean_r * (0.9 + 0.1 * u(rng));
  cfg.forecasts.mean_budget = mean_g * (1.0 + 0.3 * u(rng));
  return {cfg, curves};
}

}  // namespace testsupport

#include <cmath>
#include <random>

#include "doctest.h"
#include "pipeplan/oracle.hpp"
#include "pipeplan/ramp.hpp"
#include "support.hpp"

using namespace pipeplan;
using namespace testsupport;

namespace {

ScenarioConfig small_demo() {
  ScenarioConfig cfg = demo();
  cfg.solver.mc_iterations = 2000;
  return cfg;
}

DecisionMatrix random_plan(const ScenarioConfig& cfg, std::uint64_t seed, std::int64_t hi = 4) {
  std::mt19937_64 rng(seed);
  DecisionMatrix n = zero_decision(cfg);
  for (std::size_t j = 0; j < n.areas(); ++j) {
    for (int y = 0; y < n.years(); ++y) n(j, y) = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi + 1));
  }
  return n;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

void require_close(const PortfolioSeries& a, const PortfolioSeries& b, double tol) {
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    for (std::size_t t = 0; t < a.cost.size(); ++t) CHECK(rel(a.projects_per_phase[i][t], b.projects_per_phase[i][t]) <= tol);
  }
  for (std::size_t j = 0; j < a.launches.size(); ++j) {
    for (std::size_t t = 0; t < a.cost.size(); ++t) CHECK(rel(a.projects_per_area[j][t], b.projects_per_area[j][t]) <= tol);
    CHECK(rel(a.launches[j], b.launches[j]) <= tol);
  }
  for (std::size_t t = 0; t < a.cost.size(); ++t) {
    CHECK(rel(a.cost[t], b.cost[t]) <= tol);
    CHECK(rel(a.revenue[t], b.revenue[t]) <= tol);
  }
}

}  // namespace

TEST_CASE("ramp revenue examples") {
  const ScenarioConfig cfg = demo();
  CHECK(ramp_revenue(cfg.areas[1], 5.0) == doctest::Approx(5.0));
  CHECK(ramp_revenue(cfg.areas[0], 1.5) == doctest::Approx(0.75));
  CHECK(ramp_revenue(cfg.areas[2], cfg.areas[2].exclusivity_years + 1.0) == doctest::Approx(0.45));
  CHECK(ramp_revenue(cfg.areas[0], 0.0) == 0.0);
  CHECK(ramp_revenue(cfg.areas[0], -2.0) == 0.0);
}

TEST_CASE("ramp cumulative integral matches quadrature") {
  const ScenarioConfig cfg = demo();
  for (const auto& p : cfg.areas) {
    double acc = 0.0;
    const int steps = 40000;
    const double h = 20.0 / steps;
    for (int k = 0; k < steps; ++k) {
      const double s = (k + 0.5) * h;
      acc += hand_ramp(p.ramp_up_years, p.peak_year_revenue, p.exclusivity_years, p.post_loe_fraction, s) * h;
      if ((k + 1) % 4000 == 0) CHECK(ramp_revenue_cumulative(p, (k + 1) * h) == doctest::Approx(acc).epsilon(1e-6));
    }
  }
}

TEST_CASE("empty pipeline projects only marketed revenue") {
  ScenarioConfig cfg = small_demo();
  for (auto& row : cfg.current_portfolio.counts) row = {};
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionResult p = project_portfolio(cfg, curves, zero_decision(cfg));
  for (int t = 0; t < cfg.horizon(); ++t) {
    CHECK(p.total.cost[t] == 0.0);
    CHECK(p.total.revenue[t] == cfg.forecasts.marketed_revenue[t]);
  }
  CHECK(internal_dev_revenue(cfg, curves) == std::vector<double>(30, 0.0));
}

TEST_CASE("zero plan has no added contribution") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionResult p = project_portfolio(cfg, curves, zero_decision(cfg));
  for (int t = 0; t < cfg.horizon(); ++t) {
    CHECK(p.added.cost[t] == 0.0);
    CHECK(p.added.revenue[t] == 0.0);
    for (std::size_t i = 0; i < kNumPhases; ++i) CHECK(p.added.projects_per_phase[i][t] == 0.0);
  }
  for (double l : p.added.launches) CHECK(l == 0.0);
}

TEST_CASE("current portfolio launches with sigma zero") {
  ScenarioConfig cfg = demo_sigma(0.0);
  cfg.solver.mc_iterations = 1;
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionResult p = project_portfolio(cfg, curves, zero_decision(cfg));
  // hand arithmetic: sum_i K_i * prod_{i' >= i} P_i'
  const double l1 = 6 * (0.6 * 0.4 * 0.7 * 0.95) + 3 * (0.4 * 0.7 * 0.95) + 3 * (0.7 * 0.95) + 1 * 0.95;
  const double l2 = 2 * (0.5 * 0.3 * 0.6 * 0.9) + 2 * (0.3 * 0.6 * 0.9) + 1 * (0.6 * 0.9) + 1 * 0.9;
  const double l3 = 5 * (0.6 * 0.3 * 0.6 * 0.9) + 2 * (0.3 * 0.6 * 0.9) + 1 * (0.6 * 0.9) + 1 * 0.9;
  CHECK(p.total.launches[0] == doctest::Approx(l1).epsilon(1e-12));
  CHECK(p.total.launches[1] == doctest::Approx(l2).epsilon(1e-12));
  CHECK(p.total.launches[2] == doctest::Approx(l3).epsilon(1e-12));
  CHECK(std::abs(p.total.launches[0] - 4.70) <= 0.01);
}

TEST_CASE("dev revenue override is used verbatim") {
  ScenarioConfig cfg = small_demo();
  std::vector<double> rk(30);
  for (int t = 0; t < 30; ++t) rk[t] = 0.1 * t;
  cfg.forecasts.dev_revenue_override = rk;
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionResult p = project_portfolio(cfg, curves, zero_decision(cfg));
  CHECK(p.current.revenue == rk);
  for (int t = 0; t < 30; ++t) CHECK(p.total.revenue[t] == cfg.forecasts.marketed_revenue[t] + rk[t]);
}

TEST_CASE("doubling the plan doubles every added component") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionModel model(cfg, curves);
  const DecisionMatrix n = random_plan(cfg, 3);
  DecisionMatrix n2 = n;
  for (std::size_t j = 0; j < n.areas(); ++j) {
    for (int y = 0; y < n.years(); ++y) n2(j, y) *= 2;
  }
  const ProjectionResult a = model.project(n);
  const ProjectionResult b = model.project(n2);
  const ProjectionResult& base = model.baseline();
  for (int t = 0; t < cfg.horizon(); ++t) {
    CHECK(b.total.cost[t] - base.total.cost[t] == doctest::Approx(2 * (a.total.cost[t] - base.total.cost[t])));
    CHECK(b.added.revenue[t] == doctest::Approx(2 * a.added.revenue[t]));
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      CHECK(b.added.projects_per_phase[i][t] == doctest::Approx(2 * a.added.projects_per_phase[i][t]));
    }
    for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
      CHECK(b.added.projects_per_area[j][t] == doctest::Approx(2 * a.added.projects_per_area[j][t]));
    }
  }
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) CHECK(b.added.launches[j] == doctest::Approx(2 * a.added.launches[j]));
}

TEST_CASE("additivity around the baseline") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionModel model(cfg, curves);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DecisionMatrix n1 = random_plan(cfg, 10 + s), n2 = random_plan(cfg, 20 + s);
    DecisionMatrix sum = n1;
    for (std::size_t j = 0; j < sum.areas(); ++j) {
      for (int y = 0; y < sum.years(); ++y) sum(j, y) += n2(j, y);
    }
    const auto a = model.project(n1), b = model.project(n2), c = model.project(sum);
    const auto& base = model.baseline();
    for (int t = 0; t < cfg.horizon(); ++t) {
      const double lhs = c.total.revenue[t] - base.total.revenue[t];
      const double rhs = (a.total.revenue[t] - base.total.revenue[t]) + (b.total.revenue[t] - base.total.revenue[t]);
      CHECK(rel(lhs, rhs) <= 1e-9);
      CHECK(rel(c.total.cost[t] - base.total.cost[t],
                (a.total.cost[t] - base.total.cost[t]) + (b.total.cost[t] - base.total.cost[t])) <= 1e-9);
    }
  }
}

TEST_CASE("kernel projection agrees with the naive double sum") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const DecisionMatrix n = random_plan(cfg, 40 + s, 8);
    const ProjectionResult fast = project_portfolio(cfg, curves, n);
    const ProjectionResult slow = naive_projection(cfg, curves, n);
    require_close(fast.total, slow.total, 1e-9);
    require_close(fast.current, slow.current, 1e-9);
  }
}

TEST_CASE("incremental updates agree with full re-projection") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionModel model(cfg, curves);
  DecisionMatrix n = random_plan(cfg, 77);
  ProjectionResult inc = model.project(n);
  std::mt19937_64 rng(5);
  for (int move = 0; move < 1000; ++move) {
    const std::size_t j = rng() % n.areas();
    const int y = static_cast<int>(rng() % static_cast<std::uint64_t>(n.years()));
    const std::int64_t d = (n(j, y) > 0 && rng() % 2) ? -1 : +1;
    n(j, y) += d;
    model.apply(inc, j, y, d);
  }
  const ProjectionResult full = model.project(n);
  require_close(inc.total, full.total, 1e-9);
  require_close(inc.added, full.added, 1e-9);
}

TEST_CASE("launch count consistency") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionModel model(cfg, curves);
  const DecisionMatrix n = random_plan(cfg, 9);
  const ProjectionResult p = model.project(n);
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    const double bound = cfg.areas[j].overall_success() * static_cast<double>(n.area_total(j));
    CHECK(p.added.launches[j] <= bound + 1e-12);
  }
  // a project started in year 1 has launched by year 30 almost surely
  DecisionMatrix one = zero_decision(cfg);
  one(0, 0) = 1;
  CHECK(model.project(one).added.launches[0] == doctest::Approx(cfg.areas[0].overall_success()).epsilon(1e-3));
}

TEST_CASE("a started project counts as one active project at its start") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  for (const auto& ac : curves.areas) {
    double total = 0.0;
    for (std::size_t i = 0; i < kNumPhases; ++i) total += ac.fresh.phase_activity[i][0];
    CHECK(total == 1.0);
  }
  // the yearly kernel sees it at the end of its first year
  const ProjectionModel model(cfg, curves);
  CHECK(model.kernel(0).area_count[0] == curves.areas[0].fresh.activity[curves.steps_per_year]);
}

TEST_CASE("dimension mismatch is rejected") {
  const ScenarioConfig cfg = small_demo();
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionModel model(cfg, curves);
  CHECK_THROWS_AS(model.project(DecisionMatrix(2, 30)), ProjectionError);
  CHECK_THROWS_AS(model.project(DecisionMatrix(3, 10)), ProjectionError);
  ScenarioConfig other = cfg;
  other.areas.pop_back();
  other.current_portfolio.counts.pop_back();
  CHECK_THROWS_AS(ProjectionModel(other, curves), ProjectionError);
}

TEST_CASE("evaluation size does not depend on the Monte Carlo size") {
  ScenarioConfig cfg = small_demo();
  cfg.solver.mc_iterations = 50;
  const ProjectionModel small(cfg, estimate_all_curves(cfg));
  cfg.solver.mc_iterations = 5000;
  const ProjectionModel large(cfg, estimate_all_curves(cfg));
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    CHECK(small.kernel(j).cost.size() == large.kernel(j).cost.size());
    CHECK(small.kernel(j).launches_by_start.size() == large.kernel(j).launches_by_start.size());
  }
}

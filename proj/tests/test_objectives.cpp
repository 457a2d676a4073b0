#include <limits>

#include "doctest.h"
#include "pipeplan/objectives.hpp"
#include "support.hpp"

using namespace pipeplan;
using namespace testsupport;

namespace {

ProjectionResult synthetic(std::size_t areas, std::vector<double> cost, std::vector<double> revenue) {
  ProjectionResult p;
  const int T = static_cast<int>(cost.size());
  p.marketed_revenue.assign(T, 0.0);
  p.current = PortfolioSeries(areas, T);
  p.added = PortfolioSeries(areas, T);
  p.total = PortfolioSeries(areas, T);
  p.total.cost = std::move(cost);
  p.total.revenue = std::move(revenue);
  return p;
}

ScenarioConfig three_year() {
  ScenarioConfig cfg = bare(3, 1);
  cfg.forecasts.marketed_revenue.assign(3, 0.0);
  return cfg;
}

}  // namespace

TEST_CASE("framing names round-trip") {
  for (Framing f : kAllFramings) CHECK(parse_framing(framing_name(f)) == f);
  CHECK(parse_framing("4b") == Framing::k4B);
  CHECK_FALSE(parse_framing("5A"));
  CHECK_FALSE(parse_framing("1AB"));
}

TEST_CASE("1A sums cost") {
  ScenarioConfig cfg = bare(5, 1);
  std::vector<double> g = {1.0, 2.0, 3.0, 0.0, 0.0};
  const auto p = synthetic(1, g, std::vector<double>(5, 0.0));
  CHECK(objective_value(p, cfg, {Framing::k1A}) == doctest::Approx(6.0));
  CHECK(objective_value(p, cfg, {Framing::k2A}) == doctest::Approx(6.0));
}

TEST_CASE("1B is the worst excess over budget") {
  ScenarioConfig cfg = three_year();
  cfg.forecasts.budget = std::vector<double>{1.0, 1.0, 1.0};
  const auto p = synthetic(1, {0.5, 1.3, 0.9}, {0.0, 0.0, 0.0});
  CHECK(objective_value(p, cfg, {Framing::k1B}) == doctest::Approx(0.3));
  CHECK(objective_value(p, cfg, {Framing::k2B}) == doctest::Approx(0.3));
}

TEST_CASE("3B is the negated worst revenue surplus") {
  ScenarioConfig cfg = three_year();
  cfg.forecasts.revenue_target = std::vector<double>{1.0, 1.0, 1.0};
  const auto p = synthetic(1, {0.0, 0.0, 0.0}, {2.0, 0.6, 3.0});
  CHECK(objective_value(p, cfg, {Framing::k3B}) == doctest::Approx(0.4));
  CHECK(objective_value(p, cfg, {Framing::k4B}) == doctest::Approx(0.4));
  CHECK(objective_value(p, cfg, {Framing::k3A}) == doctest::Approx(-5.6));
}

TEST_CASE("ramp slack") {
  ScenarioConfig cfg = three_year();
  cfg.constraints.max_annual_increase = 2;
  cfg.constraints.initial_inflow = 2;
  cfg.forecasts.mean_budget = 1e9;
  cfg.areas.push_back(cfg.areas[0]);
  cfg.areas[1].id = "2";
  cfg.current_portfolio.counts.push_back({});
  cfg.constraints.min_per_area.push_back(0.0);
  cfg.constraints.min_launches.push_back(0.0);
  DecisionMatrix n(2, 3);
  n(0, 0) = 2;
  n(1, 0) = 2;  // 4 in year 1
  n(0, 1) = 4;
  n(1, 1) = 3;  // 7 in year 2
  const auto p = synthetic(2, {0, 0, 0}, {0, 0, 0});
  const ConstraintReport rep = check_constraints(p, n, cfg, {Framing::k3A});
  REQUIRE(rep.slack_ramp.size() == 3);
  CHECK(rep.slack_ramp[0] == 0.0);
  CHECK(rep.slack_ramp[1] == -1.0);
  CHECK(rep.slack_ramp[2] == 9.0);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.first_violation(cfg) == "max_annual_increase (year 2)");
  CHECK_FALSE(is_feasible(p, n, cfg, {Framing::k3A}));

  cfg.constraints.ramp_scope = RampScope::kPerArea;
  const ConstraintReport per = check_constraints(p, n, cfg, {Framing::k3A});
  CHECK(per.slack_ramp[0] == 2.0);
  CHECK(per.slack_ramp[1] == 0.0);
  CHECK(per.feasible);
}

TEST_CASE("empty plan is infeasible on the demo") {
  ScenarioConfig cfg = demo();
  cfg.solver.mc_iterations = 2000;
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const DecisionMatrix n = zero_decision(cfg);
  const ProjectionResult p = project_portfolio(cfg, curves, n);
  for (Framing f : kAllFramings) {
    const ConstraintReport rep = check_constraints(p, n, cfg, {f});
    CHECK_FALSE(rep.feasible);
    CHECK(rep.slack_per_phase[0] < 0.0);
    CHECK(rep.first_violation(cfg) == "min_per_phase (phase 1)");
    CHECK(is_feasible(p, n, cfg, {f}) == rep.feasible);
  }
}

TEST_CASE("vacuous constraints accept any plan") {
  ScenarioConfig cfg = bare(8, 4);
  cfg.constraints.max_annual_increase = std::numeric_limits<std::int32_t>::max();
  cfg.forecasts.mean_budget = 1e12;
  const UnitCurveSet curves = estimate_all_curves(cfg);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    DecisionMatrix n = zero_decision(cfg);
    for (int y = 0; y < n.years(); ++y) n(0, y) = static_cast<std::int64_t>(rng() % 50);
    const ProjectionResult p = project_portfolio(cfg, curves, n);
    const ConstraintReport rep = check_constraints(p, n, cfg, {Framing::k3A});
    CHECK(rep.feasible);
    CHECK(rep.first_violation(cfg).empty());
  }
}

TEST_CASE("adding projects never lowers 1A cost") {
  ScenarioConfig cfg = demo();
  cfg.solver.mc_iterations = 2000;
  const UnitCurveSet curves = estimate_all_curves(cfg);
  const ProjectionModel model(cfg, curves);
  std::mt19937_64 rng(2);
  DecisionMatrix n = zero_decision(cfg);
  double prev = objective_value(model.project(n), cfg, {Framing::k1A});
  for (int k = 0; k < 50; ++k) {
    n(rng() % 3, static_cast<int>(rng() % 30)) += 1;
    const double v = objective_value(model.project(n), cfg, {Framing::k1A});
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("budget shift moves the B objective by the same constant") {
  ScenarioConfig cfg = demo();
  const auto p = synthetic(3, std::vector<double>(30, 5.0), std::vector<double>(30, 25.0));
  const double before = objective_value(p, cfg, {Framing::k1B});
  for (auto& b : *cfg.forecasts.budget) b += 0.75;
  CHECK(objective_value(p, cfg, {Framing::k1B}) == doctest::Approx(before - 0.75));
}

TEST_CASE("A and B framings of one family share constraint slacks") {
  ScenarioConfig cfg = demo();
  cfg.solver.mc_iterations = 2000;
  const UnitCurveSet curves = estimate_all_curves(cfg);
  DecisionMatrix n = zero_decision(cfg);
  for (int y = 0; y < 10; ++y) n(y % 3, y) = 3;
  const ProjectionResult p = project_portfolio(cfg, curves, n);
  for (auto [a, b] : {std::pair{Framing::k1A, Framing::k1B}, {Framing::k2A, Framing::k2B},
                      {Framing::k3A, Framing::k3B}, {Framing::k4A, Framing::k4B}}) {
    const auto ra = check_constraints(p, n, cfg, {a});
    const auto rb = check_constraints(p, n, cfg, {b});
    CHECK(ra.framing_constraint == rb.framing_constraint);
    CHECK(ra.framing_constraint_slack == rb.framing_constraint_slack);
    CHECK(ra.slack_per_phase == rb.slack_per_phase);
    CHECK(ra.slack_launches == rb.slack_launches);
    CHECK(ra.feasible == rb.feasible);
  }
}

TEST_CASE("missing forecast inputs are listed per framing") {
  ScenarioConfig cfg = demo();
  for (Framing f : kAllFramings) CHECK(missing_inputs(cfg, {f}).empty());
  cfg.forecasts.budget.reset();
  CHECK(missing_inputs(cfg, {Framing::k1A}).empty());
  CHECK(missing_inputs(cfg, {Framing::k1B}) == std::vector<std::string>{"budget"});
  CHECK(missing_inputs(cfg, {Framing::k4A}) == std::vector<std::string>{"budget"});
  cfg.forecasts.mean_revenue_target.reset();
  CHECK(missing_inputs(cfg, {Framing::k1A}) == std::vector<std::string>{"mean_revenue_target"});
}

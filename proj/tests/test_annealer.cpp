#include <cstdlib>

#include "doctest.h"
#include "pipeplan/annealer.hpp"
#include "support.hpp"

using namespace pipeplan;
using namespace testsupport;

namespace {

struct Fixture {
  ScenarioConfig cfg;
  UnitCurveSet curves;
  ProjectionModel model;
  Fixture(ScenarioConfig c) : cfg(std::move(c)), curves(estimate_all_curves(cfg)), model(cfg, curves) {}
  SearchContext ctx(Framing f) const { return {cfg, model, {f}}; }
};

ScenarioConfig demo_fast(std::int64_t iterations = 3000, int restarts = 2) {
  ScenarioConfig cfg = demo();
  cfg.solver.mc_iterations = 2000;
  cfg.solver.sa_schedule.iterations = iterations;
  cfg.solver.sa_schedule.restarts = restarts;
  return cfg;
}

ScenarioConfig vacuous() {
  ScenarioConfig cfg = bare(8, 4);
  cfg.forecasts.mean_budget = 1e9;
  cfg.solver.max_new_per_area_year = 3;
  cfg.solver.sa_schedule.iterations = 500;
  cfg.solver.sa_schedule.restarts = 2;
  return cfg;
}

}  // namespace

TEST_CASE("construct_feasible with no minima returns the empty plan") {
  const Fixture fx(vacuous());
  const DecisionMatrix n = construct_feasible(fx.ctx(Framing::k3A));
  CHECK(n.total() == 0);
}

TEST_CASE("construct_feasible finds a demo plan for 1A") {
  const Fixture fx(demo_fast());
  const auto ctx = fx.ctx(Framing::k1A);
  const DecisionMatrix n = construct_feasible(ctx);
  const auto rep = check_constraints(fx.model.project(n), n, fx.cfg, ctx.spec);
  CHECK(rep.feasible);
  for (int y = 0; y < n.years(); ++y) {
    for (std::size_t j = 0; j < n.areas(); ++j) CHECK(n(j, y) <= fx.cfg.solver.max_new_per_area_year);
  }
}

TEST_CASE("unreachable launch minimum is reported") {
  ScenarioConfig cfg = demo_fast();
  cfg.constraints.min_launches[0] = 1000;
  const Fixture fx(cfg);
  try {
    construct_feasible(fx.ctx(Framing::k1A));
    FAIL("expected infeasibility");
  } catch (const InfeasibleError& e) {
    CHECK(e.constraint() == "min_launches (area 1)");
  }
  CHECK_THROWS_AS(anneal(fx.ctx(Framing::k1A)), InfeasibleError);
}

TEST_CASE("neighbors differ in at most two cells by one project") {
  const Fixture fx(demo_fast());
  const auto ctx = fx.ctx(Framing::k1A);
  const DecisionMatrix start = construct_feasible(ctx);
  std::mt19937_64 rng(3);
  DecisionMatrix n = start;
  for (int k = 0; k < 200; ++k) {
    const DecisionMatrix next = propose_neighbor(ctx, n, rng);
    int changed = 0;
    std::int64_t moved = 0;
    for (std::size_t j = 0; j < n.areas(); ++j) {
      for (int y = 0; y < n.years(); ++y) {
        const auto d = next(j, y) - n(j, y);
        changed += d != 0;
        moved += std::llabs(d);
        CHECK(std::llabs(d) <= 1);
        CHECK(next(j, y) >= 0);
        CHECK(next(j, y) <= ctx.cap());
      }
    }
    CHECK(changed <= 2);
    CHECK(moved <= 2);
    CHECK(check_constraints(fx.model.project(next), next, fx.cfg, ctx.spec).feasible);
    n = next;
  }
}

TEST_CASE("a plan with no feasible neighbor is returned unchanged") {
  // one cell, cap 1, launch minimum forcing it to stay at 1
  ScenarioConfig cfg = bare(30, 1);
  cfg.solver.max_new_per_area_year = 1;
  cfg.forecasts.mean_budget = 1e9;
  const double q = cfg.areas[0].overall_success();
  cfg.constraints.min_launches = {0.5 * q};
  const Fixture fx(cfg);
  const auto ctx = fx.ctx(Framing::k3A);
  DecisionMatrix n = zero_decision(cfg);
  n(0, 0) = 1;
  std::mt19937_64 rng(9);
  CHECK(propose_neighbor(ctx, n, rng, 16) == n);
}

TEST_CASE("removal below a binding launch constraint is never proposed") {
  ScenarioConfig cfg = bare(30, 3);
  cfg.solver.max_new_per_area_year = 2;
  cfg.forecasts.mean_budget = 1e9;
  const double q = cfg.areas[0].overall_success();
  cfg.constraints.min_launches = {2.5 * q};
  const Fixture fx(cfg);
  const auto ctx = fx.ctx(Framing::k3A);
  DecisionMatrix n = zero_decision(cfg);
  n(0, 0) = 1;
  n(0, 1) = 1;
  n(0, 2) = 1;
  std::mt19937_64 rng(4);
  for (int k = 0; k < 100; ++k) {
    const DecisionMatrix next = propose_neighbor(ctx, n, rng);
    CHECK(next.total() >= 3);
  }
}

TEST_CASE("empty decision window keeps the baseline") {
  ScenarioConfig cfg = vacuous();
  cfg.solver.inflow_years = 0;
  const Fixture fx(cfg);
  const auto ctx = fx.ctx(Framing::k3A);
  const OptimizationResult r = anneal(ctx, {1});
  CHECK(r.best.total() == 0);
  CHECK(r.best.years() == 0);
  CHECK(r.best_value == objective_value(fx.model.baseline(), cfg, ctx.spec));
}

TEST_CASE("every held state is feasible and the best never worsens") {
  const Fixture fx(demo_fast(2000, 1));
  AnnealOptions opts;
  opts.threads = 1;
  opts.verify_states = true;
  const OptimizationResult r = anneal(fx.ctx(Framing::k1A), opts);
  REQUIRE(r.trace.size() == 2000);
  double best = r.initial_value;
  for (const auto& rec : r.trace) {
    best = std::min(best, rec.value);
  }
  CHECK(best == doctest::Approx(r.best_value).epsilon(1e-9));
  CHECK(r.best_value <= r.initial_value);
  CHECK(r.report.feasible);
}

TEST_CASE("same seed gives the same result; thread count does not matter") {
  const Fixture fx(demo_fast(2000, 3));
  const auto ctx = fx.ctx(Framing::k4A);
  const OptimizationResult a = anneal(ctx, {1});
  const OptimizationResult b = anneal(ctx, {1});
  const OptimizationResult c = anneal(ctx, {3});
  CHECK(a.best == b.best);
  CHECK(a.best_value == b.best_value);
  CHECK(a.restart_best_values == b.restart_best_values);
  CHECK(a.best == c.best);
  CHECK(a.best_value == c.best_value);
  CHECK(a.restart_best_values == c.restart_best_values);
}

TEST_CASE("multi-restart best dominates each restart") {
  const Fixture fx(demo_fast(1500, 4));
  const OptimizationResult r = anneal(fx.ctx(Framing::k1A), {2});
  REQUIRE(r.restart_best_values.size() == 4);
  for (double v : r.restart_best_values) CHECK(r.best_value <= v + 1e-12);
  CHECK(r.restart_best_values[r.best_restart] == doctest::Approx(r.best_value).epsilon(1e-9));
  for (int k = 0; k < r.best_restart; ++k) CHECK(r.restart_best_values[k] > r.restart_best_values[r.best_restart]);
}

TEST_CASE("restart seeds are distinct") {
  CHECK(restart_seed(1, 0) != restart_seed(1, 1));
  CHECK(restart_seed(1, 0) != restart_seed(2, 0));
  CHECK(restart_seed(7, 3) == restart_seed(7, 3));
}

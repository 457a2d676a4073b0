#include "pipeplan/oracle.hpp"

#include <limits>
#include <string>
#include <vector>

#include "pipeplan/parallel.hpp"

namespace pipeplan {

namespace {

DecisionMatrix decode(std::uint64_t index, std::size_t areas, int years, std::uint64_t base) {
  DecisionMatrix n(areas, years);
  const int cells = static_cast<int>(areas) * years;
  for (int c = cells - 1; c >= 0; --c) {
    n(static_cast<std::size_t>(c / years), c % years) = static_cast<std::int64_t>(index % base);
    index /= base;
  }
  return n;
}

struct BlockBest {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t index = 0;
  std::uint64_t feasible = 0;
};

}  // namespace

OracleResult exhaustive_search(const SearchContext& ctx, const TinyInstanceBounds& bounds, int threads) {
  const std::size_t areas = ctx.model.areas();
  const int years = ctx.model.inflow_years();
  const std::int64_t cap = ctx.cap();
  if (areas > bounds.max_areas || years > bounds.max_years || cap > bounds.max_per_cell) {
    throw OracleError("instance too large for exhaustive search: " + std::to_string(areas) + " areas x " +
                      std::to_string(years) + " years, cap " + std::to_string(cap));
  }
  const auto base = static_cast<std::uint64_t>(cap + 1);
  std::uint64_t total = 1;
  for (int c = 0; c < static_cast<int>(areas) * years; ++c) {
    total *= base;
    if (total > bounds.max_enumeration) throw OracleError("instance too large for exhaustive search");
  }

  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (total + kBlock - 1) / kBlock;
  std::vector<BlockBest> best(blocks);
  const int nthreads = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    BlockBest& bb = best[b];
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlock;
    const std::uint64_t hi = std::min(total, lo + kBlock);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      const DecisionMatrix n = decode(idx, areas, years, base);
      const ProjectionResult proj = ctx.model.project(n);
      if (!is_feasible(proj, n, ctx.cfg, ctx.spec)) continue;
      ++bb.feasible;
      const double v = objective_value(proj, ctx.cfg, ctx.spec);
      if (v < bb.value) {
        bb.value = v;
        bb.index = idx;
      }
    }
  }

  OracleResult out;
  out.enumerated = total;
  bool found = false;
  std::uint64_t best_index = 0;
  for (const auto& bb : best) {
    out.feasible += bb.feasible;
    if (bb.feasible > 0 && (!found || bb.value < out.value)) {
      found = true;
      out.value = bb.value;
      best_index = bb.index;
    }
  }
  if (!found) {
    const DecisionMatrix zero(areas, years);
    const auto rep = check_constraints(ctx.model.project(zero), zero, ctx.cfg, ctx.spec);
    throw InfeasibleError(rep.first_violation(ctx.cfg).empty() ? "every enumerated plan" : rep.first_violation(ctx.cfg));
  }
  out.best = decode(best_index, areas, years, base);
  return out;
}

ProjectionResult naive_projection(const ScenarioConfig& cfg, const UnitCurveSet& curves, const DecisionMatrix& n) {
  const int T = cfg.horizon();
  const int spy = curves.steps_per_year;
  const int Y = n.years();
  const std::size_t J = cfg.num_areas();

  ProjectionResult r;
  r.marketed_revenue = cfg.forecasts.marketed_revenue;
  r.current = PortfolioSeries(J, T);
  r.added = PortfolioSeries(J, T);
  r.total = PortfolioSeries(J, T);

  for (int t = 1; t <= T; ++t) {
    const int ti = t - 1;
    for (std::size_t j = 0; j < J; ++j) {
      const AreaCurves& ac = curves.areas[j];
      // M^N, E^N, Gamma^N, R^N: sum over start years tau <= t.
      for (int tau = 1; tau <= std::min(t, Y); ++tau) {
        const double c = static_cast<double>(n(j, tau - 1));
        const int node = (t - tau + 1) * spy;
        for (std::size_t i = 0; i < kNumPhases; ++i) {
          r.added.projects_per_phase[i][ti] += c * ac.fresh.phase_activity[i][node];
        }
        r.added.projects_per_area[j][ti] += c * ac.fresh.activity[node];
        for (int cell = (t - 1) * spy; cell < t * spy; ++cell) {
          const int unit_cell = cell - (tau - 1) * spy;
          r.added.cost[ti] += c * ac.fresh.cost_rate[unit_cell] / spy;
          r.added.revenue[ti] += c * ac.fresh.revenue_rate[unit_cell] / spy;
        }
      }
      // M^K, E^K, Gamma^K, R^K: sum over starting phases.
      for (std::size_t i0 = 0; i0 < kNumPhases; ++i0) {
        const double k = static_cast<double>(cfg.current_portfolio.counts[j][i0]);
        const ProjectCurves& cur = ac.current[i0];
        for (std::size_t i = 0; i < kNumPhases; ++i) {
          r.current.projects_per_phase[i][ti] += k * cur.phase_activity[i][t * spy];
        }
        r.current.projects_per_area[j][ti] += k * cur.activity[t * spy];
        for (int cell = (t - 1) * spy; cell < t * spy; ++cell) {
          r.current.cost[ti] += k * cur.cost_rate[cell] / spy;
          r.current.revenue[ti] += k * cur.revenue_rate[cell] / spy;
        }
      }
    }
  }
  if (cfg.forecasts.dev_revenue_override) r.current.revenue = *cfg.forecasts.dev_revenue_override;

  for (std::size_t j = 0; j < J; ++j) {
    const AreaCurves& ac = curves.areas[j];
    for (int tau = 1; tau <= Y; ++tau) {
      r.added.launches[j] += static_cast<double>(n(j, tau - 1)) * ac.fresh.launch_cdf[(T - tau + 1) * spy];
    }
    for (std::size_t i0 = 0; i0 < kNumPhases; ++i0) {
      r.current.launches[j] += static_cast<double>(cfg.current_portfolio.counts[j][i0]) * ac.current[i0].success;
    }
  }

  for (int ti = 0; ti < T; ++ti) {
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      r.total.projects_per_phase[i][ti] = r.current.projects_per_phase[i][ti] + r.added.projects_per_phase[i][ti];
    }
    for (std::size_t j = 0; j < J; ++j) {
      r.total.projects_per_area[j][ti] = r.current.projects_per_area[j][ti] + r.added.projects_per_area[j][ti];
    }
    r.total.cost[ti] = r.current.cost[ti] + r.added.cost[ti];
    r.total.revenue[ti] = r.marketed_revenue[ti] + r.current.revenue[ti] + r.added.revenue[ti];
  }
  for (std::size_t j = 0; j < J; ++j) r.total.launches[j] = r.current.launches[j] + r.added.launches[j];
  return r;
}

}  // namespace pipeplan

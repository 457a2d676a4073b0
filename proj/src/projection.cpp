#include "pipeplan/projection.hpp"

#include <numeric>
#include <string>

namespace pipeplan {

std::int64_t DecisionMatrix::year_total(int year_index) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < areas_; ++j) s += (*this)(j, year_index);
  return s;
}

std::int64_t DecisionMatrix::area_total(std::size_t area) const {
  std::int64_t s = 0;
  for (int y = 0; y < years_; ++y) s += (*this)(area, y);
  return s;
}

std::int64_t DecisionMatrix::total() const { return std::accumulate(cells_.begin(), cells_.end(), std::int64_t{0}); }

DecisionMatrix zero_decision(const ScenarioConfig& cfg) {
  return DecisionMatrix(cfg.num_areas(), cfg.solver.inflow_years);
}

PortfolioSeries::PortfolioSeries(std::size_t areas, int years)
    : projects_per_area(areas, std::vector<double>(years, 0.0)),
      cost(years, 0.0),
      revenue(years, 0.0),
      launches(areas, 0.0) {
  for (auto& v : projects_per_phase) v.assign(years, 0.0);
}

double integrate_cells(const std::vector<double>& rate, int steps_per_year, int cell_begin, int cell_end) {
  double s = 0.0;
  for (int k = cell_begin; k < cell_end; ++k) s += rate[k];
  return s / steps_per_year;
}

namespace {

void check_curves(const ScenarioConfig& cfg, const UnitCurveSet& curves) {
  if (curves.areas.size() != cfg.num_areas()) {
    throw ProjectionError("curve set has " + std::to_string(curves.areas.size()) + " areas, scenario has " +
                          std::to_string(cfg.num_areas()));
  }
  if (curves.horizon_years != cfg.horizon() || curves.steps_per_year != cfg.solver.steps_per_year()) {
    throw ProjectionError("curve set grid does not match scenario horizon/grid_step");
  }
}

}  // namespace

std::vector<double> internal_dev_revenue(const ScenarioConfig& cfg, const UnitCurveSet& curves) {
  check_curves(cfg, curves);
  const int T = cfg.horizon();
  const int spy = curves.steps_per_year;
  std::vector<double> out(T, 0.0);
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      const auto k = cfg.current_portfolio.counts[j][i];
      if (k == 0) continue;
      const auto& rate = curves.areas[j].current[i].revenue_rate;
      for (int t = 0; t < T; ++t) {
        out[t] += static_cast<double>(k) * integrate_cells(rate, spy, t * spy, (t + 1) * spy);
      }
    }
  }
  return out;
}

ProjectionModel::ProjectionModel(const ScenarioConfig& cfg, const UnitCurveSet& curves)
    : horizon_(cfg.horizon()), inflow_years_(cfg.solver.inflow_years) {
  check_curves(cfg, curves);
  const int T = horizon_;
  const int spy = curves.steps_per_year;
  const std::size_t J = cfg.num_areas();

  kernels_.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    const ProjectCurves& fresh = curves.areas[j].fresh;
    AreaKernel& kern = kernels_[j];
    for (auto& v : kern.phase_count) v.assign(T, 0.0);
    kern.area_count.assign(T, 0.0);
    kern.cost.assign(T, 0.0);
    kern.revenue.assign(T, 0.0);
    for (int d = 0; d < T; ++d) {
      const int node = (d + 1) * spy;
      for (std::size_t i = 0; i < kNumPhases; ++i) kern.phase_count[i][d] = fresh.phase_activity[i][node];
      kern.area_count[d] = fresh.activity[node];
      kern.cost[d] = integrate_cells(fresh.cost_rate, spy, d * spy, (d + 1) * spy);
      kern.revenue[d] = integrate_cells(fresh.revenue_rate, spy, d * spy, (d + 1) * spy);
    }
    kern.launches_by_start.assign(inflow_years_, 0.0);
    for (int y = 0; y < inflow_years_; ++y) kern.launches_by_start[y] = fresh.launch_cdf[(T - y) * spy];
  }

  ProjectionResult& b = baseline_;
  b.marketed_revenue = cfg.forecasts.marketed_revenue;
  b.current = PortfolioSeries(J, T);
  b.added = PortfolioSeries(J, T);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      const auto count = cfg.current_portfolio.counts[j][i];
      if (count == 0) continue;
      const double k = static_cast<double>(count);
      const ProjectCurves& cur = curves.areas[j].current[i];
      for (int t = 0; t < T; ++t) {
        const int node = (t + 1) * spy;
        for (std::size_t p = 0; p < kNumPhases; ++p) b.current.projects_per_phase[p][t] += k * cur.phase_activity[p][node];
        b.current.projects_per_area[j][t] += k * cur.activity[node];
        b.current.cost[t] += k * integrate_cells(cur.cost_rate, spy, t * spy, (t + 1) * spy);
      }
      b.current.launches[j] += k * cur.success;
    }
  }
  if (cfg.forecasts.dev_revenue_override) {
    b.current.revenue = *cfg.forecasts.dev_revenue_override;
  } else {
    b.current.revenue = internal_dev_revenue(cfg, curves);
  }
  b.total = b.current;
  for (int t = 0; t < T; ++t) b.total.revenue[t] = b.marketed_revenue[t] + b.current.revenue[t];
}

ProjectionResult ProjectionModel::project(const DecisionMatrix& n) const {
  if (n.areas() != kernels_.size() || n.years() != inflow_years_) {
    throw ProjectionError("decision matrix is " + std::to_string(n.areas()) + "x" + std::to_string(n.years()) +
                          ", scenario expects " + std::to_string(kernels_.size()) + "x" +
                          std::to_string(inflow_years_));
  }
  const int T = horizon_;
  const std::size_t J = kernels_.size();
  ProjectionResult r;
  r.marketed_revenue = baseline_.marketed_revenue;
  r.current = baseline_.current;
  r.added = PortfolioSeries(J, T);

  for (std::size_t j = 0; j < J; ++j) {
    const AreaKernel& kern = kernels_[j];
    for (int t = 0; t < T; ++t) {
      double cost = 0.0, revenue = 0.0, area = 0.0;
      PerPhase<double> phase{};
      const int last = std::min(t, inflow_years_ - 1);
      for (int y = 0; y <= last; ++y) {
        const auto cnt = n(j, y);
        if (cnt == 0) continue;
        const double c = static_cast<double>(cnt);
        const int lag = t - y;
        for (std::size_t i = 0; i < kNumPhases; ++i) phase[i] += c * kern.phase_count[i][lag];
        area += c * kern.area_count[lag];
        cost += c * kern.cost[lag];
        revenue += c * kern.revenue[lag];
      }
      for (std::size_t i = 0; i < kNumPhases; ++i) r.added.projects_per_phase[i][t] += phase[i];
      r.added.projects_per_area[j][t] = area;
      r.added.cost[t] += cost;
      r.added.revenue[t] += revenue;
    }
    double launches = 0.0;
    for (int y = 0; y < inflow_years_; ++y) launches += static_cast<double>(n(j, y)) * kern.launches_by_start[y];
    r.added.launches[j] = launches;
  }

  r.total = PortfolioSeries(J, T);
  for (int t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      r.total.projects_per_phase[i][t] = r.current.projects_per_phase[i][t] + r.added.projects_per_phase[i][t];
    }
    for (std::size_t j = 0; j < J; ++j) {
      r.total.projects_per_area[j][t] = r.current.projects_per_area[j][t] + r.added.projects_per_area[j][t];
    }
    r.total.cost[t] = r.current.cost[t] + r.added.cost[t];
    r.total.revenue[t] = r.marketed_revenue[t] + r.current.revenue[t] + r.added.revenue[t];
  }
  for (std::size_t j = 0; j < J; ++j) r.total.launches[j] = r.current.launches[j] + r.added.launches[j];
  return r;
}

void ProjectionModel::apply(ProjectionResult& r, std::size_t area, int year_index, std::int64_t delta) const {
  if (delta == 0) return;
  const AreaKernel& kern = kernels_[area];
  const double c = static_cast<double>(delta);
  for (int t = year_index; t < horizon_; ++t) {
    const int lag = t - year_index;
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      const double v = c * kern.phase_count[i][lag];
      r.added.projects_per_phase[i][t] += v;
      r.total.projects_per_phase[i][t] += v;
    }
    const double a = c * kern.area_count[lag];
    r.added.projects_per_area[area][t] += a;
    r.total.projects_per_area[area][t] += a;
    const double cost = c * kern.cost[lag];
    r.added.cost[t] += cost;
    r.total.cost[t] += cost;
    const double rev = c * kern.revenue[lag];
    r.added.revenue[t] += rev;
    r.total.revenue[t] += rev;
  }
  const double l = c * kern.launches_by_start[year_index];
  r.added.launches[area] += l;
  r.total.launches[area] += l;
}

ProjectionResult project_portfolio(const ScenarioConfig& cfg, const UnitCurveSet& curves, const DecisionMatrix& n) {
  return ProjectionModel(cfg, curves).project(n);
}

}  // namespace pipeplan

#pragma once

// Risk-adjusted portfolio projection by superposition of shifted unit curves.
//
// Calendar time 0 is the start of year 1. Projects decided for year y start
// at calendar time y-1. Yearly values for year t are
//   - counts (projects per phase / area): expected activity at year-end t,
//   - flows (cost, revenue): integral of the rate over (t-1, t].
// Nothing beyond the horizon T is credited.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pipeplan/phase.hpp"
#include "pipeplan/ramp.hpp"
#include "pipeplan/riskmodel.hpp"
#include "pipeplan/scenario.hpp"

namespace pipeplan {

/// N[area][year-1]: projects entering Phase 1 in `area` at the start of `year`.
class DecisionMatrix {
 public:
  DecisionMatrix() = default;
  DecisionMatrix(std::size_t areas, int years) : areas_(areas), years_(years), cells_(areas * years, 0) {}

  std::size_t areas() const { return areas_; }
  int years() const { return years_; }

  std::int64_t& operator()(std::size_t area, int year_index) { return cells_[area * years_ + year_index]; }
  std::int64_t operator()(std::size_t area, int year_index) const { return cells_[area * years_ + year_index]; }

  std::int64_t year_total(int year_index) const;
  std::int64_t area_total(std::size_t area) const;
  std::int64_t total() const;

  const std::vector<std::int64_t>& raw() const { return cells_; }

  bool operator==(const DecisionMatrix&) const = default;

 private:
  std::size_t areas_ = 0;
  int years_ = 0;
  std::vector<std::int64_t> cells_;
};

DecisionMatrix zero_decision(const ScenarioConfig& cfg);

/// Yearly series of one contribution (current portfolio, additions, or total).
struct PortfolioSeries {
  PerPhase<std::vector<double>> projects_per_phase;  // [phase][t-1]
  std::vector<std::vector<double>> projects_per_area;  // [area][t-1]
  std::vector<double> cost;      // [t-1]
  std::vector<double> revenue;   // [t-1]
  std::vector<double> launches;  // [area]

  PortfolioSeries() = default;
  PortfolioSeries(std::size_t areas, int years);
};

struct ProjectionResult {
  std::vector<double> marketed_revenue;  // R^M
  PortfolioSeries current;               // K superscript terms, revenue = R^K
  PortfolioSeries added;                 // N superscript terms
  PortfolioSeries total;                 // sums; total.revenue also includes R^M

  int years() const { return static_cast<int>(total.cost.size()); }
};

/// Yearly-aggregated unit responses: what one project started at year
/// offset zero contributes `lag` years later. Built once from the curves so
/// that every evaluation afterwards is independent of the Monte Carlo size.
struct AreaKernel {
  PerPhase<std::vector<double>> phase_count;  // [phase][lag], activity at year-end lag+1
  std::vector<double> area_count;             // [lag]
  std::vector<double> cost;                   // [lag]
  std::vector<double> revenue;                // [lag]
  std::vector<double> launches_by_start;      // [year_index], launch_cdf at T - year_index
};

class ProjectionModel {
 public:
  ProjectionModel(const ScenarioConfig& cfg, const UnitCurveSet& curves);

  std::size_t areas() const { return kernels_.size(); }
  int horizon() const { return horizon_; }
  int inflow_years() const { return inflow_years_; }

  const AreaKernel& kernel(std::size_t area) const { return kernels_[area]; }
  const ProjectionResult& baseline() const { return baseline_; }

  /// Full re-projection of a decision matrix.
  ProjectionResult project(const DecisionMatrix& n) const;

  /// Adds `delta` projects started in (area, year_index) to `result` in place.
  void apply(ProjectionResult& result, std::size_t area, int year_index, std::int64_t delta) const;

 private:
  int horizon_;
  int inflow_years_;
  std::vector<AreaKernel> kernels_;
  ProjectionResult baseline_;
};

/// R^K from the current portfolio and the shifted, renormalized curves.
std::vector<double> internal_dev_revenue(const ScenarioConfig& cfg, const UnitCurveSet& curves);

ProjectionResult project_portfolio(const ScenarioConfig& cfg, const UnitCurveSet& curves, const DecisionMatrix& n);

/// Integral of a cell-rate curve over cells [cell_begin, cell_end).
double integrate_cells(const std::vector<double>& rate, int steps_per_year, int cell_begin, int cell_end);

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pipeplan

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pipeplan/phase.hpp"

namespace pipeplan {

/// Template parameters shared by every project in one disease area.
/// Durations are medians in years, costs are medians in $Bn.
struct AreaParams {
  std::string id;
  PerPhase<double> median_duration{};
  PerPhase<double> median_cost{};
  double sigma = 0.0;
  PerPhase<double> transition_prob{};
  double ramp_up_years = 0.0;
  double peak_year_revenue = 0.0;
  double exclusivity_years = 12.0;
  double post_loe_fraction = 0.0;

  /// Probability that a freshly started project eventually launches.
  double overall_success() const;
  /// Product of transition probabilities of all phases before `p`.
  double survival_to(Phase p) const;

  bool operator==(const AreaParams&) const = default;
};

/// counts[area][phase]: projects currently in development.
struct CurrentPortfolio {
  std::vector<PerPhase<std::int64_t>> counts;

  std::int64_t at(std::size_t area, Phase p) const { return counts[area][index_of(p)]; }
  bool operator==(const CurrentPortfolio&) const = default;
};

enum class RampScope { kTotal, kPerArea };

struct BalanceConstraints {
  PerPhase<double> min_per_phase{};
  std::vector<double> min_per_area;
  std::vector<double> min_launches;
  std::int64_t max_annual_increase = 2;
  // Inflow of the year preceding year 1, the anchor of the ramp constraint.
  std::int64_t initial_inflow = 6;
  RampScope ramp_scope = RampScope::kTotal;
  int window_start = 3;
  int window_end = 20;

  bool operator==(const BalanceConstraints&) const = default;
};

/// Yearly series are indexed by year-1 and cover years 1..T.
struct Forecasts {
  std::vector<double> marketed_revenue;
  std::optional<std::vector<double>> dev_revenue_override;
  std::optional<std::vector<double>> revenue_target;
  std::optional<double> mean_revenue_target;
  std::optional<std::vector<double>> budget;
  std::optional<double> mean_budget;

  bool operator==(const Forecasts&) const = default;
};

struct AnnealSchedule {
  // <= 0 selects the self-scaling temperature.
  double initial_temp = 0.0;
  double cooling_factor = 0.95;
  std::int64_t iterations = 100000;
  std::int64_t moves_per_temp = 200;
  int restarts = 4;

  bool operator==(const AnnealSchedule&) const = default;
};

struct SolverSettings {
  int horizon_years = 30;
  int inflow_years = 30;
  double grid_step = 1.0 / 12.0;
  std::int64_t mc_iterations = 10000;
  std::uint64_t seed = 1;
  std::int64_t max_new_per_area_year = 8;
  AnnealSchedule sa_schedule;

  /// Grid points per year; 0 when grid_step does not divide one year evenly.
  int steps_per_year() const;

  bool operator==(const SolverSettings&) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::vector<AreaParams> areas;
  CurrentPortfolio current_portfolio;
  BalanceConstraints constraints;
  Forecasts forecasts;
  SolverSettings solver;

  std::size_t num_areas() const { return areas.size(); }
  int horizon() const { return solver.horizon_years; }

  bool operator==(const ScenarioConfig&) const = default;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by parse_scenario when the document parses but violates invariants.
class ValidationError : public ScenarioError {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Parses the JSON scenario document and applies defaults. No invariant checks.
ScenarioConfig parse_scenario_unchecked(std::string_view text);

/// parse_scenario_unchecked followed by validate; throws ValidationError on violations.
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario(const std::string& path);

std::vector<std::string> validate(const ScenarioConfig& cfg);

/// Canonical JSON serialization; parse_scenario_unchecked(serialize(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);

/// 64-bit FNV-1a of the canonical serialization.
std::uint64_t scenario_hash(const ScenarioConfig& cfg);

}  // namespace pipeplan

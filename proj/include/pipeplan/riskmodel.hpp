#pragma once

// Monte Carlo estimation of per-area unit curves.
//
// Durations and costs are sampled; phase success is applied analytically by
// weighting each phase with the product of the preceding transition
// probabilities. Curves live on a uniform grid of `steps_per_year` points
// per year over [0, T]:
//   - point curves (activity, launch_cdf) are sampled at nodes k = 0..K,
//   - flow curves (cost_rate, revenue_rate) hold the average rate over the
//     cell (k/spy, (k+1)/spy] for k = 0..K-1,
// with K = T * steps_per_year.

#include <cstdint>
#include <vector>

#include "pipeplan/phase.hpp"
#include "pipeplan/scenario.hpp"

namespace pipeplan {

/// Counter-based generator: one independent stream per (seed, area, realization).
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t area, std::uint64_t realization);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t state_;
};

struct ProjectRealization {
  PerPhase<double> duration{};
  PerPhase<double> cost{};
};

/// One lognormal draw per phase for duration, then one per phase for cost,
/// each with log-median ln(median) and log-scale sigma.
ProjectRealization sample_realization(const AreaParams& params, StreamRng& rng);

struct DurationSummary {
  double mean = 0.0;
  double p05 = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

/// Risk-adjusted curves of a single project, either freshly started at time
/// zero or already mid-pipeline at time zero.
struct ProjectCurves {
  PerPhase<std::vector<double>> phase_activity;  // nodes
  std::vector<double> activity;                  // nodes, sum over phases
  PerPhase<std::vector<double>> phase_cost_rate; // cells
  std::vector<double> cost_rate;                 // cells, sum over phases
  std::vector<double> launch_cdf;                // nodes, Pr(launched before t) incl. success
  std::vector<double> revenue_rate;              // cells
  double success = 0.0;                          // eventual launch probability
};

struct AreaCurves {
  std::string area_id;
  ProjectCurves fresh;
  // current[i]: a project sitting at the midpoint of phase i at time zero,
  // renormalized by the survival up to phase i.
  PerPhase<ProjectCurves> current;
  DurationSummary total_duration;
};

struct UnitCurveSet {
  int horizon_years = 0;
  int steps_per_year = 0;
  std::int64_t mc_iterations = 0;
  std::uint64_t seed = 0;
  std::vector<AreaCurves> areas;

  int cells() const { return horizon_years * steps_per_year; }
  double node_time(int k) const { return static_cast<double>(k) / steps_per_year; }
};

enum class Execution { kParallel, kSerialReference };

struct EstimateOptions {
  Execution execution = Execution::kParallel;
  int threads = 0;  // 0 = resolve_threads()
};

/// Curves for one area (fresh and all four starting phases) from a single
/// pass over mc_iterations realizations drawn from stream (seed, area_index, r).
AreaCurves estimate_area_curves(const AreaParams& params, const SolverSettings& settings,
                                std::size_t area_index, const EstimateOptions& opts = {});

ProjectCurves estimate_unit_curves(const AreaParams& params, const SolverSettings& settings,
                                   std::size_t area_index = 0, const EstimateOptions& opts = {});

ProjectCurves estimate_current_curves(const AreaParams& params, Phase starting_phase,
                                      const SolverSettings& settings, std::size_t area_index = 0,
                                      const EstimateOptions& opts = {});

UnitCurveSet estimate_all_curves(const ScenarioConfig& cfg, const EstimateOptions& opts = {});

}  // namespace pipeplan

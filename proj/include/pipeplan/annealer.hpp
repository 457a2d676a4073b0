#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipeplan/objectives.hpp"
#include "pipeplan/projection.hpp"
#include "pipeplan/scenario.hpp"

namespace pipeplan {

/// Thrown when no decision matrix satisfying every constraint can be built.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(std::string constraint)
      : std::runtime_error("no feasible plan found; first unsatisfiable constraint: " + constraint),
        constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

/// Everything a search needs; all members outlive the search.
struct SearchContext {
  const ScenarioConfig& cfg;
  const ProjectionModel& model;
  ObjectiveSpec spec;

  std::int64_t cap() const { return cfg.solver.max_new_per_area_year; }
};

struct TraceRecord {
  std::int64_t iteration = 0;
  double value = 0.0;  // current value after the step
  bool accepted = false;
};

struct OptimizationResult {
  DecisionMatrix best;
  double best_value = 0.0;
  ProjectionResult projection;
  ConstraintReport report;
  std::vector<TraceRecord> trace;  // winning restart
  AnnealSchedule settings_echo;
  std::uint64_t seed = 0;
  double initial_temp = 0.0;  // winning restart
  double initial_value = 0.0;
  int best_restart = 0;
  std::vector<double> restart_best_values;
  std::int64_t accepted_moves = 0;     // winning restart
  std::int64_t exhausted_proposals = 0;  // proposals with no feasible neighbor
};

struct AnnealOptions {
  int threads = 0;              // restarts in parallel; 0 = resolve_threads()
  bool keep_trace = true;
  bool verify_states = false;   // re-check every held state with a full projection
  int max_retries = 64;         // neighbor resampling bound
  int resync_interval = 1024;   // full re-projection cadence for the incremental state
};

/// Steepest descent on total constraint violation using single additions that
/// respect per-area caps and the ramp limit. Throws InfeasibleError.
DecisionMatrix construct_feasible(const SearchContext& ctx);

/// Random add / remove / add-and-remove neighbor that passes every
/// constraint; returns `n` unchanged after `max_retries` failed draws.
DecisionMatrix propose_neighbor(const SearchContext& ctx, const DecisionMatrix& n, std::mt19937_64& rng,
                                int max_retries = 64);

/// Multi-restart simulated annealing from construct_feasible's design.
OptimizationResult anneal(const SearchContext& ctx, const AnnealOptions& opts = {});

/// Seed of restart `r` derived from the scenario seed.
std::uint64_t restart_seed(std::uint64_t seed, int restart);

}  // namespace pipeplan

#pragma once

// Validation helpers for tiny instances: exhaustive enumeration of the
// decision lattice, and a direct double-sum projection that does not use
// ProjectionModel's yearly kernels.

#include <cstdint>
#include <stdexcept>

#include "pipeplan/annealer.hpp"
#include "pipeplan/projection.hpp"
#include "pipeplan/riskmodel.hpp"

namespace pipeplan {

struct TinyInstanceBounds {
  std::size_t max_areas = 2;
  int max_years = 4;
  std::int64_t max_per_cell = 2;
  std::uint64_t max_enumeration = 10'000'000;
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  DecisionMatrix best;
  double value = 0.0;
  std::uint64_t enumerated = 0;
  std::uint64_t feasible = 0;
};

/// Feasible minimizer of objective_value over every matrix with entries in
/// [0, cap]; ties go to the lexicographically smallest matrix (area-major).
/// Throws OracleError when the instance exceeds `bounds`, InfeasibleError
/// when no point is feasible.
OracleResult exhaustive_search(const SearchContext& ctx, const TinyInstanceBounds& bounds = {}, int threads = 0);

/// Projection evaluated straight from the unit curves, term by term.
ProjectionResult naive_projection(const ScenarioConfig& cfg, const UnitCurveSet& curves, const DecisionMatrix& n);

}  // namespace pipeplan

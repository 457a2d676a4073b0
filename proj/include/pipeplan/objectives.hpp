#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pipeplan/projection.hpp"
#include "pipeplan/scenario.hpp"

namespace pipeplan {

// Strategic framings. Family 1/2 target revenue and minimize cost, family 3/4
// cap cost and maximize revenue. A = aggregate objective, B = worst-year
// objective; a B framing keeps its A framing's constraint set.
enum class Framing { k1A, k1B, k2A, k2B, k3A, k3B, k4A, k4B };

inline constexpr Framing kAllFramings[] = {Framing::k1A, Framing::k1B, Framing::k2A, Framing::k2B,
                                           Framing::k3A, Framing::k3B, Framing::k4A, Framing::k4B};

std::string_view framing_name(Framing f);
std::optional<Framing> parse_framing(std::string_view name);

struct ObjectiveSpec {
  Framing framing = Framing::k1A;
};

/// Names of forecast inputs the framing needs but the scenario lacks.
std::vector<std::string> missing_inputs(const ScenarioConfig& cfg, const ObjectiveSpec& spec);

struct ConstraintReport {
  bool feasible = true;
  PerPhase<double> slack_per_phase{};
  std::vector<double> slack_per_area;
  std::vector<double> slack_launches;
  std::vector<double> slack_ramp;  // [year_index]
  double framing_constraint_slack = 0.0;
  std::string framing_constraint;  // e.g. "mean_revenue >= S"

  /// Name of the first negative slack in report order, empty when feasible.
  std::string first_violation(const ScenarioConfig& cfg) const;
};

ConstraintReport check_constraints(const ProjectionResult& proj, const DecisionMatrix& n, const ScenarioConfig& cfg,
                                   const ObjectiveSpec& spec);

/// Same predicate as check_constraints(...).feasible, with early exit.
bool is_feasible(const ProjectionResult& proj, const DecisionMatrix& n, const ScenarioConfig& cfg,
                 const ObjectiveSpec& spec);

/// Value to minimize; revenue-maximizing framings are negated.
double objective_value(const ProjectionResult& proj, const ScenarioConfig& cfg, const ObjectiveSpec& spec);

}  // namespace pipeplan

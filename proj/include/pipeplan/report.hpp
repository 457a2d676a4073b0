#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pipeplan/objectives.hpp"
#include "pipeplan/projection.hpp"
#include "pipeplan/scenario.hpp"

namespace pipeplan {

inline constexpr int kReportInflowYears = 10;

struct LaunchRow {
  std::string area;
  double expected = 0.0;  // L_j, current portfolio plus new starts
  double current = 0.0;   // L^K_j
  double minimum = 0.0;   // H_j
};

std::vector<LaunchRow> launch_table(const ScenarioConfig& cfg, const ProjectionResult& proj);

/// Year numbers (1-based) whose total revenue falls short of S_t.
std::vector<int> years_below_target(const ScenarioConfig& cfg, const ProjectionResult& proj);

/// Year numbers (1-based) whose cost exceeds B_t.
std::vector<int> years_over_budget(const ScenarioConfig& cfg, const ProjectionResult& proj);

struct SummaryInput {
  const ScenarioConfig& cfg;
  const ProjectionResult& proj;
  const DecisionMatrix& decision;
  std::optional<Framing> framing;
  std::optional<double> objective;
};

/// Markdown summary: launches vs minima, revenue vs target, cost vs budget,
/// and the inflow of the first ten years.
std::string summary_markdown(const SummaryInput& in);

}  // namespace pipeplan

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pipeplan/projection.hpp"
#include "pipeplan/riskmodel.hpp"
#include "pipeplan/scenario.hpp"

namespace pipeplan::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// `area,year,count` with one row per (area, year) of the decision window.
std::string decision_csv(const ScenarioConfig& cfg, const DecisionMatrix& n);

/// Inverse of decision_csv; omitted cells are zero. Throws IoError.
DecisionMatrix parse_decision_csv(std::string_view text, const ScenarioConfig& cfg);

/// One row per year 1..T with totals, targets, components and counts.
std::string projection_csv(const ScenarioConfig& cfg, const ProjectionResult& proj);

/// Long format: area, phase, t, activity, cost_rate, launch_cdf, unit_revenue.
/// phase is 1/2/3/r for per-phase rows, "all" for the fresh-project totals and
/// current_<i> for a project now at the midpoint of phase i.
std::string curves_csv(const ScenarioConfig& cfg, const UnitCurveSet& curves);

std::string serialize_curves(const UnitCurveSet& curves);
UnitCurveSet deserialize_curves(std::string_view text);

/// Cache file name keyed by a hash of the areas and the estimation settings.
std::string curves_cache_name(const ScenarioConfig& cfg);

/// Loads curves from `cache_dir` when present, otherwise estimates and stores them.
UnitCurveSet load_or_estimate_curves(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& cache_dir,
                                     bool* cache_hit = nullptr);

}  // namespace pipeplan::io

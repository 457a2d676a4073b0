#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace pipeplan {

// Clinical development phases in pipeline order.
enum class Phase : std::size_t { kPhase1 = 0, kPhase2 = 1, kPhase3 = 2, kRegistration = 3 };

inline constexpr std::size_t kNumPhases = 4;

inline constexpr std::array<Phase, kNumPhases> kAllPhases = {
    Phase::kPhase1, Phase::kPhase2, Phase::kPhase3, Phase::kRegistration};

constexpr std::size_t index_of(Phase p) { return static_cast<std::size_t>(p); }

constexpr std::string_view phase_label(Phase p) {
  switch (p) {
    case Phase::kPhase1: return "1";
    case Phase::kPhase2: return "2";
    case Phase::kPhase3: return "3";
    case Phase::kRegistration: return "r";
  }
  return "?";
}

constexpr std::string_view phase_label(std::size_t i) { return phase_label(static_cast<Phase>(i)); }

template <typename T>
using PerPhase = std::array<T, kNumPhases>;

}  // namespace pipeplan

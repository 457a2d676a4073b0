#pragma once

#include "pipeplan/scenario.hpp"

namespace pipeplan {

/// Revenue rate ($Bn/yr) of a launched product `s` years after launch:
/// linear ramp to peak over U years, plateau until loss of exclusivity,
/// then the post-LOE fraction of peak. Zero for s <= 0.
double ramp_revenue(const AreaParams& params, double s);

/// Integral of ramp_revenue over (0, s]; zero for s <= 0.
double ramp_revenue_cumulative(const AreaParams& params, double s);

/// Integral of ramp_revenue over (a, b].
inline double ramp_revenue_integral(const AreaParams& params, double a, double b) {
  return ramp_revenue_cumulative(params, b) - ramp_revenue_cumulative(params, a);
}

}  // namespace pipeplan

#include "pipeplan/ramp.hpp"

namespace pipeplan {

double ramp_revenue(const AreaParams& p, double s) {
  if (s <= 0.0) return 0.0;
  if (s <= p.ramp_up_years) return s / p.ramp_up_years * p.peak_year_revenue;
  if (s <= p.exclusivity_years) return p.peak_year_revenue;
  return p.post_loe_fraction * p.peak_year_revenue;
}

double ramp_revenue_cumulative(const AreaParams& p, double s) {
  if (s <= 0.0) return 0.0;
  const double pyr = p.peak_year_revenue;
  const double u = p.ramp_up_years;
  if (s <= u) return 0.5 * pyr * s * s / u;
  const double at_peak = 0.5 * pyr * u;
  if (s <= p.exclusivity_years) return at_peak + pyr * (s - u);
  return at_peak + pyr * (p.exclusivity_years - u) + p.post_loe_fraction * pyr * (s - p.exclusivity_years);
}

}  // namespace pipeplan

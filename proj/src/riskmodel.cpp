#include "pipeplan/riskmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "pipeplan/parallel.hpp"
#include "pipeplan/ramp.hpp"

namespace pipeplan {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Curve kinds estimated in one pass: fresh start plus one per starting phase.
constexpr std::size_t kNumKinds = 1 + kNumPhases;

struct Grid {
  int spy = 12;
  int cells = 0;  // K

  double node(long k) const { return static_cast<double>(k) / spy; }

  long first_node_after(double a) const {
    long k = std::max(0L, static_cast<long>(std::floor(a * spy)));
    while (k > 0 && node(k - 1) > a) --k;
    while (k <= cells && node(k) <= a) ++k;
    return k;
  }
  long first_node_at_or_after(double a) const {
    long k = std::max(0L, static_cast<long>(std::floor(a * spy)));
    while (k > 0 && node(k - 1) >= a) --k;
    while (k <= cells && node(k) < a) ++k;
    return k;
  }
  long last_node_at_or_before(double b) const {
    if (b < 0.0) return -1;
    long k = std::min<long>(cells, static_cast<long>(std::floor(b * spy)));
    while (k < cells && node(k + 1) <= b) ++k;
    while (k >= 0 && node(k) > b) --k;
    return k;
  }
};

struct KindAccum {
  PerPhase<std::vector<std::int64_t>> activity_diff;
  std::vector<std::int64_t> launch_diff;
  PerPhase<std::vector<double>> cost;
  std::vector<double> revenue;

  explicit KindAccum(int cells) {
    for (auto& v : activity_diff) v.assign(cells + 2, 0);
    launch_diff.assign(cells + 2, 0);
    for (auto& v : cost) v.assign(cells, 0.0);
    revenue.assign(cells, 0.0);
  }
};

struct Accum {
  std::vector<KindAccum> kinds;
  explicit Accum(int cells) : kinds(kNumKinds, KindAccum(cells)) {}
};

// weight[start][i]: probability of reaching phase i given the project is in
// phase `start`; success[start]: probability of launching from `start`.
// Formed as direct products so success[i] equals the transition-probability
// product from phase i onward exactly.
struct AreaConstants {
  std::array<PerPhase<double>, kNumPhases> weight{};
  PerPhase<double> success{};

  explicit AreaConstants(const AreaParams& p) {
    for (std::size_t start = 0; start < kNumPhases; ++start) {
      double w = 1.0;
      for (std::size_t i = 0; i < kNumPhases; ++i) {
        weight[start][i] = i < start ? 0.0 : w;
        if (i >= start) w *= p.transition_prob[i];
      }
      success[start] = w;
    }
  }
};

// Adds one realization to every kind's accumulator.
void accumulate(const AreaParams& params, const AreaConstants& ac, const Grid& g,
                const ProjectRealization& r, Accum& acc) {
  PerPhase<double> end{};
  double t = 0.0;
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    t += r.duration[i];
    end[i] = t;
  }
  const double total = end[kNumPhases - 1];

  for (std::size_t kind = 0; kind < kNumKinds; ++kind) {
    KindAccum& ka = acc.kinds[kind];
    const std::size_t start = kind == 0 ? 0 : kind - 1;
    double shift = 0.0;
    if (kind > 0) shift = (start == 0 ? 0.0 : end[start - 1]) + 0.5 * r.duration[start];

    for (std::size_t i = 0; i < kNumPhases; ++i) {
      const double a = (i == 0 ? 0.0 : end[i - 1]) - shift;
      const double b = end[i] - shift;
      if (b < 0.0) continue;
      const double weight = ac.weight[start][i];

      // The first phase is active from the start instant on.
      const long lo = (i == 0) ? g.first_node_at_or_after(a) : g.first_node_after(a);
      const long hi = g.last_node_at_or_before(b);
      if (lo <= hi) {
        ka.activity_diff[i][lo] += 1;
        ka.activity_diff[i][hi + 1] -= 1;
      }

      if (b > a) {
        const double rate = weight * r.cost[i] / r.duration[i];
        const long c_lo = std::max(0L, static_cast<long>(std::floor(a * g.spy)));
        const long c_hi = std::min<long>(g.cells - 1, static_cast<long>(std::ceil(b * g.spy)) - 1);
        auto& cost = ka.cost[i];
        for (long k = c_lo; k <= c_hi; ++k) {
          const double overlap = std::min(b, g.node(k + 1)) - std::max(a, g.node(k));
          if (overlap > 0.0) cost[k] += rate * overlap;
        }
      }
    }

    const double launch = total - shift;
    const long first = g.first_node_after(launch);
    if (first <= g.cells) {
      ka.launch_diff[first] += 1;
      ka.launch_diff[g.cells + 1] -= 1;
    }

    const double success = ac.success[start];
    const long c_lo = std::max(0L, static_cast<long>(std::floor(launch * g.spy)));
    for (long k = c_lo; k < g.cells; ++k) {
      const double v = ramp_revenue_integral(params, g.node(k) - launch, g.node(k + 1) - launch);
      ka.revenue[k] += success * v;
    }
  }
}

void merge_into(Accum& dst, const Accum& src) {
  for (std::size_t kind = 0; kind < kNumKinds; ++kind) {
    auto& d = dst.kinds[kind];
    const auto& s = src.kinds[kind];
    for (std::size_t i = 0; i < kNumPhases; ++i) {
      for (std::size_t k = 0; k < d.activity_diff[i].size(); ++k) d.activity_diff[i][k] += s.activity_diff[i][k];
      for (std::size_t k = 0; k < d.cost[i].size(); ++k) d.cost[i][k] += s.cost[i][k];
    }
    for (std::size_t k = 0; k < d.launch_diff.size(); ++k) d.launch_diff[k] += s.launch_diff[k];
    for (std::size_t k = 0; k < d.revenue.size(); ++k) d.revenue[k] += s.revenue[k];
  }
}

ProjectCurves finalize(const KindAccum& ka, const AreaConstants& ac, std::size_t kind, const Grid& g,
                       std::int64_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::size_t start = kind == 0 ? 0 : kind - 1;
  const int nodes = g.cells + 1;

  ProjectCurves pc;
  pc.success = ac.success[start];
  pc.activity.assign(nodes, 0.0);
  pc.cost_rate.assign(g.cells, 0.0);
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    const double weight = ac.weight[start][i];
    auto& act = pc.phase_activity[i];
    act.assign(nodes, 0.0);
    std::int64_t running = 0;
    for (int k = 0; k < nodes; ++k) {
      running += ka.activity_diff[i][k];
      act[k] = running == 0 ? 0.0 : weight * (static_cast<double>(running) * inv_n);
      pc.activity[k] += act[k];
    }
    auto& cr = pc.phase_cost_rate[i];
    cr.assign(g.cells, 0.0);
    for (int k = 0; k < g.cells; ++k) {
      cr[k] = ka.cost[i][k] * inv_n * g.spy;
      pc.cost_rate[k] += cr[k];
    }
  }
  pc.launch_cdf.assign(nodes, 0.0);
  std::int64_t running = 0;
  for (int k = 0; k < nodes; ++k) {
    running += ka.launch_diff[k];
    pc.launch_cdf[k] = running == 0 ? 0.0 : pc.success * (static_cast<double>(running) * inv_n);
  }
  pc.revenue_rate.assign(g.cells, 0.0);
  for (int k = 0; k < g.cells; ++k) pc.revenue_rate[k] = ka.revenue[k] * inv_n * g.spy;
  return pc;
}

DurationSummary summarize(std::vector<double> totals) {
  DurationSummary s;
  if (totals.empty()) return s;
  double sum = 0.0;
  for (double d : totals) sum += d;
  s.mean = sum / static_cast<double>(totals.size());
  std::sort(totals.begin(), totals.end());
  auto q = [&](double p) {
    const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(totals.size()))) ;
    return totals[std::min(totals.size() - 1, idx == 0 ? 0 : idx - 1)];
  };
  s.p05 = q(0.05);
  s.median = q(0.5);
  s.p95 = q(0.95);
  return s;
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t area, std::uint64_t realization) {
  std::uint64_t k = mix64(seed + kGolden);
  k = mix64(k ^ (area + 1) * kGolden);
  k = mix64(k ^ (realization + 1) * 0xD1B54A32D192ED03ULL);
  state_ = k;
}

StreamRng::result_type StreamRng::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

ProjectRealization sample_realization(const AreaParams& params, StreamRng& rng) {
  ProjectRealization r;
  if (params.sigma == 0.0) {
    r.duration = params.median_duration;
    r.cost = params.median_cost;
    return r;
  }
  std::normal_distribution<double> z(0.0, 1.0);
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    r.duration[i] = params.median_duration[i] * std::exp(params.sigma * z(rng));
  }
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    r.cost[i] = params.median_cost[i] * std::exp(params.sigma * z(rng));
  }
  return r;
}

AreaCurves estimate_area_curves(const AreaParams& params, const SolverSettings& settings,
                                std::size_t area_index, const EstimateOptions& opts) {
  Grid g;
  g.spy = settings.steps_per_year();
  g.cells = settings.horizon_years * g.spy;
  const std::int64_t n = settings.mc_iterations;

  const AreaConstants ac(params);

  std::vector<double> totals(static_cast<std::size_t>(n));
  auto draw = [&](std::int64_t r) {
    StreamRng rng(settings.seed, area_index, static_cast<std::uint64_t>(r));
    ProjectRealization real = sample_realization(params, rng);
    double total = 0.0;
    for (double d : real.duration) total += d;
    totals[static_cast<std::size_t>(r)] = total;
    return real;
  };

  Accum merged(g.cells);
  if (opts.execution == Execution::kSerialReference) {
    for (std::int64_t r = 0; r < n; ++r) accumulate(params, ac, g, draw(r), merged);
  } else {
    // Fixed chunking independent of the worker count, merged in chunk order,
    // so the result is bit-identical for any number of threads.
    const std::int64_t chunk = std::max<std::int64_t>(1024, (n + 63) / 64);
    const std::int64_t num_chunks = (n + chunk - 1) / chunk;
    std::vector<Accum> partial(static_cast<std::size_t>(num_chunks), Accum(g.cells));
    const int threads = resolve_threads(opts.threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t c = 0; c < num_chunks; ++c) {
      const std::int64_t lo = c * chunk;
      const std::int64_t hi = std::min(n, lo + chunk);
      for (std::int64_t r = lo; r < hi; ++r) accumulate(params, ac, g, draw(r), partial[c]);
    }
    for (const auto& p : partial) merge_into(merged, p);
  }

  AreaCurves out;
  out.area_id = params.id;
  out.fresh = finalize(merged.kinds[0], ac, 0, g, n);
  for (std::size_t i = 0; i < kNumPhases; ++i) out.current[i] = finalize(merged.kinds[i + 1], ac, i + 1, g, n);
  out.total_duration = summarize(std::move(totals));
  return out;
}

ProjectCurves estimate_unit_curves(const AreaParams& params, const SolverSettings& settings,
                                   std::size_t area_index, const EstimateOptions& opts) {
  return estimate_area_curves(params, settings, area_index, opts).fresh;
}

ProjectCurves estimate_current_curves(const AreaParams& params, Phase starting_phase,
                                      const SolverSettings& settings, std::size_t area_index,
                                      const EstimateOptions& opts) {
  return estimate_area_curves(params, settings, area_index, opts).current[index_of(starting_phase)];
}

UnitCurveSet estimate_all_curves(const ScenarioConfig& cfg, const EstimateOptions& opts) {
  UnitCurveSet set;
  set.horizon_years = cfg.solver.horizon_years;
  set.steps_per_year = cfg.solver.steps_per_year();
  set.mc_iterations = cfg.solver.mc_iterations;
  set.seed = cfg.solver.seed;
  set.areas.reserve(cfg.areas.size());
  for (std::size_t j = 0; j < cfg.areas.size(); ++j) {
    set.areas.push_back(estimate_area_curves(cfg.areas[j], cfg.solver, j, opts));
  }
  return set;
}

}  // namespace pipeplan

#include "pipeplan/annealer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "pipeplan/parallel.hpp"

namespace pipeplan {

namespace {

struct CellChange {
  std::size_t area = 0;
  int year = 0;
  std::int64_t delta = 0;
};

struct Move {
  int size = 0;
  std::array<CellChange, 2> changes{};
};

// Draws one add / remove / add-and-remove move inside the cell bounds.
// Returns a move of size 0 when the drawn move would leave [0, cap].
Move draw_move(const DecisionMatrix& n, std::int64_t cap, std::mt19937_64& rng) {
  const int cells = static_cast<int>(n.areas()) * n.years();
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_int_distribution<int> cell_dist(0, cells - 1);
  const int kind = kind_dist(rng);
  const int a = cell_dist(rng);
  const auto area_of = [&](int c) { return static_cast<std::size_t>(c / n.years()); };
  const auto year_of = [&](int c) { return c % n.years(); };

  Move m;
  if (kind == 0) {
    if (n(area_of(a), year_of(a)) >= cap) return m;
    m.size = 1;
    m.changes[0] = {area_of(a), year_of(a), +1};
  } else if (kind == 1) {
    if (n(area_of(a), year_of(a)) <= 0) return m;
    m.size = 1;
    m.changes[0] = {area_of(a), year_of(a), -1};
  } else {
    if (cells < 2) return m;
    int b = cell_dist(rng);
    while (b == a) b = cell_dist(rng);
    if (n(area_of(a), year_of(a)) >= cap || n(area_of(b), year_of(b)) <= 0) return m;
    m.size = 2;
    m.changes[0] = {area_of(a), year_of(a), +1};
    m.changes[1] = {area_of(b), year_of(b), -1};
  }
  return m;
}

// Decision matrix plus its incrementally maintained projection.
class Chain {
 public:
  Chain(const SearchContext& ctx, DecisionMatrix start)
      : ctx_(ctx), n_(std::move(start)), proj_(ctx.model.project(n_)), value_(objective_value(proj_, ctx.cfg, ctx.spec)) {}

  const DecisionMatrix& decision() const { return n_; }
  const ProjectionResult& projection() const { return proj_; }
  double value() const { return value_; }
  void set_value(double v) { value_ = v; }

  void apply(const Move& m, int sign) {
    for (int k = 0; k < m.size; ++k) {
      const auto& c = m.changes[k];
      n_(c.area, c.year) += sign * c.delta;
      ctx_.model.apply(proj_, c.area, c.year, sign * c.delta);
    }
  }

  bool feasible() const { return is_feasible(proj_, n_, ctx_.cfg, ctx_.spec); }
  double evaluate() const { return objective_value(proj_, ctx_.cfg, ctx_.spec); }

  void resync() {
    proj_ = ctx_.model.project(n_);
    value_ = evaluate();
  }

  /// Draws until a feasible move is applied (left applied) or retries run out.
  bool propose(std::mt19937_64& rng, int max_retries, Move& out) {
    if (n_.areas() == 0 || n_.years() == 0) return false;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
      Move m = draw_move(n_, ctx_.cap(), rng);
      if (m.size == 0) continue;
      apply(m, +1);
      if (feasible()) {
        out = m;
        return true;
      }
      apply(m, -1);
    }
    return false;
  }

 private:
  const SearchContext& ctx_;
  DecisionMatrix n_;
  ProjectionResult proj_;
  double value_;
};

// Sum of constraint shortfalls, each normalized by its threshold, over every
// constrained year. Zero iff the lower-bound and framing constraints hold.
double violation(const ProjectionResult& p, const ScenarioConfig& cfg, const ObjectiveSpec& spec) {
  const auto& c = cfg.constraints;
  const auto& f = cfg.forecasts;
  const int T = p.years();
  const int w0 = std::max(1, c.window_start) - 1;
  const int w1 = std::min(T, c.window_end);
  auto shortfall = [](double need, double have) {
    return have < need ? (need - have) / std::max(need, 1.0) : 0.0;
  };
  double v = 0.0;
  for (std::size_t i = 0; i < kNumPhases; ++i) {
    for (int t = w0; t < w1; ++t) v += shortfall(c.min_per_phase[i], p.total.projects_per_phase[i][t]);
  }
  for (std::size_t j = 0; j < cfg.num_areas(); ++j) {
    for (int t = w0; t < w1; ++t) v += shortfall(c.min_per_area[j], p.total.projects_per_area[j][t]);
    v += shortfall(c.min_launches[j], p.total.launches[j]);
  }
  const auto& R = p.total.revenue;
  const auto& G = p.total.cost;
  double mean_r = 0.0, mean_g = 0.0;
  for (int t = 0; t < T; ++t) {
    mean_r += R[t];
    mean_g += G[t];
  }
  mean_r /= T;
  mean_g /= T;
  switch (spec.framing) {
    case Framing::k1A:
    case Framing::k1B: v += shortfall(*f.mean_revenue_target, mean_r); break;
    case Framing::k2A:
    case Framing::k2B:
      for (int t = 0; t < T; ++t) v += shortfall((*f.revenue_target)[t], R[t]);
      break;
    case Framing::k3A:
    case Framing::k3B: v += shortfall(mean_g, *f.mean_budget); break;
    case Framing::k4A:
    case Framing::k4B:
      for (int t = 0; t < T; ++t) v += shortfall(G[t], (*f.budget)[t]);
      break;
  }
  return v;
}

bool ramp_allows_add(const DecisionMatrix& n, const BalanceConstraints& c, std::size_t area, int y) {
  if (c.ramp_scope == RampScope::kTotal) {
    const std::int64_t prev = y == 0 ? c.initial_inflow : n.year_total(y - 1);
    return n.year_total(y) + 1 <= prev + c.max_annual_increase;
  }
  const std::int64_t prev = y == 0 ? c.initial_inflow : n(area, y - 1);
  return n(area, y) + 1 <= prev + c.max_annual_increase;
}

void require_inputs(const SearchContext& ctx) {
  const auto missing = missing_inputs(ctx.cfg, ctx.spec);
  if (!missing.empty()) {
    std::string msg = "framing " + std::string(framing_name(ctx.spec.framing)) + " needs forecasts:";
    for (const auto& m : missing) msg += " " + m;
    throw std::invalid_argument(msg);
  }
}

struct ChainOutcome {
  DecisionMatrix best;
  double best_value = 0.0;
  double initial_temp = 0.0;
  double initial_value = 0.0;
  std::int64_t accepted = 0;
  std::int64_t exhausted = 0;
  std::vector<TraceRecord> trace;
};

void verify_state(const SearchContext& ctx, const DecisionMatrix& n) {
  const auto rep = check_constraints(ctx.model.project(n), n, ctx.cfg, ctx.spec);
  if (!rep.feasible) throw std::logic_error("annealer held an infeasible state: " + rep.first_violation(ctx.cfg));
}

double initial_temperature(Chain& chain, std::mt19937_64& rng, int max_retries) {
  std::vector<double> values;
  values.reserve(100);
  Move m;
  for (int s = 0; s < 100; ++s) {
    if (!chain.propose(rng, max_retries, m)) continue;
    values.push_back(chain.evaluate());
    chain.apply(m, -1);
  }
  chain.resync();
  if (values.size() < 2) return 1.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(values.size()));
  return sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
}

ChainOutcome run_chain(const SearchContext& ctx, const DecisionMatrix& start, std::uint64_t seed,
                       const AnnealOptions& opts) {
  const AnnealSchedule& sched = ctx.cfg.solver.sa_schedule;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Chain chain(ctx, start);
  ChainOutcome out;
  out.initial_value = chain.value();
  out.best = chain.decision();
  out.best_value = chain.value();
  out.initial_temp = sched.initial_temp > 0.0 ? sched.initial_temp : initial_temperature(chain, rng, opts.max_retries);
  if (opts.keep_trace) out.trace.reserve(static_cast<std::size_t>(sched.iterations));

  double temp = out.initial_temp;
  Move m;
  for (std::int64_t it = 0; it < sched.iterations; ++it) {
    if (it > 0 && it % sched.moves_per_temp == 0) temp *= sched.cooling_factor;
    if (opts.resync_interval > 0 && it > 0 && it % opts.resync_interval == 0) chain.resync();

    bool accepted = false;
    if (chain.propose(rng, opts.max_retries, m)) {
      const double cand = chain.evaluate();
      const double delta = cand - chain.value();
      accepted = delta <= 0.0 || unit(rng) < std::exp(-delta / temp);
      if (accepted) {
        chain.set_value(cand);
        ++out.accepted;
        if (opts.verify_states) verify_state(ctx, chain.decision());
        if (cand < out.best_value) {
          out.best_value = cand;
          out.best = chain.decision();
        }
      } else {
        chain.apply(m, -1);
      }
    } else {
      ++out.exhausted;
    }
    if (opts.keep_trace) out.trace.push_back({it, chain.value(), accepted});
  }
  return out;
}

}  // namespace

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DecisionMatrix construct_feasible(const SearchContext& ctx) {
  require_inputs(ctx);
  const auto& cfg = ctx.cfg;
  DecisionMatrix n = zero_decision(cfg);
  ProjectionResult proj = ctx.model.project(n);

  const auto fail = [&] {
    const auto rep = check_constraints(ctx.model.project(n), n, cfg, ctx.spec);
    throw InfeasibleError(rep.first_violation(cfg));
  };

  while (!is_feasible(proj, n, cfg, ctx.spec)) {
    const double current = violation(proj, cfg, ctx.spec);
    double best = current;
    std::size_t best_area = 0;
    int best_year = -1;
    for (int y = 0; y < n.years(); ++y) {
      for (std::size_t j = 0; j < n.areas(); ++j) {
        if (n(j, y) >= ctx.cap() || !ramp_allows_add(n, cfg.constraints, j, y)) continue;
        ctx.model.apply(proj, j, y, +1);
        const double v = violation(proj, cfg, ctx.spec);
        ctx.model.apply(proj, j, y, -1);
        if (v < best - 1e-12) {
          best = v;
          best_area = j;
          best_year = y;
        }
      }
    }
    if (best_year < 0) fail();
    n(best_area, best_year) += 1;
    proj = ctx.model.project(n);
  }
  return n;
}

DecisionMatrix propose_neighbor(const SearchContext& ctx, const DecisionMatrix& n, std::mt19937_64& rng,
                                int max_retries) {
  Chain chain(ctx, n);
  Move m;
  if (!chain.propose(rng, max_retries, m)) return n;
  return chain.decision();
}

OptimizationResult anneal(const SearchContext& ctx, const AnnealOptions& opts) {
  require_inputs(ctx);
  const DecisionMatrix start = construct_feasible(ctx);
  const AnnealSchedule& sched = ctx.cfg.solver.sa_schedule;
  const int restarts = std::max(1, sched.restarts);

  std::vector<ChainOutcome> outcomes(restarts);
  const int threads = std::min(resolve_threads(opts.threads), restarts);
#pragma omp parallel for schedule(static, 1) num_threads(threads)
  for (int r = 0; r < restarts; ++r) {
    outcomes[r] = run_chain(ctx, start, restart_seed(ctx.cfg.solver.seed, r), opts);
  }

  int winner = 0;
  for (int r = 1; r < restarts; ++r) {
    if (outcomes[r].best_value < outcomes[winner].best_value) winner = r;
  }

  OptimizationResult res;
  ChainOutcome& w = outcomes[winner];
  res.best = std::move(w.best);
  res.projection = ctx.model.project(res.best);
  res.best_value = objective_value(res.projection, ctx.cfg, ctx.spec);
  res.report = check_constraints(res.projection, res.best, ctx.cfg, ctx.spec);
  res.trace = std::move(w.trace);
  res.settings_echo = sched;
  res.seed = ctx.cfg.solver.seed;
  res.initial_temp = w.initial_temp;
  res.initial_value = w.initial_value;
  res.best_restart = winner;
  res.accepted_moves = w.accepted;
  res.exhausted_proposals = w.exhausted;
  for (const auto& o : outcomes) res.restart_best_values.push_back(o.best_value);
  return res;
}

}  // namespace pipeplan

#pragma once

#include "fconn/error.hpp"
#include "fconn/greedy.hpp"
#include "fconn/parallel.hpp"

#include <cmath>
#include <limits>

namespace fconn::detail {

struct Score {
  double value = 0.0;
  bool converged = true;
};

inline void check_config(const SparseSymGraph& a, const GreedyConfig& cfg) {
  if (cfg.budget < 1) throw ValidationError("budget k must be at least 1");
  if (cfg.q < 1) throw ValidationError("search size q must be at least 1");
  const bool del = is_deletion_strategy(cfg.strategy);
  if (del != (cfg.mode == GreedyMode::Break))
    throw ValidationError(del ? "deletion strategy used with make mode"
                              : "addition strategy used with break mode");
  if (cfg.mode == GreedyMode::Break && a.edge_count() < cfg.budget)
    throw ValidationError("break needs at least k = " + std::to_string(cfg.budget) +
                          " edges, graph has " + std::to_string(a.edge_count()));
}

/// Algorithm-1 loop. `score(current, pair, delta)` evaluates one candidate
/// (called concurrently); `accept(pair, delta)` runs after each step.
template <class ScoreFn, class AcceptFn>
ModificationPlan run_greedy(const SparseSymGraph& a, const GreedyConfig& cfg,
                            const CentralityRanking& r, ScoreFn&& score,
                            AcceptFn&& accept) {
  check_config(a, cfg);
  ModificationPlan plan;
  plan.mode = cfg.mode;
  plan.nodes = a.nodes();
  const bool brk = cfg.mode == GreedyMode::Break;
  const unsigned threads = worker_count(cfg.threads);

  SearchSpaceSelector selector(a, r, cfg.strategy, cfg.q);
  SearchSpaceState state;
  state.strategy = cfg.strategy;
  state.q = cfg.q;
  SparseSymGraph current = a;

  for (std::size_t step = 1; step <= cfg.budget; ++step) {
    state.step = step;
    const std::vector<NodePair> space = selector.next(state, current);
    if (space.empty()) {
      plan.exhausted = true;
      break;
    }
    std::vector<double> deltas(space.size());
    for (std::size_t c = 0; c < space.size(); ++c)
      deltas[c] = brk ? -current.weight(space[c].u, space[c].v) : 1.0;

    std::vector<Score> scores(space.size());
    parallel_for(space.size(), threads, [&](std::size_t c) {
      scores[c] = score(current, space[c], deltas[c]);
    });
    plan.evaluations += space.size();

    // Ordered reduction; strict comparison keeps the earliest tie.
    std::size_t best = 0;
    for (std::size_t c = 0; c < space.size(); ++c) {
      if (!scores[c].converged) ++plan.unconverged;
      if (c == 0) continue;
      const bool better = brk ? scores[c].value < scores[best].value
                              : scores[c].value > scores[best].value;
      if (better) best = c;
    }

    const NodePair p = space[best];
    plan.edges.push_back({p, deltas[best], scores[best].value});
    plan.total += scores[best].value;
    state.chosen.insert(p);
    const Edge change{p.u, p.v, deltas[best]};
    current = current.with_changes(std::span<const Edge>(&change, 1));
    accept(current, p, deltas[best]);
  }
  return plan;
}

}  // namespace fconn::detail

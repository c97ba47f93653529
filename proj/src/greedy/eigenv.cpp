#include "loop.hpp"

namespace fconn {

ModificationPlan eigenv_baseline(const SparseSymGraph& a, std::size_t k, GreedyMode mode,
                                 const ScalarFunction& f, const KrylovOptions& opt,
                                 const CentralityRanking& r) {
  if (k < 1) throw ValidationError("budget k must be at least 1");
  const bool brk = mode == GreedyMode::Break;
  if (brk && a.edge_count() < k)
    throw ValidationError("break needs at least k = " + std::to_string(k) +
                          " edges, graph has " + std::to_string(a.edge_count()));
  const CentralityRanking prod = r.with_ordering(EdgeOrdering::Product);
  const std::vector<NodePair> picks =
      brk ? top_existing_pairs(a, prod, k) : top_missing_pairs(a, prod, k);

  ModificationPlan plan;
  plan.mode = mode;
  plan.nodes = a.nodes();
  plan.exhausted = picks.size() < k;
  SparseSymGraph current = a;
  for (const NodePair& p : picks) {
    const double delta = brk ? -current.weight(p.u, p.v) : 1.0;
    const TraceUpdate t = trace_fun_update(
        current.adjacency(), LowRankUpdate::edge(a.nodes(), p.u, p.v, delta), f, opt);
    plan.edges.push_back({p, delta, t.delta});
    plan.total += t.delta;
    ++plan.evaluations;
    if (!t.converged) ++plan.unconverged;
    const Edge change{p.u, p.v, delta};
    current = current.with_changes(std::span<const Edge>(&change, 1));
  }
  return plan;
}

ModificationPlan eigenv_baseline(const SparseSymGraph& a, std::size_t k, GreedyMode mode,
                                 const ScalarFunction& f, const KrylovOptions& opt) {
  return eigenv_baseline(a, k, mode, f, opt, eigenvector_centrality(a));
}

}  // namespace fconn

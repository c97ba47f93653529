#include "loop.hpp"

namespace fconn {

Strategy default_strategy(GreedyMode mode, bool miobi) {
  if (mode == GreedyMode::Break) return miobi ? Strategy::DgFull : Strategy::Dg2;
  return miobi ? Strategy::Ad3 : Strategy::Ad2;
}

std::vector<LowRankUpdate> ModificationPlan::updates() const {
  std::vector<LowRankUpdate> out;
  out.reserve(edges.size());
  for (const PlannedEdge& e : edges)
    out.push_back(LowRankUpdate::edge(nodes, e.pair.u, e.pair.v, e.delta));
  return out;
}

LowRankUpdate ModificationPlan::cumulative() const {
  std::vector<Edge> changes;
  for (const PlannedEdge& e : edges) changes.push_back({e.pair.u, e.pair.v, e.delta});
  return LowRankUpdate::from_edges(nodes, changes);
}

SparseSymGraph ModificationPlan::apply(const SparseSymGraph& g) const {
  std::vector<Edge> changes;
  for (const PlannedEdge& e : edges) changes.push_back({e.pair.u, e.pair.v, e.delta});
  return g.with_changes(changes);
}

ModificationPlan greedy_krylov(const SparseSymGraph& a, const GreedyConfig& cfg,
                               const ScalarFunction& f, const CentralityRanking& r) {
  auto score = [&](const SparseSymGraph& current, NodePair p, double delta) {
    const LowRankUpdate x = LowRankUpdate::edge(current.nodes(), p.u, p.v, delta);
    const TraceUpdate t = trace_fun_update(current.adjacency(), x, f, cfg.krylov);
    return detail::Score{t.delta, t.converged};
  };
  auto accept = [](const SparseSymGraph&, NodePair, double) {};
  return detail::run_greedy(a, cfg, r, score, accept);
}

ModificationPlan greedy_krylov(const SparseSymGraph& a, const GreedyConfig& cfg,
                               const ScalarFunction& f) {
  detail::check_config(a, cfg);
  return greedy_krylov(a, cfg, f, eigenvector_centrality(a));
}

}  // namespace fconn

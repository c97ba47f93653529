#include "fconn/error.hpp"
#include "fconn/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace fconn {

namespace {

struct Key {
  double first;
  double second;

  friend auto operator<=>(const Key&, const Key&) = default;
};

Key key_of(NodePair p, const CentralityRanking& r) {
  const double a = r.scores(p.u);
  const double b = r.scores(p.v);
  if (r.ordering == EdgeOrdering::Product) return {a * b, 0.0};
  return {std::min(a, b), std::max(a, b)};
}

std::vector<NodePair> sorted_by_rank(std::vector<NodePair> pairs,
                                     const CentralityRanking& r) {
  std::stable_sort(pairs.begin(), pairs.end(), [&](NodePair a, NodePair b) {
    return ranks_before(a, b, r);
  });
  return pairs;
}

std::vector<NodePair> edge_pairs(const SparseSymGraph& g) {
  std::vector<NodePair> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) out.push_back(e.pair());
  return out;
}

}  // namespace

std::weak_ordering compare_edges(NodePair a, NodePair b,
                                 const CentralityRanking& r) {
  const Key ka = key_of(a, r);
  const Key kb = key_of(b, r);
  if (ka < kb) return std::weak_ordering::less;
  if (kb < ka) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

bool ranks_before(NodePair a, NodePair b, const CentralityRanking& r) {
  const auto c = compare_edges(a, b, r);
  if (c != 0) return c > 0;
  return a < b;
}

std::vector<NodePair> top_existing_pairs(const SparseSymGraph& g,
                                         const CentralityRanking& r,
                                         std::size_t count) {
  auto ranked = sorted_by_rank(edge_pairs(g), r);
  if (ranked.size() > count) ranked.resize(count);
  return ranked;
}

std::vector<NodePair> top_missing_pairs(const SparseSymGraph& g,
                                        const CentralityRanking& r,
                                        std::size_t count) {
  const Node n = g.nodes();
  if (count == 0 || n < 2) return {};

  // Node positions sorted by decreasing score. Both orderings are monotone
  // in each endpoint score, so a pair at positions (a, b), a < b, never
  // outranks (a', b') with a' ≤ a, b' ≤ b by key.
  std::vector<Node> pos(static_cast<std::size_t>(n));
  std::iota(pos.begin(), pos.end(), Node{0});
  std::stable_sort(pos.begin(), pos.end(), [&](Node a, Node b) {
    return r.scores(a) > r.scores(b);
  });

  using Cell = std::pair<Node, Node>;  // positions, first < second
  auto pair_at = [&](const Cell& c) {
    return NodePair(pos[static_cast<std::size_t>(c.first)],
                    pos[static_cast<std::size_t>(c.second)]);
  };
  auto worse = [&](const Cell& x, const Cell& y) {
    return ranks_before(pair_at(y), pair_at(x), r);
  };
  std::priority_queue<Cell, std::vector<Cell>, decltype(worse)> heap(worse);
  std::set<Cell> visited;
  auto push = [&](Node a, Node b) {
    if (a >= b || b >= n) return;
    if (visited.insert({a, b}).second) heap.push({a, b});
  };
  push(0, 1);

  std::vector<NodePair> found;
  bool have_threshold = false;
  Key threshold{0.0, 0.0};
  while (!heap.empty()) {
    const Cell c = heap.top();
    const NodePair p = pair_at(c);
    const Key k = key_of(p, r);
    // Once `count` pairs are collected, keep draining pairs tied with the
    // last one so index tie-breaks are resolved over the whole tie class.
    if (have_threshold && k < threshold) break;
    heap.pop();
    if (!g.has_edge(p)) {
      found.push_back(p);
      if (!have_threshold && found.size() >= count) {
        have_threshold = true;
        threshold = k;
      }
    }
    push(c.first, c.second + 1);
    push(c.first + 1, c.second);
  }
  found = sorted_by_rank(std::move(found), r);
  if (found.size() > count) found.resize(count);
  return found;
}

bool is_deletion_strategy(Strategy s) {
  return s == Strategy::DgFull || s == Strategy::Dg1 || s == Strategy::Dg2;
}

EdgeOrdering ordering_for(Strategy s) {
  return (s == Strategy::Dg1 || s == Strategy::Ad1) ? EdgeOrdering::Product
                                                    : EdgeOrdering::MinMax;
}

std::vector<Node> largest_degree_nodes(const SparseSymGraph& g) {
  const auto deg = g.degrees();
  const Node d = g.max_degree();
  std::vector<Node> order(deg.size());
  std::iota(order.begin(), order.end(), Node{0});
  std::sort(order.begin(), order.end(), [&](Node a, Node b) {
    const auto da = deg[static_cast<std::size_t>(a)];
    const auto db = deg[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return a > b;
  });
  order.resize(static_cast<std::size_t>(std::min<Node>(d, g.nodes())));
  std::sort(order.begin(), order.end());
  return order;
}

namespace {

std::vector<NodePair> degree_space(const SparseSymGraph& current,
                                   const std::set<NodePair>& chosen) {
  const auto vd = largest_degree_nodes(current);
  std::vector<NodePair> out;
  for (std::size_t a = 0; a < vd.size(); ++a)
    for (std::size_t b = a + 1; b < vd.size(); ++b) {
      const NodePair p(vd[a], vd[b]);
      if (!current.has_edge(p) && !chosen.contains(p)) out.push_back(p);
    }
  return out;
}

std::vector<NodePair> minus_chosen(const std::vector<NodePair>& ranked,
                                   std::size_t limit,
                                   const std::set<NodePair>& chosen) {
  std::vector<NodePair> out;
  const std::size_t upto = std::min(limit, ranked.size());
  for (std::size_t k = 0; k < upto; ++k)
    if (!chosen.contains(ranked[k])) out.push_back(ranked[k]);
  return out;
}

}  // namespace

std::vector<NodePair> select_search_space(const SparseSymGraph& g,
                                          const SearchSpaceState& s,
                                          const CentralityRanking& r) {
  SearchSpaceSelector sel(g, r, s.strategy, s.q);
  return sel.next(s, g);
}

SearchSpaceSelector::SearchSpaceSelector(const SparseSymGraph& initial,
                                         CentralityRanking ranking,
                                         Strategy strategy, std::size_t q)
    : initial_(initial),
      ranking_(ranking.with_ordering(ordering_for(strategy))),
      strategy_(strategy),
      q_(q) {
  if (q_ < 1) throw ValidationError("search size q must be at least 1");
  if (ranking_.scores.size() != initial_.nodes())
    throw ValidationError("ranking size does not match the graph");
  if (strategy_ == Strategy::DgFull) {
    ranked_ = edge_pairs(initial_);
  } else if (strategy_ == Strategy::Dg1 || strategy_ == Strategy::Dg2) {
    ranked_ = sorted_by_rank(edge_pairs(initial_), ranking_);
  }
}

std::vector<NodePair> SearchSpaceSelector::next(const SearchSpaceState& state,
                                                const SparseSymGraph& current) {
  const std::size_t step = std::max<std::size_t>(state.step, 1);
  const std::size_t limit = q_ + step - 1;
  switch (strategy_) {
    case Strategy::DgFull:
      return minus_chosen(ranked_, ranked_.size(), state.chosen);
    case Strategy::Dg1:
    case Strategy::Dg2:
      return minus_chosen(ranked_, limit, state.chosen);
    case Strategy::Ad1:
    case Strategy::Ad2: {
      // Chosen pairs never belong to the initial edge set, so we need at
      // most `limit` missing pairs of the initial graph.
      if (fetched_ < limit) {
        fetched_ = limit + q_;
        ranked_ = top_missing_pairs(initial_, ranking_, fetched_);
      }
      return minus_chosen(ranked_, limit, state.chosen);
    }
    case Strategy::Ad3:
      return degree_space(current, state.chosen);
  }
  return {};
}

}  // namespace fconn

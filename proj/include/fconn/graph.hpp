#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <compare>
#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <vector>

namespace fconn {

using Node = Eigen::Index;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Unordered node pair stored canonically with `u < v`.
struct NodePair {
  Node u = 0;
  Node v = 0;

  NodePair() = default;
  NodePair(Node a, Node b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Weighted edge, `i < j` after canonicalization.
struct Edge {
  Node i = 0;
  Node j = 0;
  double w = 1.0;

  NodePair pair() const { return {i, j}; }
};

/// Immutable undirected graph with a symmetric nonnegative adjacency matrix.
///
/// The edge list is sorted by (i, j). The adjacency matrix stores both
/// triangles so that products with it cost O(nnz).
class SparseSymGraph {
 public:
  SparseSymGraph() = default;

  /// Builds the graph from edges given in either orientation. Throws
  /// ValidationError on self-loops, non-positive weights, duplicate pairs or
  /// out-of-range indices.
  SparseSymGraph(Node n, std::vector<Edge> edges);

  Node nodes() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const SparseMatrix& adjacency() const { return adjacency_; }

  double weight(Node i, Node j) const;
  bool has_edge(Node i, Node j) const { return weight(i, j) != 0.0; }
  bool has_edge(NodePair p) const { return has_edge(p.u, p.v); }

  /// Number of neighbours of each node.
  std::vector<Node> degrees() const;
  Node max_degree() const;

  /// Max absolute column sum of the adjacency matrix.
  double norm1() const { return norm1_; }

  /// Graph with `delta` added to the weight of each listed pair. Pairs whose
  /// resulting weight is not positive (within 1e-14 relative) are removed.
  SparseSymGraph with_changes(std::span<const Edge> delta) const;

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(adjacency_); }

 private:
  Node n_ = 0;
  std::vector<Edge> edges_;
  SparseMatrix adjacency_;
  double norm1_ = 0.0;
};

/// Symmetric sparse matrix with entries (i,j) and (j,i) set to w for every
/// edge. Weights may be of either sign; repeated pairs are summed.
SparseMatrix symmetric_matrix(Node n, std::span<const Edge> edges);

// ---------------------------------------------------------------------------
// File I/O

enum class GraphFormat { Auto, EdgeList, MatrixMarket };

/// Reads a graph. Edge lists are whitespace separated with 1-based indices
/// and an optional weight column; lines starting with '%' or '#' are
/// comments, except `% nodes <n>` which fixes the node count. Matrix Market
/// files must be `coordinate` with field pattern/real/integer and symmetry
/// symmetric/general.
SparseSymGraph load_graph(const std::filesystem::path& path,
                          GraphFormat format = GraphFormat::Auto);

/// Writes a 1-based edge list with 17 significant digits per weight.
void save_edge_list(const SparseSymGraph& g, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Centrality and edge rankings

/// ≤₁ compares products of endpoint scores; ≤₂ compares the smaller endpoint
/// score first and the larger one second.
enum class EdgeOrdering { Product, MinMax };

struct CentralityRanking {
  Eigen::VectorXd scores;
  double eigenvalue = 0.0;
  EdgeOrdering ordering = EdgeOrdering::Product;

  CentralityRanking with_ordering(EdgeOrdering o) const {
    CentralityRanking r = *this;
    r.ordering = o;
    return r;
  }
};

/// Perron eigenvector of the adjacency matrix, nonnegative with unit 2-norm.
/// Satisfies ‖Ax − λx‖₂ ≤ tol·λ on return; throws ConvergenceError otherwise.
/// `max_iter == 0` selects 10·n matrix-vector products (at least 100).
CentralityRanking eigenvector_centrality(const SparseSymGraph& g,
                                         double tol = 1e-8,
                                         std::size_t max_iter = 0);

/// Orders two pairs by their ranking key only (no index tie-break).
std::weak_ordering compare_edges(NodePair a, NodePair b,
                                 const CentralityRanking& r);

/// Strict total order used for every top-q selection: larger key first,
/// ties broken by (min index, max index) ascending.
bool ranks_before(NodePair a, NodePair b, const CentralityRanking& r);

/// The `count` highest-ranked existing edges, best first.
std::vector<NodePair> top_existing_pairs(const SparseSymGraph& g,
                                         const CentralityRanking& r,
                                         std::size_t count);

/// The `count` highest-ranked non-adjacent pairs, best first. Enumerates
/// pairs in decreasing key order with a heap over node positions instead of
/// scanning all n² pairs.
std::vector<NodePair> top_missing_pairs(const SparseSymGraph& g,
                                        const CentralityRanking& r,
                                        std::size_t count);

// ---------------------------------------------------------------------------
// Search spaces for the greedy schemes

enum class Strategy { DgFull, Dg1, Dg2, Ad1, Ad2, Ad3 };

bool is_deletion_strategy(Strategy s);
EdgeOrdering ordering_for(Strategy s);

struct SearchSpaceState {
  Strategy strategy = Strategy::DgFull;
  std::size_t q = 1;
  std::set<NodePair> chosen;
  /// 1-based greedy step; step j selects from the top q + j − 1 pairs.
  std::size_t step = 1;
};

/// Search space of one greedy step. `g` is the initial graph for DG_*,
/// AD_1, AD_2 and the current graph for AD_3 (whose degree set is
/// recomputed). An empty result means the space is exhausted.
std::vector<NodePair> select_search_space(const SparseSymGraph& g,
                                          const SearchSpaceState& s,
                                          const CentralityRanking& r);

/// Incremental form of select_search_space: rankings over the initial graph
/// are computed once and reused at every step.
class SearchSpaceSelector {
 public:
  SearchSpaceSelector(const SparseSymGraph& initial, CentralityRanking ranking,
                      Strategy strategy, std::size_t q);

  std::vector<NodePair> next(const SearchSpaceState& state,
                             const SparseSymGraph& current);

 private:
  SparseSymGraph initial_;
  CentralityRanking ranking_;
  Strategy strategy_;
  std::size_t q_;
  std::vector<NodePair> ranked_;
  std::size_t fetched_ = 0;
};

/// The d nodes of largest degree, d being the maximum degree. Ties in degree
/// prefer the higher node index. Returned in ascending index order.
std::vector<Node> largest_degree_nodes(const SparseSymGraph& g);

}  // namespace fconn

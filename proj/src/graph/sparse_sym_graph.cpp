#include "fconn/graph.hpp"

#include "fconn/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace fconn {

namespace {

std::string pair_text(Node i, Node j) {
  return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

}  // namespace

SparseMatrix symmetric_matrix(Node n, std::span<const Edge> edges) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    triplets.emplace_back(e.i, e.j, e.w);
    if (e.i != e.j) triplets.emplace_back(e.j, e.i, e.w);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

SparseSymGraph::SparseSymGraph(Node n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw ValidationError("negative node count");
  for (Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw ValidationError("edge " + pair_text(e.i, e.j) +
                            " out of range for " + std::to_string(n) +
                            " nodes");
    if (e.i == e.j)
      throw ValidationError("self-loop at node " + std::to_string(e.i + 1));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw ValidationError("edge " + pair_text(e.i, e.j) +
                            " has non-positive weight " + std::to_string(e.w));
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.pair() < b.pair();
  });
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (edges[k].pair() == edges[k - 1].pair())
      throw ValidationError("duplicate edge " +
                            pair_text(edges[k].i, edges[k].j));
  edges_ = std::move(edges);
  adjacency_ = symmetric_matrix(n_, edges_);

  norm1_ = 0.0;
  for (Node c = 0; c < adjacency_.outerSize(); ++c) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(adjacency_, c); it; ++it)
      sum += std::abs(it.value());
    norm1_ = std::max(norm1_, sum);
  }
}

double SparseSymGraph::weight(Node i, Node j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) return 0.0;
  return adjacency_.coeff(i, j);
}

std::vector<Node> SparseSymGraph::degrees() const {
  std::vector<Node> deg(static_cast<std::size_t>(n_), 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.i)];
    ++deg[static_cast<std::size_t>(e.j)];
  }
  return deg;
}

Node SparseSymGraph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

SparseSymGraph SparseSymGraph::with_changes(std::span<const Edge> delta) const {
  std::map<NodePair, double> weights;
  for (const Edge& e : edges_) weights.emplace(e.pair(), e.w);
  for (const Edge& d : delta) {
    if (d.i == d.j) throw ValidationError("self-loop in graph update");
    weights[NodePair(d.i, d.j)] += d.w;
  }
  std::vector<Edge> out;
  out.reserve(weights.size());
  for (const auto& [p, w] : weights) {
    const double original = weight(p.u, p.v);
    const double scale = std::max(1.0, std::abs(original));
    if (w > 1e-14 * scale) out.push_back({p.u, p.v, w});
  }
  return SparseSymGraph(n_, std::move(out));
}

}  // namespace fconn

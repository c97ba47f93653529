#include "fconn/error.hpp"
#include "fconn/weighted.hpp"

#include <cmath>
#include <string>

namespace fconn {

KrylovOptions WeightedProblem::default_krylov() {
  KrylovOptions opt;
  opt.tol = 1e-8;
  opt.trace_mode = Orthogonalization::Full;
  return opt;
}

WeightedProblem::WeightedProblem(SparseSymGraph graph, std::vector<NodePair> f_set,
                                 WeightedMode mode, double budget, ScalarFunction f,
                                 double upper, KrylovOptions krylov)
    : graph_(std::move(graph)),
      f_set_(std::move(f_set)),
      mode_(mode),
      budget_(budget),
      f_(f),
      fprime_(f.derivative()),
      krylov_(krylov) {
  if (f_set_.empty()) throw ValidationError("candidate set F is empty");
  if (!(budget_ > 0.0) || !std::isfinite(budget_))
    throw ValidationError("budget must be positive");
  if (mode_ != WeightedMode::Downgrade && (!(upper > 0.0) || !std::isfinite(upper)))
    throw ValidationError("upper bound must be positive");

  const Node n = graph_.nodes();
  const std::size_t nf = f_set_.size();
  lower_.resize(static_cast<Eigen::Index>(nf));
  upper_.resize(static_cast<Eigen::Index>(nf));
  for (std::size_t e = 0; e < nf; ++e) {
    const NodePair p = f_set_[e];
    if (p.u == p.v || p.u < 0 || p.v >= n)
      throw ValidationError("invalid pair in F: (" + std::to_string(p.u + 1) + ", " +
                            std::to_string(p.v + 1) + ")");
    if (!ind_.emplace(p, e).second) throw ValidationError("duplicate pair in F");
    const double w = graph_.weight(p.u, p.v);
    const auto k = static_cast<Eigen::Index>(e);
    switch (mode_) {
      case WeightedMode::Downgrade:
        if (w == 0.0) throw ValidationError("downgrade needs existing edges in F");
        lower_(k) = -w;
        upper_(k) = 0.0;
        break;
      case WeightedMode::Add:
        if (w != 0.0) throw ValidationError("add needs missing edges in F");
        lower_(k) = 0.0;
        upper_(k) = upper;
        break;
      case WeightedMode::Tune:
        if (w == 0.0) throw ValidationError("tune needs existing edges in F");
        lower_(k) = -w;
        upper_(k) = upper;
        break;
      case WeightedMode::Rewire:
        lower_(k) = -w;
        upper_(k) = upper;
        break;
    }
  }
  cache_ = fprime_entries(graph_, f_set_, fprime_);
}

std::size_t WeightedProblem::index(NodePair p) const {
  const auto it = ind_.find(p);
  if (it == ind_.end()) throw ValidationError("pair is not in F");
  return it->second;
}

namespace {

std::vector<Edge> deltas(const std::vector<NodePair>& f_set, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(f_set.size()))
    throw ValidationError("weight vector does not match F");
  std::vector<Edge> out;
  out.reserve(f_set.size());
  for (std::size_t e = 0; e < f_set.size(); ++e) {
    const double d = x(static_cast<Eigen::Index>(e));
    if (d != 0.0) out.push_back({f_set[e].u, f_set[e].v, d});
  }
  return out;
}

}  // namespace

LowRankUpdate WeightedProblem::assemble(const Eigen::VectorXd& x) const {
  const std::vector<Edge> d = deltas(f_set_, x);
  return LowRankUpdate::from_edges(graph_.nodes(), d);
}

SparseMatrix WeightedProblem::perturbed(const Eigen::VectorXd& x) const {
  const std::vector<Edge> d = deltas(f_set_, x);
  SparseMatrix m = graph_.adjacency() + symmetric_matrix(graph_.nodes(), d);
  m.prune(0.0);
  return m;
}

Eigen::VectorXd WeightedProblem::clamp(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

Eigen::VectorXd fprime_entries(const SparseSymGraph& g, std::span<const NodePair> pairs,
                               const ScalarFunction& fprime, double tol) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(pairs.size()));
  std::map<Node, std::vector<std::size_t>> by_node;
  for (std::size_t e = 0; e < pairs.size(); ++e) by_node[pairs[e].u].push_back(e);
  for (const auto& [u, list] : by_node) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.nodes());
    v(u) = 1.0;
    const Eigen::VectorXd col = lanczos_fun_action(g.adjacency(), v, fprime, tol, 300);
    for (std::size_t e : list) out(static_cast<Eigen::Index>(e)) = col(pairs[e].v);
  }
  return out;
}

}  // namespace fconn

#include "fconn/spectral.hpp"
#include "loop.hpp"

namespace fconn {

MiobiState MiobiState::initial(const SparseSymGraph& a, Eigen::Index h) {
  if (h < 1) throw ValidationError("MIOBI needs at least one eigenpair");
  h = std::min<Eigen::Index>(h, a.nodes());
  EigsOptions opt;
  opt.tol = 1e-10;
  const Eigenpairs ep =
      extremal_eigenpairs(a.adjacency(), h, SpectrumEnd::LargestMagnitude, opt);
  return {ep.values, ep.vectors};
}

double MiobiState::score(const ScalarFunction& f, NodePair p, double delta) const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const double shift = 2.0 * delta * vectors(p.u, j) * vectors(p.v, j);
    s += f(values(j) + shift) - f(values(j));
  }
  return s;
}

void MiobiState::update(NodePair p, double delta) {
  const Eigen::Index h = values.size();
  // c_ij = u_iᵀ X u_j with X = δ(1_s1_tᵀ + 1_t1_sᵀ)
  const Eigen::VectorXd us = vectors.row(p.u).transpose();
  const Eigen::VectorXd ut = vectors.row(p.v).transpose();
  const Eigen::MatrixXd c = delta * (us * ut.transpose() + ut * us.transpose());

  Eigen::MatrixXd coef = Eigen::MatrixXd::Identity(h, h);
  for (Eigen::Index j = 0; j < h; ++j)
    for (Eigen::Index i = 0; i < h; ++i) {
      if (i == j) continue;
      const double gap = values(j) - values(i);
      if (std::abs(gap) < 1e-10) continue;
      coef(i, j) = c(i, j) / gap;
    }
  vectors = vectors * coef;
  values += c.diagonal();
}

double MiobiState::drift() const {
  const auto h = vectors.cols();
  return (vectors.transpose() * vectors - Eigen::MatrixXd::Identity(h, h)).norm();
}

ModificationPlan miobi(const SparseSymGraph& a, const GreedyConfig& cfg,
                       const ScalarFunction& f, int h, const CentralityRanking& r) {
  detail::check_config(a, cfg);
  MiobiState state = MiobiState::initial(a, h);
  auto score = [&](const SparseSymGraph&, NodePair p, double delta) {
    return detail::Score{state.score(f, p, delta), true};
  };
  auto accept = [&](const SparseSymGraph&, NodePair p, double delta) {
    state.update(p, delta);
  };
  ModificationPlan plan = detail::run_greedy(a, cfg, r, score, accept);
  plan.eigenvector_drift = state.drift();
  return plan;
}

ModificationPlan miobi(const SparseSymGraph& a, const GreedyConfig& cfg,
                       const ScalarFunction& f, int h) {
  detail::check_config(a, cfg);
  return miobi(a, cfg, f, h, eigenvector_centrality(a));
}

}  // namespace fconn

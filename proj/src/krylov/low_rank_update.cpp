#include "fconn/error.hpp"
#include "fconn/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace fconn {

LowRankUpdate::LowRankUpdate(Eigen::MatrixXd u, Eigen::MatrixXd b)
    : u_(std::move(u)), b_(std::move(b)) {
  if (b_.rows() != b_.cols() || b_.rows() != u_.cols())
    throw ValidationError("low-rank core must be square and match U");
  if (b_.size() > 0 && (b_ - b_.transpose()).cwiseAbs().maxCoeff() > 0.0)
    b_ = 0.5 * (b_ + b_.transpose());
  if (u_.cols() > 0) {
    const double err =
        (u_.transpose() * u_ - Eigen::MatrixXd::Identity(u_.cols(), u_.cols())).norm();
    if (err > 1e-12) throw ValidationError("low-rank factor U is not orthonormal");
  }
}

LowRankUpdate LowRankUpdate::edge(Node n, Node s, Node t, double delta) {
  if (s == t || s < 0 || t < 0 || s >= n || t >= n)
    throw ValidationError("edge update needs two distinct in-range nodes");
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, 2);
  u(s, 0) = 1.0;
  u(t, 1) = 1.0;
  Eigen::MatrixXd b(2, 2);
  b << 0.0, delta, delta, 0.0;
  return LowRankUpdate(std::move(u), std::move(b));
}

LowRankUpdate LowRankUpdate::from_edges(Node n, std::span<const Edge> deltas) {
  std::vector<Node> nodes;
  for (const Edge& e : deltas) {
    if (e.i == e.j || e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw ValidationError("edge update needs two distinct in-range nodes");
    if (e.w == 0.0) continue;
    nodes.push_back(e.i);
    nodes.push_back(e.j);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const auto s = static_cast<Eigen::Index>(nodes.size());
  auto col = [&](Node v) {
    return static_cast<Eigen::Index>(std::lower_bound(nodes.begin(), nodes.end(), v) -
                                     nodes.begin());
  };
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, s);
  for (Eigen::Index k = 0; k < s; ++k) u(nodes[static_cast<std::size_t>(k)], k) = 1.0;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(s, s);
  for (const Edge& e : deltas) {
    if (e.w == 0.0) continue;
    const auto a = col(e.i), c = col(e.j);
    b(a, c) += e.w;
    b(c, a) += e.w;
  }
  return LowRankUpdate(std::move(u), std::move(b));
}

LowRankUpdate LowRankUpdate::negated() const {
  LowRankUpdate out = *this;
  out.b_ = -b_;
  return out;
}

Eigen::MatrixXd LowRankUpdate::dense() const { return u_ * b_ * u_.transpose(); }

}  // namespace fconn

#include "detail.hpp"
#include "fconn/error.hpp"
#include "fconn/krylov.hpp"

#include <algorithm>
#include <deque>
#include <memory>

namespace fconn {

namespace {

Eigen::MatrixXd indicator(Node n, Node i) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, 1);
  e(i, 0) = 1.0;
  return e;
}

void check_options(const SparseMatrix& m, const KrylovOptions& opt) {
  if (m.rows() != m.cols()) throw ValidationError("matrix must be square");
  if (opt.lag < 1) throw ValidationError("lag must be at least 1");
  if (opt.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (!(opt.tol > 0.0)) throw ValidationError("tolerance must be positive");
}

/// One node's Arnoldi process with its eigendecomposition cached at the
/// current size.
struct NodeProcess {
  NodeProcess(const SparseMatrix& m, Node i)
      : kd(m, indicator(m.rows(), i), Orthogonalization::Full) {}

  void step() {
    if (kd.exhausted() && kd.blocks() > 0) return;
    kd.advance();
    eig = sym_eig(SymDense(kd.projected()));
    w = kd.start_coefficients();
  }

  KrylovDecomposition kd;
  SymEig eig;
  Eigen::MatrixXd w;  // 𝓤ᵀ 1_i
};

/// (1,2) block of f([[H, w_u w_vᵀ], [0, G]]).
Eigen::MatrixXd projected_core(const ScalarFunction& f, const NodeProcess& u,
                               const NodeProcess& v) {
  return block_frechet(f, u.eig, v.eig, u.w * v.w.transpose());
}

}  // namespace

double FrechetResult::entry(Node h, Node k) const {
  if (core.size() == 0) return 0.0;
  return u.row(h).dot(core * v.row(k).transpose());
}

FrechetResult frechet_eval(const SparseMatrix& m, Node i, Node j,
                           const ScalarFunction& f, const KrylovOptions& opt) {
  check_options(m, opt);
  const Node n = m.rows();
  if (i < 0 || j < 0 || i >= n || j >= n) throw ValidationError("node index out of range");

  NodeProcess pu(m, i);
  std::unique_ptr<NodeProcess> pv_own;
  if (j != i) pv_own = std::make_unique<NodeProcess>(m, j);
  NodeProcess& pv = pv_own ? *pv_own : pu;

  FrechetResult res;
  std::deque<Eigen::MatrixXd> history;
  int it = 0;
  while (it < opt.max_iter) {
    if (pu.kd.exhausted() && pv.kd.exhausted() && it > 0) break;
    pu.step();
    if (&pv != &pu) pv.step();
    ++it;
    res.core = projected_core(f, pu, pv);
    history.push_back(res.core);
    if (static_cast<int>(history.size()) > opt.lag + 1) history.pop_front();
    if (pu.kd.exhausted() && pv.kd.exhausted()) {
      res.converged = true;
      break;
    }
    if (it > opt.lag && detail::padded_difference(res.core, history.front()) <= opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = it;
  res.u = pu.kd.basis();
  res.v = pv.kd.basis();
  return res;
}

double MultiFrechetResult::entry(std::size_t e, Node h, Node k) const {
  const EdgeCore& ec = edges.at(e);
  if (ec.core.size() == 0) return 0.0;
  const Eigen::MatrixXd& bu = bases.at(ec.pair.u);
  const Eigen::MatrixXd& bv = bases.at(ec.pair.v);
  const auto r = ec.core.rows(), c = ec.core.cols();
  return bu.row(h).head(r).dot(ec.core * bv.row(k).head(c).transpose());
}

MultiFrechetResult multiple_frechet_eval(const SparseMatrix& m,
                                         std::span<const NodePair> f_set,
                                         const ScalarFunction& f,
                                         const KrylovOptions& opt) {
  check_options(m, opt);
  if (f_set.empty()) throw ValidationError("multiple_frechet_eval needs a nonempty edge set");
  const Node n = m.rows();

  std::map<Node, std::unique_ptr<NodeProcess>> procs;
  for (const NodePair& p : f_set) {
    if (p.u < 0 || p.v >= n) throw ValidationError("node index out of range");
    for (Node v : {p.u, p.v})
      if (!procs.contains(v)) procs.emplace(v, std::make_unique<NodeProcess>(m, v));
  }

  MultiFrechetResult res;
  res.edges.resize(f_set.size());
  std::vector<std::deque<Eigen::MatrixXd>> history(f_set.size());
  std::vector<std::size_t> nc(f_set.size());
  for (std::size_t e = 0; e < f_set.size(); ++e) {
    nc[e] = e;
    res.edges[e].pair = f_set[e];
  }

  std::size_t columns = 0;
  int it = 0;
  while (!nc.empty() && it < opt.max_iter) {
    std::vector<Node> active;
    for (std::size_t e : nc) {
      active.push_back(f_set[e].u);
      active.push_back(f_set[e].v);
    }
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());

    std::size_t growth = 0;
    for (Node v : active)
      if (!procs.at(v)->kd.exhausted()) ++growth;
    const double bytes = 8.0 * double(n) * double(columns + growth);
    if (bytes > double(opt.memory_budget))
      throw ResourceError("Krylov bases for " + std::to_string(procs.size()) +
                          " nodes exceed the memory budget of " +
                          std::to_string(opt.memory_budget) + " bytes");
    for (Node v : active) {
      NodeProcess& p = *procs.at(v);
      const auto before = p.kd.dim();
      p.step();
      columns += static_cast<std::size_t>(p.kd.dim() - before);
    }
    ++it;

    std::vector<std::size_t> still;
    for (std::size_t e : nc) {
      const NodeProcess& pu = *procs.at(f_set[e].u);
      const NodeProcess& pv = *procs.at(f_set[e].v);
      Eigen::MatrixXd core = projected_core(f, pu, pv);
      auto& hist = history[e];
      hist.push_back(core);
      if (static_cast<int>(hist.size()) > opt.lag + 1) hist.pop_front();
      auto& out = res.edges[e];
      out.core = std::move(core);
      out.iterations = it;
      const bool done =
          (pu.kd.exhausted() && pv.kd.exhausted()) ||
          (it > opt.lag && detail::padded_difference(out.core, hist.front()) <= opt.tol);
      if (done) {
        out.converged = true;
        hist.clear();
      } else {
        still.push_back(e);
      }
    }
    nc = std::move(still);
  }

  for (auto& [v, p] : procs) res.bases.emplace(v, p->kd.basis());
  return res;
}

}  // namespace fconn

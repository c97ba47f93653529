#include "detail.hpp"
#include "fconn/error.hpp"
#include "fconn/krylov.hpp"

#include <cmath>
#include <deque>

namespace fconn {

namespace {

void check_inputs(const SparseMatrix& a, const LowRankUpdate& x,
                  const KrylovOptions& opt) {
  if (a.rows() != a.cols()) throw ValidationError("matrix must be square");
  if (x.size() != a.rows()) throw ValidationError("update size does not match the matrix");
  if (opt.lag < 1) throw ValidationError("lag must be at least 1");
  if (opt.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (!(opt.tol > 0.0)) throw ValidationError("tolerance must be positive");
}

}  // namespace

double FunUpdateResult::entry(Node i, Node j) const {
  if (core.size() == 0) return 0.0;
  return basis.row(i).dot(core * basis.row(j).transpose());
}

FunUpdateResult fun_update(const SparseMatrix& a, const LowRankUpdate& x,
                           const ScalarFunction& f, const KrylovOptions& opt) {
  check_inputs(a, x, opt);
  FunUpdateResult res;
  if (x.rank() == 0) {
    res.basis.resize(a.rows(), 0);
    res.converged = true;
    return res;
  }

  KrylovDecomposition kd(a, x.u(), Orthogonalization::Full);
  std::deque<Eigen::MatrixXd> history;
  int m = 0;
  while (m < opt.max_iter) {
    if (!kd.advance()) break;
    ++m;
    const Eigen::MatrixXd h = kd.projected();
    const Eigen::MatrixXd w = kd.start_coefficients();
    const SymEig e1 = sym_eig(SymDense(h + w * x.b() * w.transpose()));
    const SymEig e0 = sym_eig(SymDense(h));
    Eigen::MatrixXd core = apply_fun_sym(f, e1).matrix() - apply_fun_sym(f, e0).matrix();

    history.push_back(core);
    if (static_cast<int>(history.size()) > opt.lag + 1) history.pop_front();
    res.core = std::move(core);
    if (kd.exhausted()) {
      res.converged = true;
      break;
    }
    if (m > opt.lag &&
        detail::padded_difference(res.core, history.front()) <= opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = m;
  res.basis = kd.basis();
  return res;
}

TraceUpdate trace_fun_update(const SparseMatrix& a, const LowRankUpdate& x,
                             const ScalarFunction& f, const KrylovOptions& opt) {
  check_inputs(a, x, opt);
  TraceUpdate res;
  if (x.rank() == 0) {
    res.converged = true;
    return res;
  }

  const bool local = opt.trace_mode == Orthogonalization::Local;
  KrylovDecomposition kd(a, x.u(), opt.trace_mode, false);
  std::deque<double> history;
  int m = 0;
  while (m < opt.max_iter) {
    if (!kd.advance()) break;
    ++m;
    const Eigen::MatrixXd h = kd.projected();
    const Eigen::MatrixXd w = kd.start_coefficients();
    const Eigen::MatrixXd h1 = h + w * x.b() * w.transpose();
    const Eigen::VectorXd l1 = local ? banded_eigenvalues(h1, kd.bandwidth())
                                     : sym_eig(SymDense(h1)).values;
    const Eigen::VectorXd l0 = local ? banded_eigenvalues(h, kd.bandwidth())
                                     : sym_eig(SymDense(h)).values;
    f.check_domain(std::min(l0(0), l1(0)),
                   std::max(l0(l0.size() - 1), l1(l1.size() - 1)));
    // Both spectra are sorted; pairing them keeps the sum of differences
    // free of the cancellation in Σf(λ̃) − Σf(λ).
    double delta = 0.0;
    for (Eigen::Index k = 0; k < l0.size(); ++k) delta += f(l1(k)) - f(l0(k));

    history.push_back(delta);
    if (static_cast<int>(history.size()) > opt.lag + 1) history.pop_front();
    res.delta = delta;
    if (kd.exhausted()) {
      res.converged = true;
      break;
    }
    if (m > opt.lag && std::abs(delta - history.front()) < opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = m;
  return res;
}

}  // namespace fconn

#include "fconn/error.hpp"
#include "fconn/krylov.hpp"

#include <cmath>
#include <random>

namespace fconn {

Eigen::VectorXd lanczos_fun_action(const SparseMatrix& a, const Eigen::VectorXd& v,
                                   const ScalarFunction& f, double tol, int max_dim) {
  const Eigen::Index n = a.rows();
  if (v.size() != n) throw ValidationError("vector size does not match the matrix");
  const double beta0 = v.norm();
  if (beta0 == 0.0) return Eigen::VectorXd::Zero(n);

  const Eigen::Index cap = std::min<Eigen::Index>(n, max_dim);
  Eigen::MatrixXd q(n, cap);
  Eigen::VectorXd alpha(cap), beta(cap);
  q.col(0) = v / beta0;

  double anorm = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
    anorm = std::max(anorm, s);
  }

  Eigen::VectorXd y_prev;
  double last_change = INFINITY;
  for (Eigen::Index k = 0; k < cap; ++k) {
    Eigen::VectorXd w = a * q.col(k);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd c = q.leftCols(k + 1).transpose() * w;
      w.noalias() -= q.leftCols(k + 1) * c;
      if (pass == 0) alpha(k) = c(k);
    }
    beta(k) = w.norm();
    const bool invariant = beta(k) <= 1e-12 * std::max(anorm, 1e-300) || k + 1 == n;

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (Eigen::Index r = 0; r <= k; ++r) {
      t(r, r) = alpha(r);
      if (r < k) t(r, r + 1) = t(r + 1, r) = beta(r);
    }
    const SymEig eig = sym_eig(SymDense(t));
    f.check_domain(eig.values(0), eig.values(k));
    const Eigen::VectorXd fl = f.map(eig.values);
    const Eigen::VectorXd y =
        eig.vectors * fl.cwiseProduct(eig.vectors.row(0).transpose());

    bool done = invariant;
    if (!done && k > 0) {
      Eigen::VectorXd d = y;
      d.head(k) -= y_prev;
      last_change = d.norm() / std::max(y.norm(), 1e-300);
      done = last_change <= tol;
    }
    if (done) return beta0 * (q.leftCols(k + 1) * y);
    y_prev = y;
    if (k + 1 < cap) q.col(k + 1) = w / beta(k);
  }
  throw ConvergenceError("Lanczos f(A)v did not converge in " + std::to_string(cap) +
                             " steps, relative change " + std::to_string(last_change),
                         last_change);
}

double estimate_trace_f(const SparseMatrix& a, const ScalarFunction& f, int n_probes,
                        std::uint64_t seed) {
  if (n_probes < 2 || n_probes % 2 != 0)
    throw ValidationError("Hutch++ needs an even number of probes, at least 2");
  const Eigen::Index n = a.rows();
  const Eigen::Index half = n_probes / 2;

  // With at least n sketch vectors the probe budget covers an exact trace.
  if (n <= half) {
    double t = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      t += lanczos_fun_action(a, Eigen::VectorXd::Unit(n, i), f)(i);
    return t;
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  auto rademacher = [&](Eigen::Index cols) {
    Eigen::MatrixXd s(n, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < n; ++i) s(i, j) = coin(rng) ? 1.0 : -1.0;
    return s;
  };

  const Eigen::MatrixXd s = rademacher(half);
  const Eigen::MatrixXd g = rademacher(half);

  Eigen::MatrixXd y(n, half);
  for (Eigen::Index j = 0; j < half; ++j) y.col(j) = lanczos_fun_action(a, s.col(j), f);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(y);
  qr.setThreshold(1e-12);
  const Eigen::Index rank = qr.rank();
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);

  double sketch = 0.0;
  for (Eigen::Index j = 0; j < rank; ++j)
    sketch += q.col(j).dot(lanczos_fun_action(a, q.col(j), f));

  double rest = 0.0;
  for (Eigen::Index j = 0; j < half; ++j) {
    Eigen::VectorXd z = g.col(j);
    z -= q * (q.transpose() * z);
    rest += z.dot(lanczos_fun_action(a, z, f));
  }
  return sketch + rest / double(half);
}

}  // namespace fconn

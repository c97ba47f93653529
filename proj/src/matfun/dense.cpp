#include "fconn/error.hpp"
#include "fconn/matfun.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace fconn {

SymDense::SymDense(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw ValidationError("SymDense needs a square matrix");
  h_ = 0.5 * (h + h.transpose());
}

SymEig sym_eig(const SymDense& h) {
  if (h.order() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix());
  if (es.info() != Eigen::Success)
    throw ConvergenceError("symmetric eigensolver failed", NAN);
  return {es.eigenvalues(), es.eigenvectors()};
}

SymDense apply_fun_sym(const ScalarFunction& f, const SymEig& eig) {
  const auto m = eig.values.size();
  if (m == 0) return SymDense(Eigen::MatrixXd(0, 0));
  f.check_domain(eig.values.minCoeff(), eig.values.maxCoeff());
  const Eigen::VectorXd fl = f.map(eig.values);
  return SymDense(eig.vectors * fl.asDiagonal() * eig.vectors.transpose());
}

SymDense apply_fun_sym(const ScalarFunction& f, const SymDense& h) {
  return apply_fun_sym(f, sym_eig(h));
}

Eigen::MatrixXd block_frechet(const ScalarFunction& f, const SymEig& h,
                              const SymEig& g, const Eigen::MatrixXd& e) {
  const auto m = h.values.size();
  const auto p = g.values.size();
  if (e.rows() != m || e.cols() != p)
    throw ValidationError("block_frechet: direction has the wrong shape");
  if (m == 0 || p == 0) return Eigen::MatrixXd::Zero(m, p);
  Eigen::MatrixXd core = h.vectors.transpose() * e * g.vectors;
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < m; ++i)
      core(i, j) *= f.divided_difference(h.values(i), g.values(j));
  return h.vectors * core * g.vectors.transpose();
}

Eigen::MatrixXd block_frechet(const ScalarFunction& f, const SymDense& h,
                              const SymDense& g, const Eigen::MatrixXd& e) {
  return block_frechet(f, sym_eig(h), sym_eig(g), e);
}

Eigen::Index bandwidth_of(const Eigen::MatrixXd& h) {
  Eigen::Index b = 0;
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (h(i, j) != 0.0) b = std::max(b, std::abs(i - j));
  return b;
}

Eigen::VectorXd banded_eigenvalues(const Eigen::MatrixXd& h,
                                   Eigen::Index bandwidth) {
  const Eigen::Index n = h.rows();
  if (n == 0) return {};
  const Eigen::Index kd = std::min(bandwidth, n - 1);
  const Eigen::Index ld = kd + 1;
  // Upper band storage: ab(kd + i − j, j) = h(i, j) for max(0, j−kd) ≤ i ≤ j.
  std::vector<double> ab(static_cast<std::size_t>(ld * n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = std::max<Eigen::Index>(0, j - kd); i <= j; ++i)
      ab[static_cast<std::size_t>(kd + i - j + j * ld)] = 0.5 * (h(i, j) + h(j, i));
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'U', static_cast<lapack_int>(n),
                    static_cast<lapack_int>(kd), ab.data(),
                    static_cast<lapack_int>(ld), w.data(), nullptr, 1);
  if (info != 0)
    throw ConvergenceError("dsbev failed with info " + std::to_string(info), NAN);
  return w;
}

}  // namespace fconn

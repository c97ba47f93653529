#include "fconn/spectral.hpp"

#include "fconn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace fconn {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Orthogonalizes w against the first `cols` columns of v twice (classical
/// Gram–Schmidt with one reorthogonalization pass) and returns its norm.
double orthogonalize(const MatrixXd& v, Index cols, VectorXd& w) {
  for (int pass = 0; pass < 2; ++pass) {
    if (cols == 0) break;
    const VectorXd c = v.leftCols(cols).transpose() * w;
    w.noalias() -= v.leftCols(cols) * c;
  }
  return w.norm();
}

std::vector<Index> order_by(const VectorXd& theta, SpectrumEnd end) {
  std::vector<Index> idx(static_cast<std::size_t>(theta.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    if (end == SpectrumEnd::LargestAlgebraic) return theta(a) > theta(b);
    return std::abs(theta(a)) > std::abs(theta(b));
  });
  return idx;
}

}  // namespace

Eigenpairs extremal_eigenpairs(const SparseMatrix& a, Index count,
                               SpectrumEnd end, const EigsOptions& opt) {
  const Index n = a.rows();
  if (count < 1 || count > n)
    throw ValidationError("requested eigenpair count out of range");

  const std::size_t max_matvecs =
      opt.max_matvecs ? opt.max_matvecs
                      : std::max<std::size_t>(100, 10 * static_cast<std::size_t>(n));
  const Index capacity = std::min<Index>(n, std::max<Index>(2 * count + 20, count + 30));
  const Index keep = std::min<Index>(capacity - 1, count + (capacity - count) / 2);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
  };

  double anorm = 0.0;
  for (Index c = 0; c < a.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
    anorm = std::max(anorm, s);
  }

  MatrixXd v(n, capacity);
  MatrixXd av(n, capacity);
  MatrixXd proj = MatrixXd::Zero(capacity, capacity);
  Index cols = 0;
  std::size_t matvecs = 0;

  VectorXd next = opt.ones_start ? VectorXd::Ones(n) : random_vector();
  next.normalize();

  double last_residual = INFINITY;
  while (true) {
    // Grow the basis to capacity.
    while (cols < capacity) {
      double nrm = orthogonalize(v, cols, next);
      if (nrm <= 1e-12 * std::max(1.0, anorm) || !std::isfinite(nrm)) {
        if (cols == n) break;
        // Invariant subspace: continue with a fresh direction.
        next = random_vector();
        nrm = orthogonalize(v, cols, next);
        if (nrm <= 1e-12) break;
      }
      v.col(cols) = next / nrm;
      av.col(cols) = a * v.col(cols);
      ++matvecs;
      const VectorXd c = v.leftCols(cols + 1).transpose() * av.col(cols);
      proj.block(0, cols, cols + 1, 1) = c;
      proj.block(cols, 0, 1, cols + 1) = c.transpose();
      next = av.col(cols);
      ++cols;
    }

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(proj.topLeftCorner(cols, cols));
    const VectorXd& theta = es.eigenvalues();
    const auto idx = order_by(theta, end);
    const double scale = std::max(std::abs(theta(idx.front())), 1e-300);

    bool converged = true;
    double worst = 0.0;
    for (Index k = 0; k < count; ++k) {
      const VectorXd z = es.eigenvectors().col(idx[static_cast<std::size_t>(k)]);
      const VectorXd r =
          av.leftCols(cols) * z - theta(idx[static_cast<std::size_t>(k)]) * (v.leftCols(cols) * z);
      worst = std::max(worst, r.norm() / scale);
    }
    converged = worst <= opt.tol || cols == n;
    last_residual = worst;

    if (converged || matvecs >= max_matvecs) {
      if (!converged)
        throw ConvergenceError("eigensolver did not converge, residual " +
                                   std::to_string(last_residual),
                               last_residual);
      Eigenpairs out;
      out.values.resize(count);
      out.vectors.resize(n, count);
      for (Index k = 0; k < count; ++k) {
        const Index j = idx[static_cast<std::size_t>(k)];
        out.values(k) = theta(j);
        out.vectors.col(k) = v.leftCols(cols) * es.eigenvectors().col(j);
      }
      out.matvecs = matvecs;
      return out;
    }

    // Thick restart: retain the best `keep` Ritz vectors and continue from
    // the residual direction, orthogonal to the whole old basis, so that
    // A·V stays inside span(V, next).
    orthogonalize(v, cols, next);
    MatrixXd z(cols, keep);
    VectorXd kept(keep);
    for (Index k = 0; k < keep; ++k) {
      z.col(k) = es.eigenvectors().col(idx[static_cast<std::size_t>(k)]);
      kept(k) = theta(idx[static_cast<std::size_t>(k)]);
    }
    const MatrixXd vz = v.leftCols(cols) * z;
    const MatrixXd avz = av.leftCols(cols) * z;
    v.leftCols(keep) = vz;
    av.leftCols(keep) = avz;
    proj.setZero();
    proj.topLeftCorner(keep, keep) = kept.asDiagonal();
    cols = keep;
  }
}

}  // namespace fconn

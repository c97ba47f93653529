#include "fconn/error.hpp"
#include "fconn/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace fconn {

namespace {

double column_sum_norm(const SparseMatrix& a) {
  double out = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
    out = std::max(out, s);
  }
  return out;
}

}  // namespace

KrylovDecomposition::KrylovDecomposition(const SparseMatrix& a,
                                         const Eigen::MatrixXd& start,
                                         Orthogonalization mode, bool keep_basis)
    : a_(&a), mode_(mode), keep_basis_(keep_basis || mode == Orthogonalization::Full) {
  if (a.rows() != a.cols()) throw ValidationError("Krylov operator must be square");
  if (start.rows() != a.rows())
    throw ValidationError("Krylov start block has the wrong number of rows");
  anorm_ = column_sum_norm(a);
  drop_tol_ = 1e-12 * anorm_;

  const double scale = start.size() ? start.cwiseAbs().maxCoeff() : 0.0;
  const double saved = drop_tol_;
  drop_tol_ = 1e-12 * scale;
  factor(start, r0_);
  drop_tol_ = saved;
  coupling_.resize(0, 0);
}

void KrylovDecomposition::factor(Eigen::MatrixXd z, Eigen::MatrixXd& r) {
  const Eigen::Index n = z.rows();
  if (z.cols() == 0) {
    pending_.resize(n, 0);
    pending_cols_ = 0;
    r.resize(0, 0);
    return;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(z);
  const Eigen::MatrixXd& qrm = qr.matrixQR();
  const Eigen::Index limit = std::min(n, z.cols());
  Eigen::Index k = 0;
  while (k < limit && std::abs(qrm(k, k)) > drop_tol_) ++k;
  pending_ = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  pending_cols_ = k;
  const Eigen::MatrixXd rk =
      qrm.topRows(k).triangularView<Eigen::Upper>().toDenseMatrix();
  r = rk * qr.colsPermutation().transpose();
}

void KrylovDecomposition::reserve(Eigen::Index cols) {
  const Eigen::Index n = a_->rows();
  Eigen::Index cap = h_.rows();
  if (cols <= cap) return;
  Eigen::Index next = std::max<Eigen::Index>(cols, std::max<Eigen::Index>(8, 2 * cap));
  if (mode_ == Orthogonalization::Local && !keep_basis_) next = std::min(next, std::max(cols, n));
  if (keep_basis_) basis_.conservativeResize(n, next);
  h_.conservativeResizeLike(Eigen::MatrixXd::Zero(next, next));
}

Eigen::Index KrylovDecomposition::block_size(int k) const {
  const auto kk = static_cast<std::size_t>(k);
  const Eigen::Index end =
      kk + 1 < block_start_.size() ? block_start_[kk + 1] : dim_;
  return end - block_start_[kk];
}

Eigen::Ref<const Eigen::MatrixXd> KrylovDecomposition::basis() const {
  if (!keep_basis_) throw ValidationError("Krylov basis was not retained");
  return basis_.leftCols(dim_);
}

Eigen::MatrixXd KrylovDecomposition::block(int k) const {
  if (k < 0 || k >= blocks()) throw ValidationError("Krylov block index out of range");
  if (keep_basis_) return basis_.middleCols(block_offset(k), block_size(k));
  if (k == blocks() - 1) return last_;
  if (k == blocks() - 2) return prev_;
  throw ValidationError("Krylov block was discarded (Local mode)");
}

Eigen::MatrixXd KrylovDecomposition::start_coefficients() const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim_, r0_.cols());
  const Eigen::Index k = std::min(dim_, r0_.rows());
  w.topRows(k) = r0_.topRows(k);
  return w;
}

bool KrylovDecomposition::advance() {
  if (pending_cols_ == 0) return false;
  const Eigen::Index n = a_->rows();
  const Eigen::Index s = pending_cols_;
  const Eigen::Index start = dim_;
  const int m = blocks();  // index of the new block
  reserve(dim_ + s);

  const Eigen::MatrixXd u = pending_.leftCols(s);
  if (keep_basis_) basis_.middleCols(start, s) = u;
  if (!keep_basis_) {
    prev_ = std::move(last_);
    last_ = u;
  }
  if (m > 0) {
    const Eigen::Index ps = block_size(m - 1);
    const Eigen::Index pstart = block_offset(m - 1);
    h_.block(start, pstart, s, ps) = coupling_;
    if (mode_ == Orthogonalization::Local) {
      h_.block(pstart, start, ps, s) = coupling_.transpose();
      bandwidth_ = std::max(bandwidth_, s + ps - 1);
    }
  }
  bandwidth_ = std::max(bandwidth_, s - 1);
  block_start_.push_back(start);
  dim_ += s;

  Eigen::MatrixXd z = (*a_) * u;
  if (mode_ == Orthogonalization::Full) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::MatrixXd c = basis_.leftCols(dim_).transpose() * z;
      z.noalias() -= basis_.leftCols(dim_) * c;
      h_.block(0, start, dim_, s) += c;
    }
  } else {
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(s, s);
    for (int pass = 0; pass < 2; ++pass) {
      if (m > 0) {
        const Eigen::MatrixXd p = keep_basis_ ? Eigen::MatrixXd(basis_.middleCols(block_offset(m - 1), block_size(m - 1)))
                                              : prev_;
        const Eigen::MatrixXd c = p.transpose() * z;
        z.noalias() -= p * c;
      }
      const Eigen::MatrixXd c = u.transpose() * z;
      z.noalias() -= u * c;
      diag += c;
    }
    h_.block(start, start, s, s) = 0.5 * (diag + diag.transpose());
  }

  factor(std::move(z), coupling_);
  if (mode_ == Orthogonalization::Local && pending_cols_ > 0) {
    // Without full reorthogonalization the recurrence does not terminate
    // by itself; stop at dimension n.
    if (dim_ + pending_cols_ > n) {
      pending_cols_ = 0;
      coupling_.resize(0, s);
    }
  }
  return true;
}

}  // namespace fconn

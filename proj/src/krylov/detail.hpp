#pragma once

#include <Eigen/Dense>

#include <algorithm>

namespace fconn::detail {

/// Largest singular value.
inline double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

/// ‖big − [[small, 0], [0, 0]]‖₂
inline double padded_difference(const Eigen::MatrixXd& big, const Eigen::MatrixXd& small) {
  Eigen::MatrixXd d = big;
  const auto r = std::min(small.rows(), big.rows());
  const auto c = std::min(small.cols(), big.cols());
  d.topLeftCorner(r, c) -= small.topLeftCorner(r, c);
  return spectral_norm(d);
}

}  // namespace fconn::detail

#pragma once

#include "fconn/graph.hpp"

#include <cstdint>

namespace fconn {

enum class SpectrumEnd { LargestAlgebraic, LargestMagnitude };

struct Eigenpairs {
  Eigen::VectorXd values;   // sorted by the requested criterion, best first
  Eigen::MatrixXd vectors;  // orthonormal columns
  std::size_t matvecs = 0;
};

struct EigsOptions {
  /// Residual threshold: ‖Au − θu‖ ≤ tol·max|θ|.
  double tol = 1e-10;
  std::size_t max_matvecs = 0;  // 0 → max(100, 10·n)
  std::uint64_t seed = 12345;
  /// Start from the all-ones vector instead of a random one. For nonnegative
  /// matrices this has positive overlap with the Perron vector.
  bool ones_start = false;
};

/// `count` extremal eigenpairs of a symmetric sparse matrix by restarted
/// Lanczos with full reorthogonalization and explicit Rayleigh–Ritz
/// projection. Throws ConvergenceError when the residual target is missed.
Eigenpairs extremal_eigenpairs(const SparseMatrix& a, Eigen::Index count,
                               SpectrumEnd end, const EigsOptions& opt = {});

}  // namespace fconn

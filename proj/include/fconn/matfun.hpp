#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fconn {

enum class FunctionKind { Exp, Sinh, Cosh, Resolvent, Poly };

/// Scalar function from the catalog used for f-connectivity.
///
/// The resolvent family is stored as scale·(1 − αz)^(−p) so that it stays
/// closed under differentiation; `resolvent(α)` is the p = 1, scale = 1
/// member. Polynomials are Σ c_k z^k with coefficients in increasing degree.
class ScalarFunction {
 public:
  static ScalarFunction exp();
  static ScalarFunction sinh();
  static ScalarFunction cosh();
  static ScalarFunction resolvent(double alpha);
  static ScalarFunction poly(std::vector<double> coeffs);

  FunctionKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::string name() const;

  double operator()(double z) const;
  double derivative_at(double z) const;

  /// f[x, y]. Symmetric in its arguments; f′((x+y)/2) when
  /// |x − y| ≤ 1e-7·(1 + |x| + |y|).
  double divided_difference(double x, double y) const;

  /// f′ as a catalog function.
  ScalarFunction derivative() const;

  bool in_domain(double z) const;
  /// Throws DomainError unless [lo, hi] lies inside the domain.
  void check_domain(double lo, double hi) const;

  /// True when every Taylor coefficient at 0 is nonnegative, which makes
  /// Tr f(A) monotone in the entries of a nonnegative A.
  bool nonnegative_series() const;

  /// Applies f entrywise.
  Eigen::VectorXd map(const Eigen::VectorXd& z) const;

 private:
  ScalarFunction(FunctionKind k) : kind_(k) {}

  FunctionKind kind_;
  double alpha_ = 0.0;
  double scale_ = 1.0;
  int power_ = 1;
  std::vector<double> coeffs_;
};

/// Dense symmetric matrix, symmetrized as (H + Hᵀ)/2 on construction.
class SymDense {
 public:
  SymDense() = default;
  explicit SymDense(const Eigen::MatrixXd& h);

  Eigen::Index order() const { return h_.rows(); }
  const Eigen::MatrixXd& matrix() const { return h_; }

 private:
  Eigen::MatrixXd h_;
};

struct SymEig {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthogonal, columns match `values`
};

SymEig sym_eig(const SymDense& h);

/// Q f(Λ) Qᵀ. Throws DomainError if the spectrum leaves f's domain.
SymDense apply_fun_sym(const ScalarFunction& f, const SymDense& h);
SymDense apply_fun_sym(const ScalarFunction& f, const SymEig& eig);

/// (1,2) block of f([[H, E], [0, G]]) by the Daleckii–Krein formula
/// Q (D ∘ QᵀEP) Pᵀ with D_ij = f[λ_i, μ_j].
Eigen::MatrixXd block_frechet(const ScalarFunction& f, const SymDense& h,
                              const SymDense& g, const Eigen::MatrixXd& e);
Eigen::MatrixXd block_frechet(const ScalarFunction& f, const SymEig& h,
                              const SymEig& g, const Eigen::MatrixXd& e);

/// Eigenvalues (ascending) of a symmetric matrix whose entries vanish
/// outside |i − j| ≤ bandwidth. Uses LAPACK dsbev.
Eigen::VectorXd banded_eigenvalues(const Eigen::MatrixXd& h,
                                   Eigen::Index bandwidth);

/// Smallest b with h(i, j) = 0 whenever |i − j| > b.
Eigen::Index bandwidth_of(const Eigen::MatrixXd& h);

}  // namespace fconn

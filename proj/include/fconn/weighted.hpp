#pragma once

#include "fconn/graph.hpp"
#include "fconn/krylov.hpp"
#include "fconn/matfun.hpp"

#include <chrono>
#include <map>
#include <string>
#include <vector>

namespace fconn {

/// Downgrade minimizes φ_A over existing edges (−A_ij ≤ x ≤ 0); Add,
/// Tune and Rewire maximize it with per-edge caps U_ij.
enum class WeightedMode { Downgrade, Add, Tune, Rewire };

/// Objective/constraint bundle for one weighted problem over a fixed F.
class WeightedProblem {
 public:
  /// Bounds depend on the mode: Downgrade l = −A_ij, U = 0; Add l = 0,
  /// U = upper; Tune l = −A_ij, U = upper; Rewire l = −A_ij for existing
  /// and 0 for missing pairs, U = upper. Throws ValidationError when F does
  /// not fit the mode (e.g. a missing pair in Tune).
  WeightedProblem(SparseSymGraph graph, std::vector<NodePair> f_set, WeightedMode mode,
                  double budget, ScalarFunction f, double upper = 1.0,
                  KrylovOptions krylov = default_krylov());

  static KrylovOptions default_krylov();

  const SparseSymGraph& graph() const { return graph_; }
  const std::vector<NodePair>& edges() const { return f_set_; }
  std::size_t size() const { return f_set_.size(); }
  /// ind: F → {0, …, n_F − 1}; throws if the pair is not in F.
  std::size_t index(NodePair p) const;
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  double budget() const { return budget_; }
  WeightedMode mode() const { return mode_; }
  const ScalarFunction& function() const { return f_; }
  const ScalarFunction& derivative() const { return fprime_; }
  const KrylovOptions& krylov() const { return krylov_; }
  /// +1 when φ_A is maximized, −1 for Downgrade.
  double sense() const { return mode_ == WeightedMode::Downgrade ? -1.0 : 1.0; }
  /// f′(A)_ij over F, computed once at construction.
  const Eigen::VectorXd& fprime_cache() const { return cache_; }

  /// X = Σ x_e (1_i1_jᵀ + 1_j1_iᵀ)
  LowRankUpdate assemble(const Eigen::VectorXd& x) const;
  /// A + X as a sparse matrix.
  SparseMatrix perturbed(const Eigen::VectorXd& x) const;
  /// x clamped into [lower, upper].
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const;

 private:
  SparseSymGraph graph_;
  std::vector<NodePair> f_set_;
  std::map<NodePair, std::size_t> ind_;
  WeightedMode mode_;
  double budget_;
  ScalarFunction f_;
  ScalarFunction fprime_;
  KrylovOptions krylov_;
  Eigen::VectorXd lower_, upper_, cache_;
};

/// f′(A)_ij for each listed pair, from one Lanczos f′(A)1_i action per
/// distinct first endpoint (tolerance `tol`).
Eigen::VectorXd fprime_entries(const SparseSymGraph& g, std::span<const NodePair> pairs,
                               const ScalarFunction& fprime, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Derivatives

/// φ_A(X) = Tr f(A+X) − Tr f(A) for x clamped into the box.
double objective(const WeightedProblem& prob, const Eigen::VectorXd& x);

/// ∇φ_A(x)_ind(i,j) = 2(f′(A)_ij + Δ_ij) with Δ read from fun_update of f′.
Eigen::VectorXd gradient(const WeightedProblem& prob, const Eigen::VectorXd& x);

struct ObjectiveGradient {
  double value = 0.0;
  Eigen::VectorXd grad;
  int krylov_iterations = 0;
};

/// Both at once; for f = exp a single Arnoldi run serves both.
ObjectiveGradient objective_and_gradient(const WeightedProblem& prob,
                                         const Eigen::VectorXd& x);

struct HessianResult {
  Eigen::MatrixXd matrix;     // symmetrized
  double asymmetry = 0.0;     // max |H − Hᵀ| before symmetrization
};

/// H_st = 2[(L_{f′}(A+X, 1_i1_jᵀ))_hk + (L_{f′}(A+X, 1_i1_jᵀ))_kh] for
/// s = (i, j), t = (h, k), from multiple_frechet_eval.
HessianResult hessian(const WeightedProblem& prob, const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Interior point

enum class InnerSolver { Lbfgs, Hessian };

struct BarrierConfig {
  double mu0 = 0.0;            // 0 → max(1, |φ_A(x₀)|)/n_F
  double shrink = 10.0;
  double mu_min = 1e-8;        // stop once μ falls below
  double inner_tol = 1e-6;     // ‖∇φ_μ‖∞ ≤ inner_tol·(1 + ‖∇φ_A‖∞)
  int max_outer = 60;
  int max_inner = 500;
  int history = 10;            // L-BFGS pairs
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_halvings = 40;
  double boundary_fraction = 0.995;
};

struct InteriorPointResult {
  Eigen::VectorXd x;
  double objective = 0.0;  // φ_A(x)
  int outer_iterations = 0;
  int inner_iterations = 0;
  int evaluations = 0;      // objective evaluations
  int hessian_evaluations = 0;
  bool converged = false;
  double final_mu = 0.0;
  std::vector<double> outer_objectives;  // φ_A after each outer iteration
  std::vector<Eigen::VectorXd> outer_iterates;
  double seconds = 0.0;
};

/// Log-barrier interior point over split variables x = p − q with a budget
/// slack s = k − Σ(p + q). Iterates stay strictly feasible.
InteriorPointResult interior_point_solve(const WeightedProblem& prob, InnerSolver inner,
                                         const BarrierConfig& bc = {});

// ---------------------------------------------------------------------------
// Candidate selection

struct CandidateSelection {
  std::vector<NodePair> f_set;   // gradient-sorted, largest first
  Eigen::VectorXd gradient;      // 2 f′(A)_ij over f_set
  std::vector<NodePair> pool;    // the n_P candidates
  std::vector<std::string> warnings;
};

/// Tune/Downgrade: top n_P existing pairs by ≤₁. Rewire: top n_P/2 existing
/// and top n_P/2 missing by ≤₂, n_F/2 taken from each. Add: top n_P
/// missing by ≤₂. Then the n_F with largest 2f′(A)_ij.
CandidateSelection select_candidates(const SparseSymGraph& a, WeightedMode mode,
                                     std::size_t n_p, std::size_t n_f,
                                     const ScalarFunction& f, const CentralityRanking& r);
CandidateSelection select_candidates(const SparseSymGraph& a, WeightedMode mode,
                                     std::size_t n_p, std::size_t n_f,
                                     const ScalarFunction& f);

}  // namespace fconn

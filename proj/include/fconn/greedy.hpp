#pragma once

#include "fconn/graph.hpp"
#include "fconn/krylov.hpp"
#include "fconn/matfun.hpp"

#include <optional>
#include <vector>

namespace fconn {

enum class GreedyMode { Break, Make };

struct GreedyConfig {
  std::size_t budget = 1;
  std::size_t q = 1;
  Strategy strategy = Strategy::Dg2;
  KrylovOptions krylov{};
  GreedyMode mode = GreedyMode::Break;
  unsigned threads = 0;  // 0 → hardware concurrency
};

/// Strategy used when none is given: DG_2 / AD_2 for the Krylov greedy,
/// DG_FULL / AD_3 for MIOBI.
Strategy default_strategy(GreedyMode mode, bool miobi);

struct PlannedEdge {
  NodePair pair;
  double delta = 0.0;            // weight change, −w (break) or +1 (make)
  double objective_delta = 0.0;  // predicted φ of this step
};

struct ModificationPlan {
  GreedyMode mode = GreedyMode::Break;
  Node nodes = 0;
  std::vector<PlannedEdge> edges;
  double total = 0.0;     // Σ objective_delta
  bool exhausted = false;  // search space ran out before the budget
  std::size_t evaluations = 0;
  std::size_t unconverged = 0;  // candidate evaluations that hit m_max
  double eigenvector_drift = 0.0;  // MIOBI: ‖VᵀV − I‖_F after the last update

  /// One rank-2 update per step.
  std::vector<LowRankUpdate> updates() const;
  /// ΔA as one factored update.
  LowRankUpdate cumulative() const;
  SparseSymGraph apply(const SparseSymGraph& g) const;
};

/// Sequential greedy: at each step evaluates trace_fun_update over the
/// search space and keeps the best candidate (minimum for Break, maximum
/// for Make; ties go to the earlier candidate).
ModificationPlan greedy_krylov(const SparseSymGraph& a, const GreedyConfig& cfg,
                               const ScalarFunction& f);
ModificationPlan greedy_krylov(const SparseSymGraph& a, const GreedyConfig& cfg,
                               const ScalarFunction& f, const CentralityRanking& r);

struct MiobiState {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  static MiobiState initial(const SparseSymGraph& a, Eigen::Index h);
  /// Σ_j f(λ_j + 2δ u_j(s) u_j(t)) − f(λ_j)
  double score(const ScalarFunction& f, NodePair p, double delta) const;
  /// First-order update for X = δ(1_s1_tᵀ + 1_t1_sᵀ). Correction terms with
  /// |λ_j − λ_i| < 1e-10 are skipped.
  void update(NodePair p, double delta);
  /// ‖VᵀV − I‖_F; the first-order updates do not re-orthonormalize.
  double drift() const;
};

/// Greedy loop scored by first-order eigenpair updates of the h dominant
/// (largest magnitude) eigenpairs.
ModificationPlan miobi(const SparseSymGraph& a, const GreedyConfig& cfg,
                       const ScalarFunction& f, int h = 25);
ModificationPlan miobi(const SparseSymGraph& a, const GreedyConfig& cfg,
                       const ScalarFunction& f, int h, const CentralityRanking& r);

/// One-shot selection of the k highest pairs under ≤₁ on the initial graph.
/// Step objectives are evaluated with trace_fun_update for reporting.
ModificationPlan eigenv_baseline(const SparseSymGraph& a, std::size_t k, GreedyMode mode,
                                 const ScalarFunction& f, const KrylovOptions& opt = {});
ModificationPlan eigenv_baseline(const SparseSymGraph& a, std::size_t k, GreedyMode mode,
                                 const ScalarFunction& f, const KrylovOptions& opt,
                                 const CentralityRanking& r);

}  // namespace fconn

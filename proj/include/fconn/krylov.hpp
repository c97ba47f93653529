#pragma once

#include "fconn/graph.hpp"
#include "fconn/matfun.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace fconn {

// ---------------------------------------------------------------------------
// Low-rank perturbations

/// Symmetric perturbation X = U·B·Uᵀ with orthonormal U.
class LowRankUpdate {
 public:
  LowRankUpdate() = default;
  /// Throws ValidationError if U is not orthonormal to 1e-12 or B is not
  /// square symmetric of matching size.
  LowRankUpdate(Eigen::MatrixXd u, Eigen::MatrixXd b);

  /// Rank-2 update setting X_st = X_ts = delta.
  static LowRankUpdate edge(Node n, Node s, Node t, double delta);
  /// X = Σ delta_e (1_i1_jᵀ + 1_j1_iᵀ) over the listed pairs, with one
  /// indicator column per distinct endpoint. `Edge::w` carries the signed
  /// delta; repeated pairs are summed.
  static LowRankUpdate from_edges(Node n, std::span<const Edge> deltas);

  Node size() const { return u_.rows(); }
  Eigen::Index rank() const { return u_.cols(); }
  const Eigen::MatrixXd& u() const { return u_; }
  const Eigen::MatrixXd& b() const { return b_; }

  LowRankUpdate negated() const;
  Eigen::MatrixXd dense() const;

 private:
  Eigen::MatrixXd u_;
  Eigen::MatrixXd b_;
};

// ---------------------------------------------------------------------------
// Block Krylov decompositions

/// Full: block Arnoldi, every new block orthogonalized twice against the
/// whole basis. Local: block Lanczos, two passes against the previous two
/// blocks only.
enum class Orthogonalization { Full, Local };

struct KrylovOptions {
  int lag = 2;
  double tol = 1e-6;
  int max_iter = 100;
  /// Orthogonalization used by trace_fun_update.
  Orthogonalization trace_mode = Orthogonalization::Local;
  /// Cap on 8·n·(total basis columns) for multiple_frechet_eval, in bytes.
  std::size_t memory_budget = std::size_t{1} << 30;
};

/// Incremental block Krylov decomposition A𝓤_m = 𝓤_m𝓗_m + U_{m+1}H_{m+1,m}E_mᵀ.
///
/// Each new block comes from a column-pivoted QR; columns whose |R_ii| falls
/// below 1e-12·‖A‖₁ are deflated, so block sizes may shrink. In Local mode
/// the basis is only kept if `keep_basis` is set (the trace-only Lanczos
/// path needs just the last two blocks).
class KrylovDecomposition {
 public:
  KrylovDecomposition(const SparseMatrix& a, const Eigen::MatrixXd& start,
                      Orthogonalization mode, bool keep_basis = true);

  /// Appends the pending block and computes the next one. Returns false if
  /// there was nothing to append (the space is exhausted).
  bool advance();

  /// No further block can be appended: the basis spans an invariant
  /// subspace (or, in Local mode, reached dimension n).
  bool exhausted() const { return pending_cols_ == 0; }

  int blocks() const { return static_cast<int>(block_start_.size()); }
  Eigen::Index dim() const { return dim_; }
  Eigen::Index block_size(int k) const;
  /// Offset of block k (0-based) inside the basis.
  Eigen::Index block_offset(int k) const { return block_start_[static_cast<std::size_t>(k)]; }

  /// 𝓤_m. Requires keep_basis.
  Eigen::Ref<const Eigen::MatrixXd> basis() const;
  /// Block k of 𝓤_m; always available for the last two blocks.
  Eigen::MatrixXd block(int k) const;
  /// The projected matrix 𝓗_m (dim × dim).
  Eigen::Ref<const Eigen::MatrixXd> projected() const { return h_.topLeftCorner(dim_, dim_); }
  /// W_m = 𝓤_mᵀ U_start = [R_0; 0] (dim × start columns).
  Eigen::MatrixXd start_coefficients() const;
  /// H_{m+1,m} (pending block size × last block size).
  const Eigen::MatrixXd& coupling() const { return coupling_; }
  /// U_{m+1}, the pending orthonormal block.
  Eigen::Ref<const Eigen::MatrixXd> pending() const { return pending_.leftCols(pending_cols_); }
  /// Upper bound on the half-bandwidth of 𝓗_m in Local mode.
  Eigen::Index bandwidth() const { return bandwidth_; }
  Orthogonalization mode() const { return mode_; }
  double norm_estimate() const { return anorm_; }

 private:
  /// QR with deflation of z; returns the orthonormal factor in pending_ and
  /// R·Pᵀ in r.
  void factor(Eigen::MatrixXd z, Eigen::MatrixXd& r);
  void reserve(Eigen::Index cols);

  const SparseMatrix* a_;
  Orthogonalization mode_;
  bool keep_basis_;
  double anorm_ = 0.0;
  double drop_tol_ = 0.0;

  Eigen::MatrixXd basis_;  // n × capacity (Full, or keep_basis)
  Eigen::MatrixXd prev_, last_;  // last two blocks when the basis is not kept
  Eigen::MatrixXd h_;
  Eigen::Index dim_ = 0;
  std::vector<Eigen::Index> block_start_;

  Eigen::MatrixXd pending_;
  Eigen::Index pending_cols_ = 0;
  Eigen::MatrixXd r0_;
  Eigen::MatrixXd coupling_;
  Eigen::Index bandwidth_ = 0;
};

// ---------------------------------------------------------------------------
// Low-rank function updates

struct FunUpdateResult {
  Eigen::MatrixXd basis;  // 𝓤_m
  Eigen::MatrixXd core;   // Δ̃_m f
  int iterations = 0;
  bool converged = false;

  /// (𝓤 Δ̃ 𝓤ᵀ)_ij
  double entry(Node i, Node j) const;
  /// Tr(𝓤 Δ̃ 𝓤ᵀ) = Tr(Δ̃) for orthonormal 𝓤.
  double trace() const { return core.trace(); }
  Eigen::MatrixXd dense() const { return basis * core * basis.transpose(); }
};

/// Low-rank approximation of f(A + X) − f(A) by block Arnoldi. Stops at the
/// first m > lag with ‖Δ̃_m − pad(Δ̃_{m−lag})‖₂ ≤ tol; an exhausted Krylov
/// space gives the exact result.
FunUpdateResult fun_update(const SparseMatrix& a, const LowRankUpdate& x,
                           const ScalarFunction& f, const KrylovOptions& opt = {});

struct TraceUpdate {
  double delta = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Tr f(A + X) − Tr f(A) from the eigenvalues of 𝓗_m + W_m B W_mᵀ and 𝓗_m,
/// with block Lanczos (or block Arnoldi if opt.trace_mode is Full). Stops at
/// the first m > lag with
/// |Δ_mλ − Δ_{m−lag}λ| < tol.
TraceUpdate trace_fun_update(const SparseMatrix& a, const LowRankUpdate& x,
                             const ScalarFunction& f, const KrylovOptions& opt = {});

// ---------------------------------------------------------------------------
// Fréchet derivatives along 1_i 1_jᵀ

struct FrechetResult {
  Eigen::MatrixXd u;     // basis of K_m(M, 1_i)
  Eigen::MatrixXd v;     // basis of K_m(M, 1_j)
  Eigen::MatrixXd core;  // L̃
  int iterations = 0;
  bool converged = false;

  Eigen::MatrixXd dense() const { return u * core * v.transpose(); }
  double entry(Node h, Node k) const;
};

/// Approximates L_f(M, 1_i 1_jᵀ) ≈ 𝓤 L̃ 𝓥ᵀ, L̃ being the (1,2) block of f of
/// the projected augmented matrix [[𝓗, e₁e₁ᵀ], [0, 𝓖]].
FrechetResult frechet_eval(const SparseMatrix& m, Node i, Node j,
                           const ScalarFunction& f, const KrylovOptions& opt = {});

struct MultiFrechetResult {
  struct EdgeCore {
    NodePair pair;  // direction 1_u 1_vᵀ
    Eigen::MatrixXd core;
    int iterations = 0;  // m_(u,v)
    bool converged = false;
  };

  std::map<Node, Eigen::MatrixXd> bases;  // node → 𝓤^(node), m_node columns
  std::vector<EdgeCore> edges;            // in the order of F

  /// (L_f(M, 1_u 1_vᵀ))_hk approximated from the stored core of edge `e`.
  double entry(std::size_t e, Node h, Node k) const;
};

/// Batched frechet_eval over F sharing one Krylov basis per node of V(F).
/// Throws ResourceError when 8·n·(total basis columns) would exceed
/// opt.memory_budget.
MultiFrechetResult multiple_frechet_eval(const SparseMatrix& m,
                                         std::span<const NodePair> f_set,
                                         const ScalarFunction& f,
                                         const KrylovOptions& opt = {});

// ---------------------------------------------------------------------------
// f(A)v and trace estimation

/// f(A)v by single-vector Lanczos with full reorthogonalization. Converged
/// when successive iterates differ by at most tol relative. Throws
/// ConvergenceError if max_dim steps do not suffice.
Eigen::VectorXd lanczos_fun_action(const SparseMatrix& a, const Eigen::VectorXd& v,
                                   const ScalarFunction& f, double tol = 1e-8,
                                   int max_dim = 80);

/// Hutch++ estimate of Tr f(A): n_probes/2 Rademacher sketch vectors span
/// Q (via f(A)S), the remaining n_probes/2 estimate the deflated remainder.
/// When n ≤ n_probes/2 the trace is summed exactly from f(A)1_i instead.
double estimate_trace_f(const SparseMatrix& a, const ScalarFunction& f,
                        int n_probes, std::uint64_t seed);

}  // namespace fconn

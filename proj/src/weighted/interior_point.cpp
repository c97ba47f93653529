#include "fconn/error.hpp"
#include "fconn/weighted.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>

namespace fconn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Split variables z = [p; q]; variable j moves x_edge[j] by sign[j]·z_j and
// lives in (0, cap[j]).
struct SplitSpace {
  std::vector<std::size_t> edge;
  std::vector<double> sign;
  Eigen::VectorXd cap;
  std::size_t nf = 0;

  explicit SplitSpace(const WeightedProblem& prob) : nf(prob.size()) {
    std::vector<double> caps;
    for (std::size_t e = 0; e < nf; ++e) {
      const auto k = static_cast<Eigen::Index>(e);
      if (prob.upper()(k) > 0.0) {
        edge.push_back(e);
        sign.push_back(1.0);
        caps.push_back(prob.upper()(k));
      }
    }
    for (std::size_t e = 0; e < nf; ++e) {
      const auto k = static_cast<Eigen::Index>(e);
      if (prob.lower()(k) < 0.0) {
        edge.push_back(e);
        sign.push_back(-1.0);
        caps.push_back(-prob.lower()(k));
      }
    }
    cap = Eigen::Map<Eigen::VectorXd>(caps.data(), static_cast<Eigen::Index>(caps.size()));
  }

  Eigen::Index size() const { return cap.size(); }

  Eigen::VectorXd to_x(const Eigen::VectorXd& z) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nf));
    for (Eigen::Index j = 0; j < size(); ++j)
      x(static_cast<Eigen::Index>(edge[static_cast<std::size_t>(j)])) +=
          sign[static_cast<std::size_t>(j)] * z(j);
    return x;
  }

  /// Largest α with z + αd strictly inside (0, cap) and Σ(z + αd) < k.
  double max_step(const Eigen::VectorXd& z, const Eigen::VectorXd& d, double k) const {
    double alpha = kInf;
    for (Eigen::Index j = 0; j < size(); ++j) {
      if (d(j) < 0.0) alpha = std::min(alpha, -z(j) / d(j));
      if (d(j) > 0.0) alpha = std::min(alpha, (cap(j) - z(j)) / d(j));
    }
    const double ds = d.sum();
    if (ds > 0.0) alpha = std::min(alpha, (k - z.sum()) / ds);
    return alpha;
  }
};

struct Barrier {
  const WeightedProblem& prob;
  const SplitSpace& space;
  double mu = 1.0;
  int evaluations = 0;

  struct Point {
    Eigen::VectorXd z;
    double value = kInf;  // Φ_μ
    double phi = 0.0;     // φ_A
    Eigen::VectorXd grad;  // ∇Φ_μ
    Eigen::VectorXd phi_grad;  // ∇φ_A over F
  };

  /// Φ_μ(z) = −σφ_A(x(z)) − μ[Σ log z_j + Σ log(cap_j − z_j) + log s].
  /// Returns a point with value +∞ when z is infeasible or f leaves its
  /// domain.
  Point evaluate(const Eigen::VectorXd& z) {
    Point pt;
    pt.z = z;
    const double s = prob.budget() - z.sum();
    if (s <= 0.0 || (z.array() <= 0.0).any() || (z.array() >= space.cap.array()).any())
      return pt;
    ObjectiveGradient og;
    try {
      ++evaluations;
      og = objective_and_gradient(prob, space.to_x(z));
    } catch (const DomainError&) {
      return pt;
    }
    if (!std::isfinite(og.value) || !og.grad.allFinite()) return pt;
    const double sigma = prob.sense();
    const Eigen::ArrayXd za = z.array();
    const Eigen::ArrayXd ra = space.cap.array() - za;
    pt.phi = og.value;
    pt.phi_grad = og.grad;
    pt.value = -sigma * og.value - mu * (za.log().sum() + ra.log().sum() + std::log(s));
    pt.grad.resize(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      const auto e = static_cast<Eigen::Index>(space.edge[static_cast<std::size_t>(j)]);
      pt.grad(j) = -sigma * space.sign[static_cast<std::size_t>(j)] * og.grad(e) -
                   mu * (1.0 / za(j) - 1.0 / ra(j)) + mu / s;
    }
    return pt;
  }

  /// ∇(−σφ_A) with respect to z.
  Eigen::VectorXd phi_part(const Point& pt) const {
    Eigen::VectorXd g(space.size());
    for (Eigen::Index j = 0; j < g.size(); ++j)
      g(j) = -prob.sense() * space.sign[static_cast<std::size_t>(j)] *
             pt.phi_grad(static_cast<Eigen::Index>(space.edge[static_cast<std::size_t>(j)]));
    return g;
  }

  /// Box part of the barrier Hessian; the budget part is budget_curvature·11ᵀ.
  Eigen::VectorXd barrier_diag(const Eigen::VectorXd& z) const {
    const Eigen::ArrayXd za = z.array();
    const Eigen::ArrayXd ra = space.cap.array() - za;
    return (mu * (1.0 / za.square() + 1.0 / ra.square())).matrix();
  }
  double budget_curvature(const Eigen::VectorXd& z) const {
    const double s = prob.budget() - z.sum();
    return mu / (s * s);
  }

  /// Hessian of Φ_μ with respect to z.
  Eigen::MatrixXd hessian_z(const Point& pt, int& count) {
    ++count;
    const HessianResult h = hessian(prob, space.to_x(pt.z));
    const Eigen::Index nz = space.size();
    const double sigma = prob.sense();
    Eigen::MatrixXd k(nz, nz);
    for (Eigen::Index i = 0; i < nz; ++i) {
      const auto ei = static_cast<Eigen::Index>(space.edge[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < nz; ++j) {
        const auto ej = static_cast<Eigen::Index>(space.edge[static_cast<std::size_t>(j)]);
        k(i, j) = -sigma * space.sign[static_cast<std::size_t>(i)] *
                  space.sign[static_cast<std::size_t>(j)] * h.matrix(ei, ej);
      }
    }
    const double s = prob.budget() - pt.z.sum();
    const Eigen::ArrayXd za = pt.z.array();
    const Eigen::ArrayXd ra = space.cap.array() - za;
    k.diagonal().array() += mu * (1.0 / za.square() + 1.0 / ra.square());
    k.array() += mu / (s * s);
    return k;
  }
};

/// Step s with the change y_φ of ∇(−σφ_A) along it.
struct CurvaturePair {
  Eigen::VectorXd s, y;
};

/// Two-loop recursion returning −H·g, with H approximating the inverse of
/// B + K: B = diag(D) + ρ11ᵀ is the exact barrier Hessian at the current
/// point (box diagonal D, budget term ρ = μ/s²) and K the Hessian of −σφ_A.
/// Each stored y_φ is completed to y_φ + B·s with the current B, so the
/// pairs agree with the initial matrix (B + |c|I)⁻¹, c being the curvature
/// of −σφ_A along the last step. Pairs are Powell-damped against that
/// initial matrix, keeping H positive definite where φ_A is concave.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& g, const Eigen::VectorXd& diag,
                                double rho, const std::deque<CurvaturePair>& mem) {
  double c = 0.0;
  if (!mem.empty()) c = std::abs(mem.back().s.dot(mem.back().y)) / mem.back().s.squaredNorm();
  c = std::max(c, 1e-8 * std::max(1.0, diag.maxCoeff()));
  const Eigen::ArrayXd d0 = diag.array() + c;
  auto b0 = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return (d0 * v.array()).matrix() + Eigen::VectorXd::Constant(v.size(), rho * v.sum());
  };
  const Eigen::ArrayXd dinv = 1.0 / d0;
  auto h0 = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    // Sherman–Morrison for the rank-one budget term.
    const Eigen::VectorXd dv = (dinv * v.array()).matrix();
    return dv - (rho * dv.sum() / (1.0 + rho * dinv.sum())) * dinv.matrix();
  };

  std::vector<Eigen::VectorXd> ys;
  ys.reserve(mem.size());
  for (const CurvaturePair& p : mem) {
    const Eigen::VectorXd bs = b0(p.s) - c * p.s;  // barrier part B·s
    Eigen::VectorXd y = p.y + bs;
    const Eigen::VectorXd b0s = bs + c * p.s;
    const double sb0s = p.s.dot(b0s);
    const double sy = p.s.dot(y);
    if (sy < 0.2 * sb0s) {
      const double theta = 0.8 * sb0s / (sb0s - sy);
      y = theta * y + (1.0 - theta) * b0s;
    }
    ys.push_back(std::move(y));
  }

  Eigen::VectorXd q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].s.dot(q) / ys[i].dot(mem[i].s);
    q -= alpha[i] * ys[i];
  }
  q = h0(q);
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = ys[i].dot(q) / ys[i].dot(mem[i].s);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

Eigen::VectorXd newton_direction(const Eigen::MatrixXd& k, const Eigen::VectorXd& g) {
  const Eigen::Index n = k.rows();
  double shift = 0.0;
  const double scale = std::max(1.0, k.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 30; ++attempt) {
    Eigen::MatrixXd m = k;
    m.diagonal().array() += shift;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd d = llt.solve(-g);
      if (d.allFinite() && g.dot(d) < 0.0) return d;
    }
    shift = shift == 0.0 ? 1e-8 * scale : shift * 10.0;
  }
  return Eigen::VectorXd::Zero(n);
}

}  // namespace

InteriorPointResult interior_point_solve(const WeightedProblem& prob, InnerSolver inner,
                                         const BarrierConfig& bc) {
  if (!(bc.shrink > 1.0)) throw ValidationError("barrier shrink factor must exceed 1");
  if (!(bc.mu_min > 0.0)) throw ValidationError("mu_min must be positive");
  if (bc.max_outer < 1 || bc.max_inner < 1 || bc.history < 1)
    throw ValidationError("iteration limits must be positive");
  if (!(bc.boundary_fraction > 0.0 && bc.boundary_fraction < 1.0))
    throw ValidationError("boundary fraction must lie in (0, 1)");

  const auto t0 = std::chrono::steady_clock::now();
  const SplitSpace space(prob);
  const Eigen::Index nz = space.size();
  const double k = prob.budget();

  InteriorPointResult res;
  Barrier barrier{prob, space};

  Eigen::VectorXd z(nz);
  for (Eigen::Index j = 0; j < nz; ++j)
    z(j) = 0.01 * std::min(k / static_cast<double>(nz), space.cap(j));

  barrier.mu = 1.0;
  Barrier::Point pt = barrier.evaluate(z);
  if (!std::isfinite(pt.value)) throw DomainError("starting point is outside the domain of f");
  barrier.mu = bc.mu0 > 0.0 ? bc.mu0
                            : std::max(1.0, std::abs(pt.phi)) / static_cast<double>(prob.size());
  pt = barrier.evaluate(z);

  bool ok = true;
  for (int outer = 0; outer < bc.max_outer; ++outer) {
    std::deque<CurvaturePair> mem;
    bool inner_done = false;
    int stagnant = 0;
    for (int it = 0; it < bc.max_inner; ++it) {
      const double tol = bc.inner_tol * (1.0 + pt.phi_grad.cwiseAbs().maxCoeff());
      if (pt.grad.cwiseAbs().maxCoeff() <= tol) {
        inner_done = true;
        break;
      }
      ++res.inner_iterations;

      Eigen::VectorXd d;
      bool steepest = false;
      if (inner == InnerSolver::Hessian) {
        d = newton_direction(barrier.hessian_z(pt, res.hessian_evaluations), pt.grad);
        steepest = d.squaredNorm() == 0.0;
      } else {
        d = lbfgs_direction(pt.grad, barrier.barrier_diag(pt.z),
                            barrier.budget_curvature(pt.z), mem);
        steepest = !(pt.grad.dot(d) < 0.0);
      }
      if (steepest) {
        mem.clear();
        d = -pt.grad;
      }

      // Backtracking line search; on failure retry once along −∇Φ_μ.
      Barrier::Point next;
      bool accepted = false;
      for (int pass = 0; pass < 2 && !accepted; ++pass) {
        if (pass == 1) {
          if (steepest) break;
          mem.clear();
          d = -pt.grad;
        }
        const double slope = pt.grad.dot(d);
        double alpha = std::min(1.0, bc.boundary_fraction * space.max_step(pt.z, d, k));
        for (int h = 0; h <= bc.max_halvings; ++h) {
          next = barrier.evaluate(pt.z + alpha * d);
          if (next.value <= pt.value + bc.armijo * alpha * slope) {
            accepted = true;
            break;
          }
          // Safeguarded quadratic interpolation, falling back to the
          // backtracking factor when the trial point is infeasible.
          double next_alpha = alpha * bc.backtrack;
          if (std::isfinite(next.value)) {
            const double curv = next.value - pt.value - slope * alpha;
            if (curv > 0.0)
              next_alpha = std::clamp(-slope * alpha * alpha / (2.0 * curv), 0.1 * alpha,
                                      bc.backtrack * alpha);
          }
          alpha = next_alpha;
        }
      }
      if (!accepted) {
        // No decrease is resolvable at this precision; the iterate is as
        // good as the objective evaluations allow.
        inner_done = true;
        break;
      }

      // Decreases at rounding level mean the inner problem is solved as far
      // as double precision resolves it.
      const double gain = pt.value - next.value;
      stagnant = gain <= 1e-14 * (1.0 + std::abs(pt.value)) ? stagnant + 1 : 0;

      if (inner == InnerSolver::Lbfgs) {
        CurvaturePair p{next.z - pt.z, barrier.phi_part(next) - barrier.phi_part(pt)};
        if (p.s.squaredNorm() > 0.0) {
          mem.push_back(std::move(p));
          if (static_cast<int>(mem.size()) > bc.history) mem.pop_front();
        }
      }
      pt = std::move(next);
      if (stagnant >= 3) {
        inner_done = true;
        break;
      }
    }
    if (!inner_done) ok = false;

    ++res.outer_iterations;
    res.outer_objectives.push_back(pt.phi);
    res.outer_iterates.push_back(prob.clamp(space.to_x(pt.z)));
    res.final_mu = barrier.mu;
    if (barrier.mu < bc.mu_min) {
      res.converged = ok;
      break;
    }
    barrier.mu /= bc.shrink;
    pt = barrier.evaluate(pt.z);
    if (!std::isfinite(pt.value)) {
      ok = false;
      break;
    }
  }

  res.x = prob.clamp(space.to_x(pt.z));
  if (res.x.cwiseAbs().sum() > k * (1.0 + 1e-8))
    throw ValidationError("interior point iterate violates the budget");
  res.objective = pt.phi;
  res.evaluations = barrier.evaluations;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace fconn

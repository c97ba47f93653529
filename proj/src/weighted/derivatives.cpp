#include "fconn/error.hpp"
#include "fconn/weighted.hpp"

#include <cmath>

namespace fconn {

namespace {

Eigen::VectorXd gradient_from(const WeightedProblem& prob, const FunUpdateResult& d) {
  const auto& f_set = prob.edges();
  Eigen::VectorXd g(static_cast<Eigen::Index>(f_set.size()));
  for (std::size_t e = 0; e < f_set.size(); ++e) {
    const auto k = static_cast<Eigen::Index>(e);
    g(k) = 2.0 * (prob.fprime_cache()(k) + d.entry(f_set[e].u, f_set[e].v));
  }
  return g;
}

}  // namespace

double objective(const WeightedProblem& prob, const Eigen::VectorXd& x) {
  const LowRankUpdate up = prob.assemble(prob.clamp(x));
  return trace_fun_update(prob.graph().adjacency(), up, prob.function(), prob.krylov()).delta;
}

Eigen::VectorXd gradient(const WeightedProblem& prob, const Eigen::VectorXd& x) {
  const LowRankUpdate up = prob.assemble(prob.clamp(x));
  if (up.rank() == 0) return 2.0 * prob.fprime_cache();
  const FunUpdateResult d =
      fun_update(prob.graph().adjacency(), up, prob.derivative(), prob.krylov());
  return gradient_from(prob, d);
}

ObjectiveGradient objective_and_gradient(const WeightedProblem& prob,
                                         const Eigen::VectorXd& x) {
  ObjectiveGradient out;
  const LowRankUpdate up = prob.assemble(prob.clamp(x));
  if (up.rank() == 0) {
    out.grad = 2.0 * prob.fprime_cache();
    return out;
  }
  const SparseMatrix& a = prob.graph().adjacency();
  if (prob.function().kind() == FunctionKind::Exp) {
    // exp′ = exp, so one update gives both Tr Δ and the entries of Δ.
    const FunUpdateResult d = fun_update(a, up, prob.function(), prob.krylov());
    out.value = d.trace();
    out.grad = gradient_from(prob, d);
    out.krylov_iterations = d.iterations;
    return out;
  }
  const TraceUpdate t = trace_fun_update(a, up, prob.function(), prob.krylov());
  const FunUpdateResult d = fun_update(a, up, prob.derivative(), prob.krylov());
  out.value = t.delta;
  out.grad = gradient_from(prob, d);
  out.krylov_iterations = t.iterations + d.iterations;
  return out;
}

HessianResult hessian(const WeightedProblem& prob, const Eigen::VectorXd& x) {
  const SparseMatrix m = prob.perturbed(prob.clamp(x));
  const auto& f_set = prob.edges();
  const MultiFrechetResult lf =
      multiple_frechet_eval(m, f_set, prob.derivative(), prob.krylov());
  const auto nf = static_cast<Eigen::Index>(f_set.size());
  HessianResult out;
  out.matrix.resize(nf, nf);
  for (Eigen::Index s = 0; s < nf; ++s) {
    const auto e = static_cast<std::size_t>(s);
    for (Eigen::Index t = 0; t < nf; ++t) {
      const NodePair p = f_set[static_cast<std::size_t>(t)];
      out.matrix(s, t) = 2.0 * (lf.entry(e, p.u, p.v) + lf.entry(e, p.v, p.u));
    }
  }
  out.asymmetry = (out.matrix - out.matrix.transpose()).cwiseAbs().maxCoeff();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

}  // namespace fconn

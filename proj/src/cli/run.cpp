#include "fconn/cli.hpp"
#include "fconn/error.hpp"
#include "fconn/weighted.hpp"

#include <chrono>
#include <cmath>
#include <set>

namespace fconn {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

WeightedMode weighted_mode(Subcommand s) {
  switch (s) {
    case Subcommand::Downgrade: return WeightedMode::Downgrade;
    case Subcommand::Add: return WeightedMode::Add;
    case Subcommand::Tune: return WeightedMode::Tune;
    default: return WeightedMode::Rewire;
  }
}

void run_greedy(const RunSpec& spec, const SparseSymGraph& g, const ScalarFunction& f,
                TraceVariationReport& rep) {
  const Method m = spec.resolved_method();
  const GreedyMode mode = spec.subcommand == Subcommand::Break ? GreedyMode::Break
                                                               : GreedyMode::Make;
  GreedyConfig cfg;
  cfg.budget = static_cast<std::size_t>(spec.budget);
  cfg.q = spec.q;
  cfg.mode = mode;
  cfg.krylov = spec.krylov_options();
  cfg.threads = spec.threads;
  cfg.strategy = spec.strategy.value_or(default_strategy(mode, m == Method::Miobi));

  const auto t0 = Clock::now();
  ModificationPlan plan;
  if (m == Method::Krylov) plan = greedy_krylov(g, cfg, f);
  else if (m == Method::Miobi) plan = miobi(g, cfg, f, spec.miobi_h);
  else plan = eigenv_baseline(g, cfg.budget, mode, f, cfg.krylov);
  rep.seconds = elapsed(t0);

  // MIOBI step scores are first-order estimates; report the actual change
  // of each step on the graph it was applied to.
  double cum = 0.0;
  SparseSymGraph current = g;
  for (const PlannedEdge& e : plan.edges) {
    double step = e.objective_delta;
    if (m == Method::Miobi) {
      const LowRankUpdate up = LowRankUpdate::edge(g.nodes(), e.pair.u, e.pair.v, e.delta);
      step = trace_fun_update(current.adjacency(), up, f, cfg.krylov).delta;
      const Edge change{e.pair.u, e.pair.v, e.delta};
      current = current.with_changes(std::span<const Edge>(&change, 1));
    }
    cum += step;
    rep.edges.push_back({e.pair, e.delta, cum});
  }
  rep.delta_trace = cum;
  rep.iterations = plan.evaluations;
  rep.unconverged = plan.unconverged;
  rep.eigenvector_drift = plan.eigenvector_drift;
  rep.converged = plan.unconverged == 0;
  if (plan.exhausted)
    rep.warnings.push_back("search space exhausted after " +
                           std::to_string(plan.edges.size()) + " edges");
}

void run_weighted(const RunSpec& spec, const SparseSymGraph& g, const ScalarFunction& f,
                  TraceVariationReport& rep) {
  const WeightedMode mode = weighted_mode(spec.subcommand);
  const KrylovOptions kopt = spec.krylov_options();
  const InnerSolver inner =
      spec.resolved_method() == Method::Hessian ? InnerSolver::Hessian : InnerSolver::Lbfgs;

  const auto t0 = Clock::now();
  const CandidateSelection cand = select_candidates(g, mode, spec.n_p, spec.n_f, f);
  const WeightedProblem prob(g, cand.f_set, mode, spec.budget, f, spec.upper, kopt);
  const InteriorPointResult ip = interior_point_solve(prob, inner);
  rep.seconds = elapsed(t0);
  rep.warnings.insert(rep.warnings.end(), cand.warnings.begin(), cand.warnings.end());

  // Entries at barrier-noise level are dropped from the reported change.
  const double cutoff = 1e-7 * spec.budget;
  std::vector<Edge> applied;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(ip.x.size());
  for (std::size_t e = 0; e < prob.size(); ++e) {
    const auto k = static_cast<Eigen::Index>(e);
    if (std::abs(ip.x(k)) <= cutoff) continue;
    x(k) = ip.x(k);
    applied.push_back({prob.edges()[e].u, prob.edges()[e].v, ip.x(k)});
    const LowRankUpdate up = LowRankUpdate::from_edges(g.nodes(), applied);
    const double cum = trace_fun_update(g.adjacency(), up, f, kopt).delta;
    rep.edges.push_back({prob.edges()[e], ip.x(k), cum});
  }
  rep.delta_trace = rep.edges.empty() ? 0.0 : rep.edges.back().cumulative;
  rep.iterations = static_cast<std::size_t>(ip.inner_iterations);
  rep.outer_iterations = static_cast<std::size_t>(ip.outer_iterations);
  rep.converged = ip.converged;
  if (!ip.converged) rep.warnings.push_back("interior point did not reach its tolerances");
}

}  // namespace

TraceVariationReport run(const RunSpec& spec) {
  spec.validate();
  return run(spec, load_graph(spec.input, spec.format));
}

TraceVariationReport run(const RunSpec& spec, const SparseSymGraph& g) {
  spec.validate();
  if (g.nodes() == 0) throw ValidationError("graph has no nodes");
  double lambda_max = 0.0;
  if (function_needs_lambda_max(spec.function)) lambda_max = eigenvector_centrality(g).eigenvalue;
  const ScalarFunction f = parse_function(spec.function, lambda_max);

  TraceVariationReport rep;
  rep.subcommand = spec.subcommand;
  rep.method = spec.resolved_method();
  rep.function = f.name();
  rep.nodes = g.nodes();
  rep.edge_count = g.edge_count();
  rep.trace_f = estimate_trace_f(g.adjacency(), f, spec.probes, spec.seed);

  if (is_greedy(spec.subcommand)) run_greedy(spec, g, f, rep);
  else if (is_weighted(spec.subcommand)) run_weighted(spec, g, f, rep);

  rep.delta_t = rep.trace_f != 0.0 ? std::abs(rep.delta_trace) / std::abs(rep.trace_f) : 0.0;
  return rep;
}

std::vector<ComparisonRow> compare(const std::vector<RunSpec>& specs) {
  if (specs.empty()) throw ValidationError("nothing to compare");
  const RunSpec& first = specs.front();
  for (const RunSpec& s : specs) {
    s.validate();
    if (s.input != first.input || s.function != first.function || s.budget != first.budget ||
        s.subcommand != first.subcommand)
      throw ValidationError("compared runs must share input, function, budget and subcommand");
  }
  const SparseSymGraph g = load_graph(first.input, first.format);

  std::vector<ComparisonRow> rows;
  std::map<std::string, int> seen;
  for (const RunSpec& s : specs) {
    ComparisonRow row;
    row.label = to_string(s.resolved_method());
    if (const int k = ++seen[row.label]; k > 1) row.label += "#" + std::to_string(k);
    row.report = run(s, g);
    rows.push_back(std::move(row));
  }
  for (ComparisonRow& a : rows) {
    std::set<NodePair> mine;
    for (const ChosenEdge& e : a.report.edges) mine.insert(e.pair);
    for (const ComparisonRow& b : rows) {
      std::size_t c = 0;
      for (const ChosenEdge& e : b.report.edges) c += mine.count(e.pair);
      a.common.push_back(c);
    }
  }
  return rows;
}

}  // namespace fconn

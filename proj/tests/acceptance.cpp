// Acceptance criteria. `acceptance N` checks criterion N and exits 0 (pass),
// 1 (fail) or 77 (skipped: dataset absent); without arguments all run.
#include "fconn/cli.hpp"
#include "fconn/error.hpp"
#include "fconn/greedy.hpp"
#include "fconn/krylov.hpp"
#include "fconn/weighted.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <set>
#include <string>

using namespace fconn;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict verdict(bool ok, std::string detail) {
  return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)};
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::function<double(double)> kExp = [](double z) { return std::exp(z); };
const std::function<double(double)> kSinh = [](double z) { return std::sinh(z); };
const std::function<double(double)> kCosh = [](double z) { return std::cosh(z); };

Eigen::MatrixXd unit_pair(Node n, NodePair p) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  e(p.u, p.v) = 1.0;
  return e;
}

/// A random instance for the derivative checks: a weighted connected graph
/// and a mixed F (Rewire) or existing F (Tune), with x inside the box.
struct WeightedInstance {
  WeightedProblem problem;
  Eigen::VectorXd x;
};

WeightedInstance weighted_instance(Node n, std::size_t n_f, const ScalarFunction& f,
                                   std::mt19937_64& rng) {
  const SparseSymGraph g = oracle::random_connected(n, 0.12, rng, true);
  const bool rewire = rng() % 2;
  std::set<NodePair> s;
  while (s.size() < n_f)
    s.insert(rewire && s.size() % 2 ? oracle::random_non_edge(g, rng) : oracle::random_edge(g, rng));
  WeightedProblem p(g, {s.begin(), s.end()}, rewire ? WeightedMode::Rewire : WeightedMode::Tune,
                    2.0, f);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  Eigen::VectorXd x(p.size());
  for (Eigen::Index e = 0; e < x.size(); ++e)
    x(e) = p.lower()(e) + u(rng) * (p.upper()(e) - p.lower()(e));
  if (x.lpNorm<1>() > 1.0) x /= x.lpNorm<1>();
  return {std::move(p), x};
}

Eigen::MatrixXd dense_point(const WeightedProblem& p, const Eigen::VectorXd& x) {
  std::vector<Edge> d;
  for (std::size_t e = 0; e < p.size(); ++e)
    d.push_back({p.edges()[e].u, p.edges()[e].v, x(static_cast<Eigen::Index>(e))});
  return p.graph().dense() + oracle::dense_update(p.graph().nodes(), d);
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
  std::mt19937_64 rng(101);
  KrylovOptions opt;
  opt.tol = 1e-10;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Node n = 10 + static_cast<Node>(rng() % 51);
    const SparseSymGraph g = oracle::random_connected(n, 3.0 / n, rng);
    const bool remove = rng() % 2;
    const NodePair p = remove ? oracle::random_edge(g, rng) : oracle::random_non_edge(g, rng);
    const double d = remove ? -1.0 : 1.0;
    const double got =
        trace_fun_update(g.adjacency(), LowRankUpdate::edge(n, p.u, p.v, d), ScalarFunction::exp(), opt).delta;
    const double want = oracle::trace_exp_diff(g.dense(), oracle::dense_update(n, {{p.u, p.v, d}}));
    worst = std::max(worst, oracle::rel_err(got, want));
  }
  return verdict(worst <= 1e-7, fmt("50 graphs, max rel err %.2e (tol 1e-7)", worst));
}

Verdict polynomial_exactness() {
  std::mt19937_64 rng(102);
  KrylovOptions opt;
  opt.max_iter = 4;
  opt.tol = 1e-300;
  const ScalarFunction cube = ScalarFunction::poly({0.0, 0.0, 0.0, 1.0});
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Node n = 20 + static_cast<Node>(rng() % 41);
    const SparseSymGraph g = oracle::random_connected(n, 0.1, rng, true);
    std::vector<Edge> d;
    for (int e = 0; e < 3; ++e) {
      const NodePair p = oracle::random_pair(n, rng);
      d.push_back({p.u, p.v, std::uniform_real_distribution<double>(-1.0, 1.0)(rng)});
    }
    const FunUpdateResult r = fun_update(g.adjacency(), LowRankUpdate::from_edges(n, d), cube, opt);
    const Eigen::MatrixXd a = g.dense();
    const Eigen::MatrixXd m = a + oracle::dense_update(n, d);
    const Eigen::MatrixXd want = m * m * m - a * a * a;
    worst = std::max(worst, (r.dense() - want).norm() / want.norm());
  }
  return verdict(worst <= 1e-10, fmt("20 instances, m = 4, max rel err %.2e (tol 1e-10)", worst));
}

Verdict gradient_check() {
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const bool sinh = t % 2;
    const WeightedInstance in = weighted_instance(
        20 + static_cast<Node>(rng() % 21), 4 + rng() % 7,
        sinh ? ScalarFunction::sinh() : ScalarFunction::exp(), rng);
    const auto& f = sinh ? kSinh : kExp;
    const Eigen::VectorXd g = gradient(in.problem, in.x);
    const double h = 1e-4;
    for (Eigen::Index e = 0; e < g.size(); ++e) {
      Eigen::VectorXd xp = in.x, xm = in.x;
      xp(e) += h;
      xm(e) -= h;
      const double fd =
          (oracle::trace_fun(dense_point(in.problem, xp), f) - oracle::trace_fun(dense_point(in.problem, xm), f)) /
          (2 * h);
      worst = std::max(worst, oracle::rel_err(g(e), fd));
    }
  }
  return verdict(worst <= 1e-5, fmt("20 instances, max componentwise rel err %.2e (tol 1e-5)", worst));
}

Verdict hessian_check() {
  std::mt19937_64 rng(104);
  double worst = 0.0;
  bool symmetric = true;
  for (int t = 0; t < 10; ++t) {
    const WeightedInstance in =
        weighted_instance(15 + static_cast<Node>(rng() % 16), 2 + rng() % 5, ScalarFunction::exp(), rng);
    const WeightedProblem& p = in.problem;
    const HessianResult hr = hessian(p, in.x);
    symmetric = symmetric && hr.matrix == hr.matrix.transpose();
    // Jacobian of the dense gradient 2 exp(A + X)_hk by central differences.
    const Eigen::Index nf = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd jac(nf, nf);
    const double h = 1e-5;
    for (Eigen::Index s = 0; s < nf; ++s) {
      Eigen::VectorXd xp = in.x, xm = in.x;
      xp(s) += h;
      xm(s) -= h;
      const Eigen::MatrixXd ep = oracle::expm(dense_point(p, xp)), em = oracle::expm(dense_point(p, xm));
      for (Eigen::Index u = 0; u < nf; ++u) {
        const NodePair q = p.edges()[static_cast<std::size_t>(u)];
        jac(u, s) = 2.0 * (ep(q.u, q.v) - em(q.u, q.v)) / (2 * h);
      }
    }
    worst = std::max(worst, (hr.matrix - jac).cwiseAbs().maxCoeff() / jac.cwiseAbs().maxCoeff());
  }
  return verdict(worst <= 1e-4 && symmetric,
                 fmt("10 instances, max |H - J| / max |J| = %.2e (tol 1e-4), symmetric: %s", worst,
                     symmetric ? "yes" : "no"));
}

Verdict identity_check() {
  std::mt19937_64 rng(105);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Node n = 5 + static_cast<Node>(rng() % 26);
    const SparseSymGraph g = oracle::random_connected(n, 0.2, rng, true);
    const Eigen::MatrixXd a = g.dense();
    const NodePair p = oracle::random_pair(n, rng);
    const bool sinh = t % 2;
    const ScalarFunction f = sinh ? ScalarFunction::sinh() : ScalarFunction::exp();
    const SymDense sa(a);
    const double tr = block_frechet(f, sa, sa, unit_pair(n, p)).trace();
    const double want = sinh ? oracle::fun_sym(a, kCosh)(p.u, p.v) : oracle::expm(a)(p.u, p.v);
    worst = std::max(worst, std::abs(tr - want) / std::max(1.0, std::abs(want)));
  }
  return verdict(worst <= 1e-9, fmt("100 triples, max err %.2e (tol 1e-9, relative above 1)", worst));
}

Verdict greedy_optimality() {
  std::mt19937_64 rng(106);
  int compared = 0, matched = 0;
  GreedyConfig cfg;
  cfg.mode = GreedyMode::Break;
  cfg.strategy = Strategy::DgFull;
  cfg.budget = 1;
  for (int t = 0; t < 30; ++t) {
    const Node n = 6 + static_cast<Node>(rng() % 25);
    const SparseSymGraph g = oracle::random_connected(n, 0.2, rng);
    std::vector<std::pair<double, NodePair>> exact;
    for (const Edge& e : g.edges())
      exact.push_back({oracle::trace_exp_diff(g.dense(), oracle::dense_update(n, {{e.i, e.j, -e.w}})), e.pair()});
    std::sort(exact.begin(), exact.end());
    if (exact.size() > 1 && exact[1].first - exact[0].first <= 1e-9) continue;
    ++compared;
    const ModificationPlan plan = greedy_krylov(g, cfg, ScalarFunction::exp());
    matched += plan.edges.at(0).pair == exact[0].second;
  }
  return verdict(compared > 0 && matched == compared,
                 fmt("%d/%d graphs with gap > 1e-9 match brute force", matched, compared));
}

std::optional<std::filesystem::path> dataset(const std::string& name) {
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("FCONN_DATA_DIR")) dirs.emplace_back(env);
  dirs.emplace_back(FCONN_DEFAULT_DATA_DIR);
  for (const auto& d : dirs)
    for (const char* ext : {".edges", ".mtx"})
      if (std::filesystem::exists(d / (name + ext))) return d / (name + ext);
  return std::nullopt;
}

Verdict missing(const std::string& name) {
  return {Outcome::Skip, "dataset '" + name + "' not found (data/ or $FCONN_DATA_DIR)"};
}

bool in_band(double got, double want, double rel) { return std::abs(got - want) <= rel * want; }

Verdict london() {
  const auto path = dataset("london");
  if (!path) return missing("london");
  const SparseSymGraph g = load_graph(*path);
  RunSpec s;
  s.input = *path;
  s.budget = 50;
  s.subcommand = Subcommand::Break;
  s.method = Method::Krylov;
  s.q = 250;
  const TraceVariationReport b = run(s, g);
  s.subcommand = Subcommand::Make;
  s.q = std::min<std::size_t>(1000, g.edge_count());
  const TraceVariationReport m = run(s, g);
  const bool ok = in_band(b.delta_t, 0.158, 0.15) && in_band(m.delta_t, 70.9, 0.15);
  return verdict(ok, fmt("break dT %.4f (0.158 +-15%%, %.0f s), make dT %.3f (70.9 +-15%%, %.0f s)",
                         b.delta_t, b.seconds, m.delta_t, m.seconds));
}

Verdict anaheim() {
  const auto path = dataset("anaheim");
  if (!path) return missing("anaheim");
  const SparseSymGraph g = load_graph(*path);
  RunSpec s;
  s.input = *path;
  s.budget = 50;
  s.subcommand = Subcommand::Make;
  // Every method is sequential, so the k = 50 plan has the smaller plans as prefixes.
  auto prefix_dt = [](const TraceVariationReport& r, std::size_t k) {
    return std::abs(r.edges.at(k - 1).cumulative) / std::abs(r.trace_f);
  };
  s.method = Method::Miobi;
  const TraceVariationReport mi = run(s, g);
  s.method = Method::Eigenv;
  const TraceVariationReport ev = run(s, g);
  bool ok = mi.edges.size() == 50 && ev.edges.size() == 50;
  std::string detail;
  for (std::size_t q : {50, 250, 1000}) {
    s.method = Method::Krylov;
    s.q = q;
    const TraceVariationReport kr = run(s, g);
    ok = ok && kr.edges.size() == 50;
    double margin = 1e300;
    for (std::size_t k = 10; ok && k <= 50; k += 10) {
      const double d = prefix_dt(kr, k) - std::max(prefix_dt(mi, k), prefix_dt(ev, k));
      margin = std::min(margin, d);
      ok = ok && d > 0.0;
    }
    detail += fmt("q=%zu min margin %.3g; ", q, margin);
  }
  return verdict(ok, detail + "k in {10,...,50}");
}

Verdict denmark() {
  const auto path = dataset("denmark");
  if (!path) return missing("denmark");
  const SparseSymGraph g = load_graph(*path);
  bool ok = true;
  std::string detail;
  const std::pair<Subcommand, double> targets[] = {
      {Subcommand::Tune, 1.22}, {Subcommand::Rewire, 6.42}, {Subcommand::Add, 0.71}};
  for (const auto& [sub, want] : targets) {
    for (Method m : {Method::Lbfgs, Method::Hessian}) {
      RunSpec s;
      s.input = *path;
      s.subcommand = sub;
      s.method = m;
      s.budget = 10;
      s.n_f = 30;
      const TraceVariationReport r = run(s, g);
      const bool in = in_band(r.delta_t, want, 0.20);
      ok = ok && in;
      detail += fmt("%s/%s %.3f (%.2f) %.1f s; ", to_string(sub).c_str(), to_string(m).c_str(),
                    r.delta_t, want, r.seconds);
    }
  }
  return verdict(ok, detail + "band +-20%");
}

Verdict hutchpp() {
  // Gate: spanning tree plus G(n, 0.1) edges. The near-tree family with mean
  // degree ~4 is reported alongside; its flat spectrum leaves a large
  // deflated remainder for 20 Hutchinson probes.
  auto tally = [](double density, bool relative, std::uint64_t seed, double& worst) {
    std::mt19937_64 rng(seed);
    int within = 0;
    for (int t = 0; t < 20; ++t) {
      // n above probes/2 so the randomized estimator is exercised.
      const Node n = 40 + static_cast<Node>(rng() % 161);
      const SparseSymGraph g = oracle::random_connected(n, relative ? density / n : density, rng);
      const double est = estimate_trace_f(g.adjacency(), ScalarFunction::exp(), 40, rng());
      const double err = oracle::rel_err(est, oracle::trace_fun(g.dense(), kExp));
      worst = std::max(worst, err);
      within += err <= 0.01;
    }
    return within;
  };
  double worst = 0.0, worst_sparse = 0.0;
  const int within = tally(0.1, false, 110, worst);
  const int sparse = tally(4.0, true, 111, worst_sparse);
  return verdict(within >= 18, fmt("%d/20 within 1%% (need 18), worst %.2e; near-tree graphs "
                                   "(not gated) %d/20, worst %.2e",
                                   within, worst, sparse, worst_sparse));
}

Verdict scaling() {
  KrylovOptions opt;
  opt.tol = 1e-300;  // run the full max_iter blocks at every size
  // Ten blocks keeps the n-independent projected-eigenvalue work (growing
  // like it⁴) small next to the O(n) recurrence at n = 10³.
  opt.max_iter = 10;
  std::vector<double> ln, lt;
  std::string detail;
  for (Node n : {1000, 10000, 100000}) {
    const SparseSymGraph g = oracle::path(n);
    const LowRankUpdate x = LowRankUpdate::edge(n, n / 2, n / 2 + 1, -1.0);
    double best = 1e300;
    for (int rep = 0; rep < 7; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const TraceUpdate r = trace_fun_update(g.adjacency(), x, ScalarFunction::exp(), opt);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (r.iterations != opt.max_iter) return verdict(false, "iteration count not fixed");
      best = std::min(best, dt);
    }
    ln.push_back(std::log(static_cast<double>(n)));
    lt.push_back(std::log(best));
    detail += fmt("n=%d %.2e s; ", static_cast<int>(n), best);
  }
  const double mx = (ln[0] + ln[1] + ln[2]) / 3, my = (lt[0] + lt[1] + lt[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int k = 0; k < 3; ++k) {
    sxy += (ln[k] - mx) * (lt[k] - my);
    sxx += (ln[k] - mx) * (ln[k] - mx);
  }
  const double slope = sxy / sxx;
  return verdict(slope >= 0.8 && slope <= 1.3, detail + fmt("exponent %.3f (band [0.8, 1.3])", slope));
}

struct Criterion {
  int id;
  const char* name;
  Verdict (*check)();
};

const Criterion kCriteria[] = {
    {1, "oracle equivalence", oracle_equivalence},
    {2, "polynomial exactness", polynomial_exactness},
    {3, "gradient check", gradient_check},
    {4, "Hessian check", hessian_check},
    {5, "identity check", identity_check},
    {6, "greedy k=1 optimality", greedy_optimality},
    {7, "London table values", london},
    {8, "Anaheim ordering", anaheim},
    {9, "Denmark weighted values", denmark},
    {10, "Hutch++ accuracy", hutchpp},
    {11, "scaling exponent", scaling},
};

int run_one(const Criterion& c) {
  Verdict v;
  try {
    v = c.check();
  } catch (const std::exception& e) {
    v = {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
  std::printf("[%s] %2d %s: %s\n", tag, c.id, c.name, v.detail.c_str());
  std::fflush(stdout);
  return v.outcome == Outcome::Pass ? 0 : v.outcome == Outcome::Fail ? 1 : 77;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    const int id = std::atoi(argv[1]);
    for (const Criterion& c : kCriteria)
      if (c.id == id) return run_one(c);
    std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
    return 2;
  }
  int status = 0;
  for (const Criterion& c : kCriteria)
    if (run_one(c) == 1) status = 1;
  return status;
}

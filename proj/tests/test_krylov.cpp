#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fconn/error.hpp"
#include "fconn/krylov.hpp"
#include "oracles.hpp"

using namespace fconn;

namespace {


KrylovOptions tight(double tol = 1e-10) {
  KrylovOptions o;
  o.tol = tol;
  return o;
}

LowRankUpdate removal(const SparseSymGraph& g, NodePair p) {
  return LowRankUpdate::edge(g.nodes(), p.u, p.v, -g.weight(p.u, p.v));
}

}  // namespace

TEST_CASE("low-rank updates") {
  const LowRankUpdate x = LowRankUpdate::edge(5, 1, 3, 0.7);
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(5, 5);
  want(1, 3) = want(3, 1) = 0.7;
  CHECK(x.dense() == want);
  CHECK(x.negated().dense() == -want);

  const std::vector<Edge> d{{0, 1, 0.5}, {1, 2, -1.0}, {0, 4, 2.0}, {1, 0, 0.25}};
  const LowRankUpdate y = LowRankUpdate::from_edges(5, d);
  CHECK(y.rank() == 4);
  CHECK((y.dense() - oracle::dense_update(5, d)).norm() == 0.0);

  CHECK_THROWS_AS(LowRankUpdate(Eigen::MatrixXd::Ones(4, 2), Eigen::MatrixXd::Zero(2, 2)),
                  ValidationError);
  CHECK(LowRankUpdate::from_edges(5, {}).rank() == 0);
}

TEST_CASE("block Krylov decomposition relation and prefix growth") {
  std::mt19937_64 rng(1);
  const SparseSymGraph g = oracle::random_connected(60, 0.08, rng);
  const LowRankUpdate x = LowRankUpdate::from_edges(60, std::vector<Edge>{{2, 9, 1.0}, {4, 9, -1.0}});
  KrylovDecomposition kd(g.adjacency(), x.u(), Orthogonalization::Full);
  KrylovDecomposition kl(g.adjacency(), x.u(), Orthogonalization::Local);
  Eigen::MatrixXd prev;
  for (int m = 1; m <= 8; ++m) {
    REQUIRE(kd.advance());
    REQUIRE(kl.advance());
    const auto u = kd.basis();
    if (prev.size()) CHECK(u.leftCols(prev.cols()) == prev);
    prev = u;
    CHECK((u.transpose() * u - Eigen::MatrixXd::Identity(u.cols(), u.cols())).norm() < 1e-12);
    // A𝓤 − 𝓤𝓗 lives in the last block columns only, equal to U_{m+1}H_{m+1,m}.
    const Eigen::MatrixXd r = g.adjacency() * u - u * kd.projected();
    const Eigen::Index last = kd.block_size(kd.blocks() - 1);
    CHECK(r.leftCols(u.cols() - last).norm() < 1e-12 * g.norm1());
    CHECK((r.rightCols(last) - kd.pending() * kd.coupling()).norm() < 1e-12 * g.norm1());
    // W = 𝓤ᵀU₀
    CHECK((kd.start_coefficients() - u.transpose() * x.u()).norm() < 1e-13);
    // Lanczos and Arnoldi span the same space; the block bases may differ by
    // column signs or pivot order, so compare spectra.
    const Eigen::VectorXd el = sym_eig(SymDense(kl.projected())).values;
    const Eigen::VectorXd ed = sym_eig(SymDense(kd.projected())).values;
    CHECK((el - ed).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(bandwidth_of(kl.projected()) <= kl.bandwidth());
  }
}

TEST_CASE("fun_update: trivial cases") {
  const SparseSymGraph p = oracle::path(10);
  const LowRankUpdate zero(LowRankUpdate::edge(10, 2, 3, 1.0).u(), Eigen::MatrixXd::Zero(2, 2));
  const FunUpdateResult z = fun_update(p.adjacency(), zero, ScalarFunction::exp());
  CHECK(z.iterations == 3);
  CHECK(z.core.norm() == 0.0);

  KrylovOptions one;
  one.max_iter = 1;
  const LowRankUpdate x = LowRankUpdate::edge(10, 4, 5, -1.0);
  const FunUpdateResult r = fun_update(p.adjacency(), x, ScalarFunction::poly({0, 1}), one);
  CHECK(r.iterations == 1);
  CHECK((r.dense() - x.dense()).norm() < 1e-15);
}

TEST_CASE("fun_update matches the dense exponential") {
  std::mt19937_64 rng(2);
  const SparseSymGraph g = oracle::random_connected(50, 0.08, rng);
  std::vector<Edge> d{{2, 6, g.has_edge(2, 6) ? -g.weight(2, 6) : 1.0}};
  const LowRankUpdate x = LowRankUpdate::from_edges(50, d);
  const FunUpdateResult r = fun_update(g.adjacency(), x, ScalarFunction::exp(), tight());
  const Eigen::MatrixXd a = g.dense();
  const Eigen::MatrixXd want = oracle::expm(a + x.dense()) - oracle::expm(a);
  CHECK(r.converged);
  CHECK((r.dense() - want).norm() / want.norm() <= 1e-8);
  CHECK(r.entry(2, 6) == doctest::Approx(want(2, 6)).epsilon(1e-8));
  CHECK(r.trace() == doctest::Approx(want.trace()).epsilon(1e-8));
}

TEST_CASE("fun_update is exact for polynomials") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const SparseSymGraph g = oracle::random_connected(40, 0.1, rng, true);
    const std::vector<Edge> d{{1, 7, 0.8}, {3, 11, -0.4}};
    const LowRankUpdate x = LowRankUpdate::from_edges(40, d);
    const int degree = 2 + t % 4;
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = 1.0;
    c[1] = 0.5;
    const ScalarFunction f = ScalarFunction::poly(c);
    KrylovOptions o;
    o.max_iter = degree + 1;
    o.tol = 1e-300;  // run exactly degree + 1 blocks
    const FunUpdateResult r = fun_update(g.adjacency(), x, f, o);
    const Eigen::MatrixXd a = g.dense(), b = a + x.dense();
    auto pm = [&](const Eigen::MatrixXd& m) {
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(40, 40);
      for (std::size_t k = c.size(); k-- > 0;) h = h * m + c[k] * Eigen::MatrixXd::Identity(40, 40);
      return h;
    };
    const Eigen::MatrixXd want = pm(b) - pm(a);
    CHECK((r.dense() - want).norm() <= 1e-10 * want.norm());
  }
}

TEST_CASE("trace_fun_update: trivial and polynomial cases") {
  const SparseSymGraph p = oracle::path(10);
  const LowRankUpdate zero(LowRankUpdate::edge(10, 2, 3, 1.0).u(), Eigen::MatrixXd::Zero(2, 2));
  CHECK(trace_fun_update(p.adjacency(), zero, ScalarFunction::exp()).delta == 0.0);

  std::mt19937_64 rng(4);
  const SparseSymGraph g = oracle::random_connected(30, 0.1, rng);
  const NodePair e = oracle::random_edge(g, rng);
  const TraceUpdate t = trace_fun_update(g.adjacency(), removal(g, e), ScalarFunction::poly({0, 0, 1}));
  const Eigen::MatrixXd a = g.dense();
  const Eigen::MatrixXd b = a + removal(g, e).dense();
  const double want = (b * b).trace() - (a * a).trace();
  CHECK(want == doctest::Approx(-2.0));
  CHECK(std::abs(t.delta - want) < 1e-12);
}

TEST_CASE("trace_fun_update matches the dense trace difference") {
  std::mt19937_64 rng(5);
  for (Node n : {80, 150, 300}) {
    const SparseSymGraph g = oracle::random_connected(n, 4.0 / double(n), rng);
    const NodePair e = oracle::random_edge(g, rng);
    const LowRankUpdate x = removal(g, e);
    const double want = oracle::trace_exp_diff(g.dense(), x.dense());
    for (Orthogonalization mode : {Orthogonalization::Local, Orthogonalization::Full}) {
      KrylovOptions o = tight();
      o.trace_mode = mode;
      const TraceUpdate t = trace_fun_update(g.adjacency(), x, ScalarFunction::exp(), o);
      CHECK(t.converged);
      CHECK(oracle::rel_err(t.delta, want) <= 1e-8);
    }
  }
}

TEST_CASE("trace and full update agree; removal and insertion cancel") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const SparseSymGraph g = oracle::random_connected(25, 0.15, rng);
    const NodePair e = oracle::random_edge(g, rng);
    const NodePair m = oracle::random_non_edge(g, rng);
    const std::vector<Edge> d{{e.u, e.v, -1.0}, {m.u, m.v, 1.0}};
    const LowRankUpdate x = LowRankUpdate::from_edges(25, d);
    const KrylovOptions o = tight(1e-10);
    const ScalarFunction f = ScalarFunction::exp();
    const double tr = trace_fun_update(g.adjacency(), x, f, o).delta;
    const double full = fun_update(g.adjacency(), x, f, o).trace();
    CHECK(std::abs(tr - full) <= 10 * o.tol);

    const SparseSymGraph h = g.with_changes(d);
    const double back = trace_fun_update(h.adjacency(), x.negated(), f, o).delta;
    CHECK(std::abs(tr + back) <= 10 * o.tol);
  }
}

TEST_CASE("frechet_eval") {
  const SparseSymGraph p = oracle::path(12);
  KrylovOptions one;
  one.max_iter = 1;
  const FrechetResult lin = frechet_eval(p.adjacency(), 3, 8, ScalarFunction::poly({0, 1}), one);
  Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(12, 12);
  ind(3, 8) = 1.0;
  CHECK((lin.dense() - ind).norm() < 1e-15);

  const SparseMatrix zero(12, 12);
  const FrechetResult z = frechet_eval(zero, 3, 8, ScalarFunction::exp());
  CHECK((z.dense() - ind).norm() < 1e-15);

  std::mt19937_64 rng(7);
  const SparseSymGraph g = oracle::random_connected(30, 0.12, rng);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(30, 30);
  e(1, 8) = 1.0;  // (i, j) = (2, 9) in 1-based indices
  const Eigen::MatrixXd want = oracle::frechet_exp(g.dense(), e);
  const FrechetResult r = frechet_eval(g.adjacency(), 1, 8, ScalarFunction::exp(), tight());
  CHECK((r.dense() - want).norm() / want.norm() <= 1e-6);
  CHECK(r.entry(4, 5) == doctest::Approx(want(4, 5)).epsilon(1e-6));

  const FrechetResult diag = frechet_eval(g.adjacency(), 4, 4, ScalarFunction::exp(), tight());
  e.setZero();
  e(4, 4) = 1.0;
  CHECK((diag.dense() - oracle::frechet_exp(g.dense(), e)).norm() < 1e-8);
}

TEST_CASE("multiple_frechet_eval") {
  std::mt19937_64 rng(8);
  const SparseSymGraph g = oracle::random_connected(40, 0.1, rng);
  const KrylovOptions o = tight();
  const ScalarFunction f = ScalarFunction::exp();

  const std::vector<NodePair> one{{2, 9}};
  const MultiFrechetResult m1 = multiple_frechet_eval(g.adjacency(), one, f, o);
  const FrechetResult s = frechet_eval(g.adjacency(), 2, 9, f, o);
  for (Node h = 0; h < 40; h += 3)
    for (Node k = 0; k < 40; k += 5) CHECK(m1.entry(0, h, k) == doctest::Approx(s.entry(h, k)).epsilon(1e-12));

  const std::vector<NodePair> two{{2, 9}, {2, 17}};
  const MultiFrechetResult m2 = multiple_frechet_eval(g.adjacency(), two, f, o);
  CHECK(m2.bases.size() == 3);
  const FrechetResult s2 = frechet_eval(g.adjacency(), 2, 17, f, o);
  const Eigen::MatrixXd sd = s.dense(), sd2 = s2.dense();
  double err = 0.0;
  for (Node h = 0; h < 40; ++h)
    for (Node k = 0; k < 40; ++k)
      err = std::max({err, std::abs(m2.entry(0, h, k) - sd(h, k)),
                      std::abs(m2.entry(1, h, k) - sd2(h, k))});
  CHECK(err < 1e-10);

  KrylovOptions first = o;
  first.max_iter = 1;
  const MultiFrechetResult lin =
      multiple_frechet_eval(g.adjacency(), two, ScalarFunction::poly({0, 1}), first);
  for (std::size_t e = 0; e < two.size(); ++e)
    for (Node h = 0; h < 40; ++h)
      for (Node k = 0; k < 40; ++k) {
        const double want = (h == 2 && k == two[e].v) ? 1.0 : 0.0;
        CHECK(std::abs(lin.entry(e, h, k) - want) < 1e-15);
      }

  KrylovOptions tiny = o;
  tiny.memory_budget = 1000;
  CHECK_THROWS_AS(multiple_frechet_eval(g.adjacency(), two, f, tiny), ResourceError);
}

TEST_CASE("Lanczos f(A)v") {
  std::mt19937_64 rng(9);
  const SparseSymGraph g = oracle::random_connected(80, 0.05, rng);
  Eigen::VectorXd v = Eigen::VectorXd::Random(80);
  const Eigen::VectorXd got = lanczos_fun_action(g.adjacency(), v, ScalarFunction::exp(), 1e-12);
  const Eigen::VectorXd want = oracle::expm(g.dense()) * v;
  CHECK((got - want).norm() / want.norm() < 1e-10);
  CHECK(lanczos_fun_action(g.adjacency(), Eigen::VectorXd::Zero(80), ScalarFunction::exp()).norm() == 0.0);
  CHECK_THROWS_AS(lanczos_fun_action(g.adjacency(), v, ScalarFunction::exp(), 1e-12, 3),
                  ConvergenceError);
}

TEST_CASE("Hutch++ trace estimates") {
  const ScalarFunction e = ScalarFunction::exp();
  const SparseMatrix zero(6, 6);
  CHECK(estimate_trace_f(zero, e, 12, 1) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK_THROWS_AS(estimate_trace_f(zero, e, 3, 1), ValidationError);

  const SparseSymGraph tri = oracle::complete(3);
  CHECK(estimate_trace_f(tri.adjacency(), e, 8, 0) ==
        doctest::Approx(std::exp(2.0) + 2 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::abs(estimate_trace_f(tri.adjacency(), ScalarFunction::poly({0, 1}), 8, 0)) < 1e-12);

  std::mt19937_64 rng(10);
  const SparseSymGraph g = oracle::random_connected(100, 0.05, rng);
  const double want = oracle::trace_fun(g.dense(), [](double z) { return std::exp(z); });
  int within = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    within += oracle::rel_err(estimate_trace_f(g.adjacency(), e, 40, seed), want) <= 0.01;
  CHECK(within >= 9);
  CHECK(estimate_trace_f(g.adjacency(), e, 40, 3) == estimate_trace_f(g.adjacency(), e, 40, 3));
}

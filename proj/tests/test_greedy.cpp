#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fconn/error.hpp"
#include "fconn/greedy.hpp"
#include "oracles.hpp"

using namespace fconn;

namespace {

double dense_delta(const SparseSymGraph& g, const std::vector<Edge>& d) {
  return oracle::trace_exp_diff(g.dense(), oracle::dense_update(g.nodes(), d));
}

GreedyConfig config(GreedyMode mode, Strategy s, std::size_t k, std::size_t q = 1) {
  GreedyConfig c;
  c.mode = mode;
  c.strategy = s;
  c.budget = k;
  c.q = q;
  c.krylov.tol = 1e-10;
  return c;
}

SparseSymGraph two_triangles() {
  return SparseSymGraph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

}  // namespace

TEST_CASE("greedy break on the 4-cycle") {
  const SparseSymGraph c4 = oracle::cycle(4);
  const ModificationPlan p =
      greedy_krylov(c4, config(GreedyMode::Break, Strategy::DgFull, 1), ScalarFunction::exp());
  REQUIRE(p.edges.size() == 1);
  CHECK(c4.has_edge(p.edges[0].pair));
  CHECK(p.edges[0].delta == -1.0);
  const double want = dense_delta(c4, {{p.edges[0].pair.u, p.edges[0].pair.v, -1.0}});
  CHECK(std::abs(p.edges[0].objective_delta - want) < 1e-8);
  CHECK(p.evaluations == 4);
}

TEST_CASE("greedy make on P4 matches brute force over the missing pairs") {
  const SparseSymGraph p4 = oracle::path(4);
  const ModificationPlan p =
      greedy_krylov(p4, config(GreedyMode::Make, Strategy::Ad1, 1, 3), ScalarFunction::exp());
  NodePair best;
  double best_v = -1e300;
  for (Node i = 0; i < 4; ++i)
    for (Node j = i + 1; j < 4; ++j)
      if (!p4.has_edge(i, j)) {
        const double v = dense_delta(p4, {{i, j, 1.0}});
        if (v > best_v + 1e-12) best_v = v, best = {i, j};
      }
  REQUIRE(p.edges.size() == 1);
  CHECK(p.edges[0].pair == best);
  CHECK(p.edges[0].objective_delta == doctest::Approx(best_v).epsilon(1e-9));
}

TEST_CASE("greedy break k = 2 on two triangles matches the 2-subset optimum") {
  const SparseSymGraph g = two_triangles();
  const ModificationPlan p =
      greedy_krylov(g, config(GreedyMode::Break, Strategy::DgFull, 2), ScalarFunction::exp());
  double best = 1e300;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b) {
      const Edge ea = g.edges()[a], eb = g.edges()[b];
      best = std::min(best, dense_delta(g, {{ea.i, ea.j, -1.0}, {eb.i, eb.j, -1.0}}));
    }
  CHECK(p.total == doctest::Approx(best).epsilon(1e-9));
  std::vector<Edge> chosen;
  for (const PlannedEdge& e : p.edges) chosen.push_back({e.pair.u, e.pair.v, e.delta});
  CHECK(p.total == doctest::Approx(dense_delta(g, chosen)).epsilon(1e-9));
}

TEST_CASE("greedy k = 1 with the full search space is optimal") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const SparseSymGraph g = oracle::random_connected(12 + static_cast<Node>(rng() % 18), 0.15, rng);
    const ModificationPlan p =
        greedy_krylov(g, config(GreedyMode::Break, Strategy::DgFull, 1), ScalarFunction::exp());
    std::vector<double> v;
    std::size_t arg = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const Edge ed = g.edges()[e];
      v.push_back(dense_delta(g, {{ed.i, ed.j, -ed.w}}));
      if (v.back() < v[arg]) arg = e;
    }
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() > 1 && sorted[1] - sorted[0] > 1e-9)
      CHECK(p.edges[0].pair == g.edges()[arg].pair());
  }
}

TEST_CASE("plans are valid and monotone") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 6; ++t) {
    const SparseSymGraph g = oracle::random_connected(35, 0.1, rng);
    for (const ScalarFunction& f : {ScalarFunction::exp(), ScalarFunction::sinh(),
                                    ScalarFunction::cosh(), ScalarFunction::resolvent(0.1)}) {
      const ModificationPlan b =
          greedy_krylov(g, config(GreedyMode::Break, Strategy::Dg2, 5, 10), f);
      const ModificationPlan m =
          greedy_krylov(g, config(GreedyMode::Make, Strategy::Ad2, 5, 10), f);
      std::set<NodePair> seen;
      for (const PlannedEdge& e : b.edges) {
        CHECK(g.has_edge(e.pair));
        CHECK(e.objective_delta <= 0.0);
        CHECK(seen.insert(e.pair).second);
      }
      seen.clear();
      for (const PlannedEdge& e : m.edges) {
        CHECK_FALSE(g.has_edge(e.pair));
        CHECK(e.objective_delta >= 0.0);
        CHECK(seen.insert(e.pair).second);
      }
      CHECK(b.edges.size() == 5);
      CHECK(m.edges.size() == 5);
      const SparseSymGraph after = m.apply(g);
      CHECK(after.edge_count() == g.edge_count() + 5);
      CHECK((m.cumulative().dense() - (after.dense() - g.dense())).norm() == 0.0);
    }
  }
}

TEST_CASE("parallel evaluation does not change the plan") {
  std::mt19937_64 rng(3);
  const SparseSymGraph g = oracle::random_connected(60, 0.06, rng);
  GreedyConfig c = config(GreedyMode::Make, Strategy::Ad1, 6, 40);
  c.threads = 1;
  const ModificationPlan a = greedy_krylov(g, c, ScalarFunction::exp());
  c.threads = 4;
  const ModificationPlan b = greedy_krylov(g, c, ScalarFunction::exp());
  REQUIRE(a.edges.size() == b.edges.size());
  for (std::size_t k = 0; k < a.edges.size(); ++k) {
    CHECK(a.edges[k].pair == b.edges[k].pair);
    CHECK(a.edges[k].objective_delta == b.edges[k].objective_delta);
  }
}

TEST_CASE("config validation") {
  const SparseSymGraph g = oracle::path(4);
  CHECK_THROWS_AS(greedy_krylov(g, config(GreedyMode::Break, Strategy::Ad1, 1), ScalarFunction::exp()),
                  ValidationError);
  CHECK_THROWS_AS(greedy_krylov(g, config(GreedyMode::Break, Strategy::DgFull, 4), ScalarFunction::exp()),
                  ValidationError);
  CHECK_THROWS_AS(greedy_krylov(g, config(GreedyMode::Make, Strategy::Ad1, 1, 0), ScalarFunction::exp()),
                  ValidationError);
  // Make on a complete graph runs out of candidates.
  const ModificationPlan p =
      greedy_krylov(oracle::complete(4), config(GreedyMode::Make, Strategy::Ad2, 2), ScalarFunction::exp());
  CHECK(p.exhausted);
  CHECK(p.edges.empty());
}

TEST_CASE("MIOBI scores") {
  std::mt19937_64 rng(4);
  const SparseSymGraph g = oracle::random_connected(20, 0.2, rng);
  const MiobiState s = MiobiState::initial(g, 20);
  CHECK(s.score(ScalarFunction::exp(), {0, 1}, 0.0) == 0.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.dense());
  const NodePair p = oracle::random_edge(g, rng);
  const Eigen::MatrixXd x = oracle::dense_update(20, {{p.u, p.v, -1.0}});
  double want = 0.0;
  for (Eigen::Index j = 0; j < 20; ++j) {
    const Eigen::VectorXd u = es.eigenvectors().col(j);
    const double l = es.eigenvalues()(j);
    want += std::exp(l + u.dot(x * u)) - std::exp(l);
  }
  CHECK(s.score(ScalarFunction::exp(), p, -1.0) == doctest::Approx(want).epsilon(1e-9));

  // First-order update of the eigenvalues is λ + uᵀXu.
  MiobiState t = s;
  t.update(p, -1.0);
  for (Eigen::Index j = 0; j < 20; ++j) {
    const Eigen::VectorXd u = s.vectors.col(j);
    CHECK(t.values(j) == doctest::Approx(s.values(j) + u.dot(x * u)).epsilon(1e-12));
  }
  CHECK(t.drift() > 0.0);
}

TEST_CASE("MIOBI on the 4-cycle and against the exact greedy") {
  const SparseSymGraph c4 = oracle::cycle(4);
  GreedyConfig c = config(GreedyMode::Break, Strategy::DgFull, 1);
  const ModificationPlan p = miobi(c4, c, ScalarFunction::exp(), 4);
  REQUIRE(p.edges.size() == 1);
  CHECK(c4.has_edge(p.edges[0].pair));

  std::mt19937_64 rng(5);
  int compared = 0;
  for (int t = 0; t < 15; ++t) {
    const SparseSymGraph g = oracle::random_connected(24, 0.3, rng);
    std::vector<std::pair<double, NodePair>> exact;
    for (const Edge& e : g.edges()) exact.push_back({dense_delta(g, {{e.i, e.j, -1.0}}), e.pair()});
    std::sort(exact.begin(), exact.end());
    // ‖X‖₂² = 1 for a unit edge.
    if (exact[1].first - exact[0].first <= 10.0) continue;
    ++compared;
    const ModificationPlan a = miobi(g, c, ScalarFunction::exp(), static_cast<int>(g.nodes()));
    const ModificationPlan b = greedy_krylov(g, c, ScalarFunction::exp());
    CHECK(a.edges[0].pair == exact[0].second);
    CHECK(b.edges[0].pair == exact[0].second);
  }
  CHECK(compared > 0);
}

TEST_CASE("EIGENV baseline") {
  const ModificationPlan s =
      eigenv_baseline(oracle::star(4), 1, GreedyMode::Break, ScalarFunction::exp());
  REQUIRE(s.edges.size() == 1);
  CHECK(s.edges[0].pair == NodePair{0, 1});

  const ModificationPlan m =
      eigenv_baseline(oracle::path(3), 1, GreedyMode::Make, ScalarFunction::exp());
  REQUIRE(m.edges.size() == 1);
  CHECK(m.edges[0].pair == NodePair{0, 2});

  CentralityRanking r;
  r.scores = Eigen::Vector4d(0.9, 0.5, 0.4, 0.1);
  const ModificationPlan k2 = eigenv_baseline(oracle::complete(4), 2, GreedyMode::Break,
                                              ScalarFunction::exp(), {}, r);
  REQUIRE(k2.edges.size() == 2);
  CHECK(k2.edges[0].pair == NodePair{0, 1});
  CHECK(k2.edges[1].pair == NodePair{0, 2});
  const SparseSymGraph k4 = oracle::complete(4);
  std::vector<Edge> d{{0, 1, -1.0}, {0, 2, -1.0}};
  CHECK(k2.total == doctest::Approx(dense_delta(k4, d)).epsilon(1e-6));
}

#include "fconn/error.hpp"
#include "fconn/weighted.hpp"

#include <algorithm>
#include <string>

namespace fconn {

namespace {

struct Scored {
  NodePair pair;
  double grad;
};

// Largest gradients first; ties keep pool order.
std::vector<Scored> take_largest(std::vector<Scored> v, std::size_t count) {
  std::stable_sort(v.begin(), v.end(),
                   [](const Scored& a, const Scored& b) { return a.grad > b.grad; });
  if (v.size() > count) v.resize(count);
  return v;
}

std::vector<NodePair> checked(std::vector<NodePair> got, std::size_t wanted,
                              const char* what, std::vector<std::string>& warnings) {
  if (got.size() < wanted)
    warnings.push_back(std::string("only ") + std::to_string(got.size()) + " " + what +
                       " available, wanted " + std::to_string(wanted));
  return got;
}

}  // namespace

CandidateSelection select_candidates(const SparseSymGraph& a, WeightedMode mode,
                                     std::size_t n_p, std::size_t n_f,
                                     const ScalarFunction& f) {
  return select_candidates(a, mode, n_p, n_f, f, eigenvector_centrality(a));
}

CandidateSelection select_candidates(const SparseSymGraph& a, WeightedMode mode,
                                     std::size_t n_p, std::size_t n_f,
                                     const ScalarFunction& f, const CentralityRanking& r) {
  if (n_p == 0 || n_f == 0) throw ValidationError("n_P and n_F must be positive");
  if (n_f > n_p) throw ValidationError("n_F must not exceed n_P");
  CandidateSelection out;
  const CentralityRanking r1 = r.with_ordering(EdgeOrdering::Product);
  const CentralityRanking r2 = r.with_ordering(EdgeOrdering::MinMax);

  std::vector<NodePair> existing, missing;
  std::size_t want_existing = 0;
  switch (mode) {
    case WeightedMode::Tune:
    case WeightedMode::Downgrade:
      existing = checked(top_existing_pairs(a, r1, n_p), n_p, "existing edges", out.warnings);
      want_existing = n_f;
      break;
    case WeightedMode::Add:
      missing = checked(top_missing_pairs(a, r2, n_p), n_p, "missing edges", out.warnings);
      break;
    case WeightedMode::Rewire:
      existing = checked(top_existing_pairs(a, r2, n_p / 2), n_p / 2, "existing edges",
                         out.warnings);
      missing = checked(top_missing_pairs(a, r2, n_p - n_p / 2), n_p - n_p / 2,
                        "missing edges", out.warnings);
      want_existing = n_f / 2;
      break;
  }
  if (mode == WeightedMode::Add && missing.empty())
    throw ValidationError("graph has no missing edges to add");
  if ((mode == WeightedMode::Tune || mode == WeightedMode::Downgrade) && existing.empty())
    throw ValidationError("graph has no edges");

  out.pool = existing;
  out.pool.insert(out.pool.end(), missing.begin(), missing.end());
  if (out.pool.empty()) throw ValidationError("candidate pool is empty");
  const Eigen::VectorXd g = 2.0 * fprime_entries(a, out.pool, f.derivative());

  std::vector<Scored> se, sm;
  for (std::size_t e = 0; e < out.pool.size(); ++e) {
    const Scored s{out.pool[e], g(static_cast<Eigen::Index>(e))};
    (e < existing.size() ? se : sm).push_back(s);
  }
  const std::size_t want_missing = mode == WeightedMode::Rewire ? n_f - n_f / 2
                                   : mode == WeightedMode::Add  ? n_f
                                                                : 0;
  std::vector<Scored> chosen = take_largest(se, want_existing);
  const std::vector<Scored> cm = take_largest(sm, want_missing);
  chosen.insert(chosen.end(), cm.begin(), cm.end());
  if (chosen.size() < n_f)
    out.warnings.push_back("candidate set F has " + std::to_string(chosen.size()) +
                           " pairs, wanted " + std::to_string(n_f));
  const std::size_t total = chosen.size();
  chosen = take_largest(std::move(chosen), total);

  out.gradient.resize(static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t e = 0; e < chosen.size(); ++e) {
    out.f_set.push_back(chosen[e].pair);
    out.gradient(static_cast<Eigen::Index>(e)) = chosen[e].grad;
  }
  return out;
}

}  // namespace fconn

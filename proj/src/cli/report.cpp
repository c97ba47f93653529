#include "fconn/cli.hpp"
#include "fconn/error.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fconn {

void write_csv(const TraceVariationReport& r, std::ostream& out) {
  out << "i,j,delta,cumulative_delta_trace\n";
  out << std::setprecision(17);
  for (const ChosenEdge& e : r.edges)
    out << e.pair.u + 1 << ',' << e.pair.v + 1 << ',' << e.delta << ',' << e.cumulative << '\n';
}

std::vector<ChosenEdge> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,delta", 0) != 0)
    throw InputError("missing CSV header");
  std::vector<ChosenEdge> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    long long i = 0, j = 0;
    ChosenEdge e;
    if (!(ls >> i >> j >> e.delta >> e.cumulative) || i < 1 || j < 1 || i == j)
      throw InputError("malformed CSV row at line " + std::to_string(lineno));
    e.pair = NodePair(i - 1, j - 1);
    rows.push_back(e);
  }
  return rows;
}

nlohmann::json to_json(const RunSpec& spec, const TraceVariationReport& r) {
  using nlohmann::json;
  json chosen = json::array();
  for (const ChosenEdge& e : r.edges)
    chosen.push_back({{"i", e.pair.u + 1},
                      {"j", e.pair.v + 1},
                      {"delta", e.delta},
                      {"cumulative_delta_trace", e.cumulative}});

  const KrylovOptions k = spec.krylov_options();
  json config = {{"subcommand", to_string(spec.subcommand)},
                 {"input", spec.input.string()},
                 {"function", spec.function},
                 {"budget", spec.budget},
                 {"probes", spec.probes},
                 {"seed", spec.seed},
                 {"lag", k.lag},
                 {"eps", k.tol},
                 {"mmax", k.max_iter}};
  if (is_greedy(spec.subcommand)) {
    config["method"] = to_string(r.method);
    config["q"] = spec.q;
    const GreedyMode mode =
        spec.subcommand == Subcommand::Break ? GreedyMode::Break : GreedyMode::Make;
    if (r.method != Method::Eigenv)
      config["strategy"] =
          to_string(spec.strategy.value_or(default_strategy(mode, r.method == Method::Miobi)));
    if (r.method == Method::Miobi) config["miobi_h"] = spec.miobi_h;
  } else if (is_weighted(spec.subcommand)) {
    config["method"] = to_string(r.method);
    config["n_p"] = spec.n_p;
    config["n_f"] = spec.n_f;
    config["upper_bound"] = spec.upper;
  }

  json out{{"config", config},
              {"function", r.function},
              {"nodes", r.nodes},
              {"edges", r.edge_count},
              {"trace_f", r.trace_f},
              {"delta_trace", r.delta_trace},
              {"delta_t", r.delta_t},
              {"seconds", r.seconds},
              {"iterations", r.iterations},
              {"outer_iterations", r.outer_iterations},
              {"unconverged", r.unconverged},
              {"converged", r.converged},
              {"chosen", chosen},
              {"warnings", r.warnings}};
  if (r.method == Method::Miobi && is_greedy(spec.subcommand))
    out["eigenvector_drift"] = r.eigenvector_drift;
  return out;
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
  out << "label,delta_t,seconds,iterations";
  for (const ComparisonRow& r : rows) out << ",common_" << r.label;
  out << '\n' << std::setprecision(17);
  for (const ComparisonRow& r : rows) {
    out << r.label << ',' << r.report.delta_t << ',' << r.report.seconds << ','
        << r.report.iterations;
    for (std::size_t c = 0; c < r.common.size(); ++c) {
      out << ',';
      if (&rows[c] != &r) out << r.common[c];
    }
    out << '\n';
  }
}

}  // namespace fconn

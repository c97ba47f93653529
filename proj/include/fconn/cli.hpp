#pragma once

#include "fconn/graph.hpp"
#include "fconn/greedy.hpp"
#include "fconn/krylov.hpp"
#include "fconn/matfun.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fconn {

enum class Subcommand { Break, Make, Downgrade, Add, Tune, Rewire, Trace };
enum class Method { Krylov, Miobi, Eigenv, Lbfgs, Hessian };

std::string to_string(Subcommand s);
std::string to_string(Method m);
std::string to_string(Strategy s);
Subcommand parse_subcommand(const std::string& s);
Method parse_method(const std::string& s);
/// Accepts DG_FULL, DG_1, DG_2, AD_1, AD_2, AD_3 (case-insensitive).
Strategy parse_strategy(const std::string& s);

bool is_greedy(Subcommand s);
bool is_weighted(Subcommand s);
Method default_method(Subcommand s);

/// exp | sinh | cosh | resolvent[:alpha=<a>] | poly:c0,c1,...
/// A resolvent without alpha gets 0.9/λ_max.
ScalarFunction parse_function(const std::string& tag, double lambda_max);
/// True if the tag needs λ_max to be resolved.
bool function_needs_lambda_max(const std::string& tag);

struct RunSpec {
  Subcommand subcommand = Subcommand::Break;
  std::filesystem::path input;
  GraphFormat format = GraphFormat::Auto;
  std::string function = "exp";
  double budget = 1.0;  // edges for break/make, total weight otherwise
  std::size_t q = 250;
  std::optional<Strategy> strategy;
  std::optional<Method> method;  // default_method(subcommand) when empty
  std::size_t n_p = 100;
  std::size_t n_f = 30;
  double upper = 1.0;
  int miobi_h = 25;
  int lag = 2;
  std::optional<double> tol;  // 1e-6 for break/make, 1e-8 for weighted runs
  int max_iter = 100;
  int probes = 40;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::filesystem::path output;  // CSV, empty → none
  std::filesystem::path json;    // JSON summary, empty → none

  Method resolved_method() const { return method.value_or(default_method(subcommand)); }
  KrylovOptions krylov_options() const;
  /// Throws ValidationError on incompatible settings.
  void validate() const;
};

struct ChosenEdge {
  NodePair pair;
  double delta = 0.0;
  double cumulative = 0.0;  // Tr f change after applying this and all earlier rows
};

struct TraceVariationReport {
  Subcommand subcommand = Subcommand::Trace;
  Method method = Method::Krylov;
  std::string function;
  Node nodes = 0;
  std::size_t edge_count = 0;
  double trace_f = 0.0;      // Hutch++ estimate of Tr f(A)
  double delta_trace = 0.0;  // Tr f(A + X) − Tr f(A)
  double delta_t = 0.0;      // |delta_trace| / |trace_f|
  double seconds = 0.0;      // optimizer only
  std::size_t iterations = 0;        // greedy evaluations or inner iterations
  std::size_t outer_iterations = 0;  // weighted only
  std::size_t unconverged = 0;
  double eigenvector_drift = 0.0;  // miobi only
  bool converged = true;
  std::vector<ChosenEdge> edges;
  std::vector<std::string> warnings;
};

TraceVariationReport run(const RunSpec& spec);
TraceVariationReport run(const RunSpec& spec, const SparseSymGraph& g);

/// Header `i,j,delta,cumulative_delta_trace`, 1-based node indices,
/// 17 significant digits.
void write_csv(const TraceVariationReport& r, std::ostream& out);
std::vector<ChosenEdge> read_csv(std::istream& in);

/// Summary: the report plus a config echo. Timing lives under "seconds".
nlohmann::json to_json(const RunSpec& spec, const TraceVariationReport& r);

struct ComparisonRow {
  std::string label;
  TraceVariationReport report;
  std::vector<std::size_t> common;  // edges shared with each row
};

/// Runs every spec on the same graph. All specs must share input,
/// function, budget and subcommand.
std::vector<ComparisonRow> compare(const std::vector<RunSpec>& specs);
/// Columns: label, delta_t, seconds, iterations, then common_<label> per
/// row (left empty on the diagonal).
void write_comparison_csv(const std::vector<ComparisonRow>& rows, std::ostream& out);

/// 2 validation/usage/domain, 3 input, 4 convergence, 5 resource, 1 other.
int exit_code_for(const std::exception& e);

}  // namespace fconn

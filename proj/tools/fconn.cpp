#include "fconn/cli.hpp"
#include "fconn/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

struct Flags {
  std::string input;
  std::string format = "auto";
  std::string function = "exp";
  double budget = 1.0;
  std::size_t q = 250;
  std::string strategy;
  std::string method;
  std::size_t n_p = 100;
  std::size_t n_f = 30;
  double upper = 1.0;
  int miobi_h = 25;
  int lag = 2;
  double eps = 0.0;
  int mmax = 100;
  int probes = 40;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string output;
  std::string json;
  std::vector<std::string> methods;
  std::string mode = "break";
};

fconn::GraphFormat parse_format(const std::string& s) {
  if (s == "auto") return fconn::GraphFormat::Auto;
  if (s == "edges" || s == "edgelist") return fconn::GraphFormat::EdgeList;
  if (s == "mtx" || s == "mm") return fconn::GraphFormat::MatrixMarket;
  throw fconn::ValidationError("unknown format '" + s + "'");
}

void add_common(CLI::App* app, Flags& fl) {
  app->add_option("--input,-i", fl.input, "Graph file (edge list or Matrix Market)")->required();
  app->add_option("--format", fl.format, "auto | edges | mtx");
  app->add_option("--function,-f", fl.function,
                  "exp | sinh | cosh | resolvent[:alpha=a] | poly:c0,c1,...");
  app->add_option("--probes", fl.probes, "Hutch++ probes for Tr f(A) (even)");
  app->add_option("--seed", fl.seed, "Seed for the trace estimate");
  app->add_option("--json", fl.json, "Write a JSON summary here (- for stdout)");
}

void add_krylov(CLI::App* app, Flags& fl) {
  app->add_option("--budget,-k", fl.budget, "Edges (break/make) or total weight")->required();
  app->add_option("--eps", fl.eps, "Krylov stopping tolerance");
  app->add_option("--lag", fl.lag, "Stopping-rule lag");
  app->add_option("--mmax", fl.mmax, "Maximum Krylov blocks");
  app->add_option("--threads", fl.threads, "Worker threads (default: FCONN_THREADS or all cores)");
  app->add_option("--output,-o", fl.output, "Write chosen edges as CSV");
}

void add_greedy(CLI::App* app, Flags& fl) {
  app->add_option("--q", fl.q, "Search-space size");
  app->add_option("--strategy", fl.strategy, "DG_FULL | DG_1 | DG_2 | AD_1 | AD_2 | AD_3");
  app->add_option("--miobi-h", fl.miobi_h, "Eigenpairs tracked by miobi");
}

void add_weighted(CLI::App* app, Flags& fl) {
  app->add_option("--np", fl.n_p, "Candidate pool size");
  app->add_option("--nf", fl.n_f, "Optimized edges");
  app->add_option("--upper-bound", fl.upper, "Per-edge cap on weight increase");
}

fconn::RunSpec to_spec(const Flags& fl, fconn::Subcommand sub, const std::string& method) {
  fconn::RunSpec s;
  s.subcommand = sub;
  s.input = fl.input;
  s.format = parse_format(fl.format);
  s.function = fl.function;
  s.budget = fl.budget;
  s.q = fl.q;
  if (!fl.strategy.empty()) s.strategy = fconn::parse_strategy(fl.strategy);
  if (!method.empty()) s.method = fconn::parse_method(method);
  s.n_p = fl.n_p;
  s.n_f = fl.n_f;
  s.upper = fl.upper;
  s.miobi_h = fl.miobi_h;
  s.lag = fl.lag;
  if (fl.eps != 0.0) s.tol = fl.eps;
  s.max_iter = fl.mmax;
  s.probes = fl.probes;
  s.seed = fl.seed;
  s.threads = fl.threads;
  if (s.threads == 0) {
    if (const char* env = std::getenv("FCONN_THREADS")) {
      try {
        s.threads = static_cast<unsigned>(std::stoul(env));
      } catch (const std::exception&) {
        throw fconn::ValidationError("FCONN_THREADS must be a nonnegative integer");
      }
    }
  }
  s.output = fl.output;
  s.json = fl.json;
  return s;
}

void emit(const fconn::RunSpec& spec, const fconn::TraceVariationReport& rep) {
  for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  if (!spec.output.empty()) {
    std::ofstream out(spec.output);
    if (!out) throw fconn::InputError("cannot write " + spec.output.string());
    fconn::write_csv(rep, out);
  }
  const nlohmann::json j = fconn::to_json(spec, rep);
  if (spec.json == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    if (!spec.json.empty()) {
      std::ofstream out(spec.json);
      if (!out) throw fconn::InputError("cannot write " + spec.json.string());
      out << j.dump(2) << '\n';
    }
    std::cout << "trace_f " << rep.trace_f << "\n";
    if (spec.subcommand != fconn::Subcommand::Trace)
      std::cout << "delta_trace " << rep.delta_trace << "\ndelta_t " << rep.delta_t
                << "\nseconds " << rep.seconds << "\nedges " << rep.edges.size() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Changing f-connectivity of networks by edge modifications"};
  app.require_subcommand(1);
  Flags fl;

  std::vector<std::pair<CLI::App*, fconn::Subcommand>> subs;
  for (auto sub : {fconn::Subcommand::Break, fconn::Subcommand::Make}) {
    CLI::App* c = app.add_subcommand(fconn::to_string(sub),
                                     sub == fconn::Subcommand::Break
                                         ? "Greedily remove edges to decrease Tr f(A)"
                                         : "Greedily add edges to increase Tr f(A)");
    add_common(c, fl);
    add_krylov(c, fl);
    add_greedy(c, fl);
    c->add_option("--method,-m", fl.method, "krylov | miobi | eigenv");
    subs.emplace_back(c, sub);
  }
  for (auto sub : {fconn::Subcommand::Downgrade, fconn::Subcommand::Add,
                   fconn::Subcommand::Tune, fconn::Subcommand::Rewire}) {
    CLI::App* c = app.add_subcommand(fconn::to_string(sub), "Weighted edge optimization");
    add_common(c, fl);
    add_krylov(c, fl);
    add_weighted(c, fl);
    c->add_option("--method,-m", fl.method, "lbfgs | hessian");
    subs.emplace_back(c, sub);
  }
  CLI::App* trace = app.add_subcommand("trace", "Estimate Tr f(A) with Hutch++");
  add_common(trace, fl);
  subs.emplace_back(trace, fconn::Subcommand::Trace);

  CLI::App* cmp = app.add_subcommand("compare", "Run several methods on one graph");
  add_common(cmp, fl);
  add_krylov(cmp, fl);
  add_greedy(cmp, fl);
  add_weighted(cmp, fl);
  cmp->add_option("--mode", fl.mode, "break | make | downgrade | add | tune | rewire");
  cmp->add_option("--methods", fl.methods, "Methods to compare")->delimiter(',')->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmp->parsed()) {
      const fconn::Subcommand sub = fconn::parse_subcommand(fl.mode);
      if (sub == fconn::Subcommand::Trace) throw fconn::ValidationError("cannot compare trace runs");
      std::vector<fconn::RunSpec> specs;
      for (const std::string& m : fl.methods) specs.push_back(to_spec(fl, sub, m));
      const auto rows = fconn::compare(specs);
      if (!fl.output.empty()) {
        std::ofstream out(fl.output);
        if (!out) throw fconn::InputError("cannot write " + fl.output);
        fconn::write_comparison_csv(rows, out);
      } else {
        fconn::write_comparison_csv(rows, std::cout);
      }
      return 0;
    }
    for (const auto& [c, sub] : subs) {
      if (!c->parsed()) continue;
      const fconn::RunSpec spec = to_spec(fl, sub, fl.method);
      emit(spec, fconn::run(spec));
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fconn::exit_code_for(e);
  }
}

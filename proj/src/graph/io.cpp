#include "fconn/error.hpp"
#include "fconn/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

namespace fconn {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k])))
      ++k;
    const std::size_t start = k;
    while (k < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[k])))
      ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

class LineError {
 public:
  LineError(const std::filesystem::path& path) : path_(path.string()) {}

  [[noreturn]] void input(std::size_t line, const std::string& msg) const {
    throw InputError(path_ + ":" + std::to_string(line) + ": " + msg);
  }
  [[noreturn]] void validation(std::size_t line, const std::string& msg) const {
    throw ValidationError(path_ + ":" + std::to_string(line) + ": " + msg);
  }

 private:
  std::string path_;
};

Node parse_index(std::string_view tok, std::size_t line, const LineError& err) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    err.input(line, "cannot parse node index '" + std::string(tok) + "'");
  if (v < 1) err.validation(line, "node indices are 1-based");
  return static_cast<Node>(v - 1);
}

double parse_weight(std::string_view tok, std::size_t line,
                    const LineError& err) {
  // from_chars for double is not available on every libstdc++ in use.
  std::string s(tok);
  char* end = nullptr;
  const double w = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(w))
    err.input(line, "cannot parse weight '" + s + "'");
  return w;
}

/// Collects entries given in either orientation. The mirror (j, i) of an
/// earlier (i, j) is accepted once if its weight matches; any other repeat
/// is a duplicate.
class EntryCollector {
 public:
  explicit EntryCollector(const LineError& err) : err_(err) {}

  void add(Node i, Node j, double w, std::size_t line) {
    if (i == j)
      err_.validation(line, "self-loop at node " + std::to_string(i + 1));
    if (w < 0.0) err_.validation(line, "negative weight");
    const NodePair p(i, j);
    const bool forward = i < j;
    auto it = seen_.find(p);
    if (it != seen_.end()) {
      Seen& s = it->second;
      if (s.mirrored || s.forward == forward)
        err_.validation(line, "duplicate entry (" + std::to_string(i + 1) +
                                  ", " + std::to_string(j + 1) + ")");
      if (s.weight != w)
        err_.validation(line, "asymmetric weights for pair (" +
                                  std::to_string(p.u + 1) + ", " +
                                  std::to_string(p.v + 1) + ")");
      s.mirrored = true;
      return;
    }
    seen_.emplace(p, Seen{w, forward, false});
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(seen_.size());
    for (const auto& [p, s] : seen_)
      if (s.weight > 0.0) out.push_back({p.u, p.v, s.weight});
    return out;
  }

 private:
  struct Seen {
    double weight;
    bool forward;
    bool mirrored;
  };
  const LineError& err_;
  std::map<NodePair, Seen> seen_;
};

SparseSymGraph read_edge_list(std::istream& in, const LineError& err) {
  EntryCollector entries(err);
  Node declared = -1;
  Node max_index = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0][0] == '%' || toks[0][0] == '#') {
      // "% nodes 12" or "%nodes 12"
      std::vector<std::string_view> rest = toks;
      std::string head = lower(rest[0].substr(1));
      if (head.empty() && rest.size() > 1) {
        head = lower(rest[1]);
        rest.erase(rest.begin());
      }
      if (head == "nodes" && rest.size() == 2) {
        const Node n = parse_index(rest[1], lineno, err) + 1;
        declared = n;
      }
      continue;
    }
    if (toks.size() != 2 && toks.size() != 3)
      err.input(lineno, "expected 'i j [w]', got " +
                            std::to_string(toks.size()) + " fields");
    const Node i = parse_index(toks[0], lineno, err);
    const Node j = parse_index(toks[1], lineno, err);
    const double w = toks.size() == 3 ? parse_weight(toks[2], lineno, err) : 1.0;
    entries.add(i, j, w, lineno);
    max_index = std::max({max_index, i, j});
  }
  Node n = max_index + 1;
  if (declared >= 0) {
    if (declared < n)
      err.validation(lineno, "declared node count " + std::to_string(declared) +
                                 " below largest index " + std::to_string(n));
    n = declared;
  }
  return SparseSymGraph(n, entries.edges());
}

SparseSymGraph read_matrix_market(std::istream& in, const LineError& err) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) err.input(1, "empty file");
  ++lineno;
  const auto banner = split_ws(line);
  if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket" ||
      lower(banner[1]) != "matrix")
    err.input(lineno, "missing '%%MatrixMarket matrix' banner");
  const std::string layout = lower(banner[2]);
  const std::string field = lower(banner[3]);
  const std::string symmetry = lower(banner[4]);
  if (layout != "coordinate") err.input(lineno, "only coordinate layout");
  if (field != "pattern" && field != "real" && field != "integer")
    err.input(lineno, "unsupported field '" + field + "'");
  if (symmetry != "symmetric" && symmetry != "general")
    err.input(lineno, "unsupported symmetry '" + symmetry + "'");
  const bool pattern = field == "pattern";

  Node rows = -1, cols = -1;
  long long nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '%') continue;
    if (toks.size() != 3) err.input(lineno, "expected 'rows cols nnz'");
    rows = parse_index(toks[0], lineno, err) + 1;
    cols = parse_index(toks[1], lineno, err) + 1;
    const auto [p, ec] = std::from_chars(
        toks[2].data(), toks[2].data() + toks[2].size(), nnz);
    if (ec != std::errc() || p != toks[2].data() + toks[2].size() || nnz < 0)
      err.input(lineno, "cannot parse entry count");
    break;
  }
  if (rows < 0) err.input(lineno, "missing size line");
  if (rows != cols) err.validation(lineno, "adjacency matrix must be square");

  EntryCollector entries(err);
  long long read = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '%') continue;
    const std::size_t expected = pattern ? 2 : 3;
    if (toks.size() != expected)
      err.input(lineno, "expected " + std::to_string(expected) + " fields");
    const Node i = parse_index(toks[0], lineno, err);
    const Node j = parse_index(toks[1], lineno, err);
    if (i >= rows || j >= rows) err.validation(lineno, "index out of range");
    const double w = pattern ? 1.0 : parse_weight(toks[2], lineno, err);
    entries.add(i, j, w, lineno);
    ++read;
  }
  if (read != nnz)
    err.input(lineno, "expected " + std::to_string(nnz) + " entries, found " +
                          std::to_string(read));
  return SparseSymGraph(rows, entries.edges());
}

}  // namespace

SparseSymGraph load_graph(const std::filesystem::path& path,
                          GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  LineError err(path);
  if (format == GraphFormat::Auto) {
    const std::string ext = lower(path.extension().string());
    format = ext == ".mtx" ? GraphFormat::MatrixMarket : GraphFormat::EdgeList;
  }
  return format == GraphFormat::MatrixMarket ? read_matrix_market(in, err)
                                             : read_edge_list(in, err);
}

void save_edge_list(const SparseSymGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << "% nodes " << g.nodes() << '\n';
  out << std::setprecision(17);
  for (const Edge& e : g.edges())
    out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.w << '\n';
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace fconn

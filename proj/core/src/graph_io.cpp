#include "eulerlab/graph_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "eulerlab/error.hpp"

namespace eulerlab {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw InputError("graph file line " + std::to_string(line_no) + ": " + what);
}

// True when the line holds exactly one token per field.
template <typename... T>
bool parse_exact(const std::string& text, T&... fields) {
  std::istringstream ss(text);
  ((ss >> fields), ...);
  if (ss.fail()) return false;
  std::string extra;
  return !(ss >> extra);
}

}  // namespace

GraphFile read_graph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  bool in_holding = false;
  long long n = 0, m = 0;
  std::vector<EdgeGroup> edges;
  std::vector<double> holding;
  long long edge_total = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;
    if (!have_header) {
      std::string tag;
      if (!parse_exact(line, tag, n, m) || tag != "eul") fail(line_no, "expected header 'eul <n> <m>'");
      if (n < 1 || m < 0) fail(line_no, "invalid header counts");
      have_header = true;
      continue;
    }
    if (!in_holding) {
      std::string word;
      std::istringstream probe(line);
      probe >> word;
      if (word == "holding") {
        std::string extra;
        if (probe >> extra) fail(line_no, "unexpected text after 'holding'");
        in_holding = true;
        holding.assign(static_cast<std::size_t>(n), 0.5);
        continue;
      }
      long long u, v, mult;
      if (!parse_exact(line, u, v, mult)) fail(line_no, "expected '<u> <v> <mult>'");
      if (u < 0 || v < 0 || u >= n || v >= n) fail(line_no, "vertex out of range");
      if (mult < 1 || mult > UINT32_MAX) fail(line_no, "multiplicity must be a positive 32-bit integer");
      edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v),
                       static_cast<std::uint32_t>(mult)});
      edge_total += mult;
    } else {
      long long v;
      double a;
      if (!parse_exact(line, v, a)) fail(line_no, "expected '<v> <a>'");
      if (v < 0 || v >= n) fail(line_no, "vertex out of range");
      if (!(a >= 0.0 && a < 1.0)) fail(line_no, "holding must lie in [0, 1)");
      holding[static_cast<std::size_t>(v)] = a;
    }
  }
  if (!have_header) throw InputError("graph file: missing 'eul' header");
  if (edge_total != m) {
    throw InputError("graph file: header declares m = " + std::to_string(m) + " but edges sum to " +
                     std::to_string(edge_total));
  }
  return {EulerianMultigraph(static_cast<std::size_t>(n), edges), std::move(holding)};
}

GraphFile read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const EulerianMultigraph& g, const std::vector<double>& holding) {
  out << "eul " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edge_groups()) {
    out << e.source << ' ' << e.target << ' ' << e.multiplicity << '\n';
  }
  if (!holding.empty()) {
    if (holding.size() != g.vertex_count()) throw InputError("holding vector length mismatch");
    out << "holding\n";
    char buf[64];
    for (std::size_t v = 0; v < holding.size(); ++v) {
      std::snprintf(buf, sizeof buf, "%.17g", holding[v]);
      out << v << ' ' << buf << '\n';
    }
  }
}

std::string to_text(const EulerianMultigraph& g, const std::vector<double>& holding) {
  std::ostringstream ss;
  write_graph(ss, g, holding);
  return ss.str();
}

}  // namespace eulerlab

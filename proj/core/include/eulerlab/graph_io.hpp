#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eulerlab/graph.hpp"

namespace eulerlab {

// A graph together with optional per-vertex holding probabilities, as stored
// in `.eul` files.
struct GraphFile {
  EulerianMultigraph graph;
  std::vector<double> holding;  // empty when the file has no holding section
};

// Line format:
//   eul <n> <m>
//   <u> <v> <mult>        one line per edge group
//   holding               optional section header
//   <v> <a>               a in [0, 1); unlisted vertices default to 1/2
// '#' starts a comment. m counts edges with multiplicity.
GraphFile read_graph(std::istream& in);
GraphFile read_graph_file(const std::string& path);

// Edge groups sorted by (u, v); holding values printed with %.17g so that
// read_graph(write_graph(x)) == x and rewriting is byte-identical.
void write_graph(std::ostream& out, const EulerianMultigraph& g,
                 const std::vector<double>& holding = {});
std::string to_text(const EulerianMultigraph& g, const std::vector<double>& holding = {});

}  // namespace eulerlab

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "baleq/bilinear.hpp"
#include "baleq/graph.hpp"

namespace baleq {

// Parse failures carry "source:line:column: message".
struct IOError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A graph file: plain graph, optionally with a ring header and edge weights.
struct GraphFile {
    Graph graph;
    std::optional<RingSpec> ring;
    std::map<Edge, std::uint64_t> weights;  // present iff ring is

    bool weighted() const { return ring.has_value(); }
    WeightedGraph weighted_graph() const;  // requires ring
};

// Text format, one record per line: `graph <n>` header; optional `ring Z/p^k`;
// edge lines `e <i> <j> [<weight>]`; `#` starts a comment.
GraphFile parse_graph_text(std::istream& in, const std::string& source = "<input>");
GraphFile read_graph_file(const std::string& path);
std::string write_graph_text(const GraphFile& gf);

// JSON mirror {n, ring, edges:[{i,j,w}]}; `ring` and `w` omitted when absent.
GraphFile parse_graph_json(const std::string& text, const std::string& source = "<input>");
std::string write_graph_json(const GraphFile& gf);

// Bilinear structure file: JSON {p, n, m, entries:[{i, j, vec}]}.
AlternatingMap parse_structure_json(const std::string& text,
                                    const std::string& source = "<input>");
std::string write_structure_json(const AlternatingMap& map);

// Writes the figure fixtures fig1.graph .. fig7.graph, c4.graph and
// fig4_unfavorable.wgraph into `dir`; returns the file names written.
std::vector<std::string> write_fixtures(const std::string& dir);

// The fixture graphs by name ("fig1".."fig7", "c4", "fig4_unfavorable").
GraphFile fixture(const std::string& name);

}  // namespace baleq

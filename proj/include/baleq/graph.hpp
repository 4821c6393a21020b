#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "baleq/ring.hpp"

namespace baleq {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CycleBudgetExceeded : GraphError {
    std::size_t budget;
    explicit CycleBudgetExceeded(std::size_t b)
        : GraphError("CycleBudgetExceeded: more than " + std::to_string(b) + " simple cycles"),
          budget(b) {}
};

using Edge = std::pair<int, int>;  // always stored with first < second

inline Edge make_edge(int i, int j) {
    return i < j ? Edge{i, j} : Edge{j, i};
}

// Simple undirected graph on vertices 1..n.
class Graph {
public:
    Graph() : n_(0) {}
    Graph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_edge(int i, int j) const;
    int degree(int v) const;
    const std::vector<int>& neighbors(int v) const;

    bool is_connected() const;

    void check_vertex(int v) const;

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;  // 1-based; adj_[0] unused
};

// Ordered vertex list of a simple cycle, canonical form: lexicographically
// least among all rotations and reflections.
struct Cycle {
    std::vector<int> vertices;

    Cycle() = default;
    explicit Cycle(std::vector<int> vs);  // canonicalizes

    std::size_t size() const { return vertices.size(); }
    bool contains(int v) const;
    std::vector<Edge> edge_list() const;
    bool adjacent_on_cycle(int u, int v) const;

    friend bool operator==(const Cycle& a, const Cycle& b) { return a.vertices == b.vertices; }
    friend bool operator<(const Cycle& a, const Cycle& b) {
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
        return a.vertices < b.vertices;
    }
};

// Ordered vertex path v1..vt (t >= 2); endpoints are its degree-1 vertices.
struct Segment {
    std::vector<int> vertices;

    Segment() = default;
    explicit Segment(std::vector<int> vs);  // canonical direction: lex-least of the two

    std::vector<Edge> edge_list() const;

    friend bool operator==(const Segment& a, const Segment& b) { return a.vertices == b.vertices; }
    friend bool operator<(const Segment& a, const Segment& b) { return a.vertices < b.vertices; }
};

// Result of maximal_segments: open segments (endpoints of host degree != 2,
// interior of degree 2), plus closed chains (a cycle all of whose vertices have
// degree 2 except one, traversed from that vertex back to itself); is_cycle is
// set when every vertex has degree 2, in which case both lists are empty.
struct MaximalSegments {
    bool is_cycle = false;
    std::vector<Segment> open;
    std::vector<std::vector<int>> closed;
};

Graph wedge_sum(const Graph& g1, const Graph& g2, int v, int w);

constexpr std::size_t kDefaultCycleBudget = 1000000;

std::vector<Cycle> simple_cycles(const Graph& g, std::size_t budget = kDefaultCycleBudget);

MaximalSegments maximal_segments(const Graph& g);

// Γ(D): simple graph plus a weight d_{i,j} ∈ R on every edge.
class WeightedGraph {
public:
    WeightedGraph(RingSpec ring, Graph base, std::map<Edge, RingElem> weights);

    const RingSpec& ring() const { return ring_; }
    const Graph& base() const { return base_; }
    const RingElem& weight(int i, int j) const;
    const std::map<Edge, RingElem>& weights() const { return weights_; }

private:
    RingSpec ring_;
    Graph base_;
    std::map<Edge, RingElem> weights_;
};

}  // namespace baleq

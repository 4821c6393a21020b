#include "baleq/graph.hpp"

#include <algorithm>
#include <set>

namespace baleq {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw GraphError("Graph: negative vertex count");
    std::set<Edge> seen;
    for (auto& e : edges) {
        int i = e.first, j = e.second;
        if (i == j) throw GraphError("Graph: loop at vertex " + std::to_string(i));
        Edge norm = make_edge(i, j);
        if (norm.first < 1 || norm.second > n)
            throw GraphError("Graph: edge endpoint out of range 1.." + std::to_string(n));
        if (!seen.insert(norm).second)
            throw GraphError("Graph: parallel edge {" + std::to_string(norm.first) + "," +
                             std::to_string(norm.second) + "}");
    }
    edges_.assign(seen.begin(), seen.end());
    adj_.assign(static_cast<std::size_t>(n) + 1, {});
    for (auto& e : edges_) {
        adj_[e.first].push_back(e.second);
        adj_[e.second].push_back(e.first);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

void Graph::check_vertex(int v) const {
    if (v < 1 || v > n_) throw GraphError("vertex " + std::to_string(v) + " out of range");
}

bool Graph::has_edge(int i, int j) const {
    check_vertex(i);
    check_vertex(j);
    const auto& a = adj_[i];
    return std::binary_search(a.begin(), a.end(), j);
}

int Graph::degree(int v) const {
    check_vertex(v);
    return static_cast<int>(adj_[v].size());
}

const std::vector<int>& Graph::neighbors(int v) const {
    check_vertex(v);
    return adj_[v];
}

bool Graph::is_connected() const {
    if (n_ <= 1) return true;
    std::vector<char> seen(static_cast<std::size_t>(n_) + 1, 0);
    std::vector<int> stack{1};
    seen[1] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj_[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n_;
}

namespace {

std::vector<int> canonical_cycle(std::vector<int> vs) {
    if (vs.size() < 3) throw GraphError("Cycle: length must be >= 3");
    const std::size_t n = vs.size();
    auto rotate_to_min = [n](std::vector<int> c) {
        auto it = std::min_element(c.begin(), c.end());
        std::rotate(c.begin(), it, c.end());
        (void)n;
        return c;
    };
    std::vector<int> fwd = rotate_to_min(vs);
    std::reverse(vs.begin(), vs.end());
    std::vector<int> bwd = rotate_to_min(vs);
    return std::min(fwd, bwd);
}

}  // namespace

Cycle::Cycle(std::vector<int> vs) : vertices(canonical_cycle(std::move(vs))) {
    std::set<int> uniq(vertices.begin(), vertices.end());
    if (uniq.size() != vertices.size()) throw GraphError("Cycle: repeated vertex");
}

bool Cycle::contains(int v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

std::vector<Edge> Cycle::edge_list() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        out.push_back(make_edge(vertices[i], vertices[(i + 1) % vertices.size()]));
    std::sort(out.begin(), out.end());
    return out;
}

bool Cycle::adjacent_on_cycle(int u, int v) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        int a = vertices[i], b = vertices[(i + 1) % vertices.size()];
        if ((a == u && b == v) || (a == v && b == u)) return true;
    }
    return false;
}

Segment::Segment(std::vector<int> vs) {
    if (vs.size() < 2) throw GraphError("Segment: needs at least two vertices");
    std::set<int> uniq(vs.begin(), vs.end());
    if (uniq.size() != vs.size()) throw GraphError("Segment: repeated vertex");
    std::vector<int> rev(vs.rbegin(), vs.rend());
    vertices = std::min(vs, rev);
}

std::vector<Edge> Segment::edge_list() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
        out.push_back(make_edge(vertices[i], vertices[i + 1]));
    std::sort(out.begin(), out.end());
    return out;
}

Graph wedge_sum(const Graph& g1, const Graph& g2, int v, int w) {
    g1.check_vertex(v);
    g2.check_vertex(w);
    // g2's vertices keep their relative order; w maps to v, the rest go after g1's range.
    std::vector<int> map2(static_cast<std::size_t>(g2.n()) + 1, 0);
    int next = g1.n();
    for (int u = 1; u <= g2.n(); ++u) map2[u] = (u == w) ? v : ++next;
    std::vector<Edge> edges = g1.edges();
    for (auto& e : g2.edges()) edges.push_back(make_edge(map2[e.first], map2[e.second]));
    return Graph(next, std::move(edges));
}

std::vector<Cycle> simple_cycles(const Graph& g, std::size_t budget) {
    std::vector<Cycle> out;
    const int n = g.n();
    std::vector<char> onpath(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> path;

    // Each cycle is found once: smallest vertex first, second vertex smaller
    // than the last (fixes the traversal direction).
    auto dfs = [&](auto&& self, int start, int v) -> void {
        for (int w : g.neighbors(v)) {
            if (w == start && path.size() >= 3) {
                if (path[1] < path.back()) {
                    if (out.size() >= budget) throw CycleBudgetExceeded(budget);
                    out.emplace_back(path);
                }
                continue;
            }
            if (w <= start || onpath[w]) continue;
            onpath[w] = 1;
            path.push_back(w);
            self(self, start, w);
            path.pop_back();
            onpath[w] = 0;
        }
    };

    for (int s = 1; s <= n; ++s) {
        onpath[s] = 1;
        path.assign(1, s);
        dfs(dfs, s, s);
        onpath[s] = 0;
    }
    std::sort(out.begin(), out.end());
    return out;
}

MaximalSegments maximal_segments(const Graph& g) {
    if (!g.is_connected()) throw GraphError("maximal_segments: graph must be connected");
    MaximalSegments result;
    std::vector<int> branch;  // vertices of degree != 2
    for (int v = 1; v <= g.n(); ++v)
        if (g.degree(v) != 2) branch.push_back(v);
    if (branch.empty()) {
        result.is_cycle = g.n() > 0;
        return result;
    }
    std::set<Segment> open;
    std::set<std::vector<int>> closed;
    for (int s : branch) {
        for (int first : g.neighbors(s)) {
            // Walk through degree-2 vertices until the next branch vertex.
            std::vector<int> walk{s, first};
            int prev = s, cur = first;
            while (g.degree(cur) == 2) {
                const auto& nb = g.neighbors(cur);
                int nxt = (nb[0] == prev) ? nb[1] : nb[0];
                walk.push_back(nxt);
                prev = cur;
                cur = nxt;
            }
            if (cur == s) {
                // Closed chain: cycle hanging off the single branch vertex s.
                std::vector<int> rev(walk.rbegin(), walk.rend());
                closed.insert(std::min(walk, rev));
            } else {
                open.insert(Segment(walk));
            }
        }
    }
    result.open.assign(open.begin(), open.end());
    result.closed.assign(closed.begin(), closed.end());
    return result;
}

WeightedGraph::WeightedGraph(RingSpec ring, Graph base, std::map<Edge, RingElem> weights)
    : ring_(ring), base_(std::move(base)), weights_(std::move(weights)) {
    for (auto& e : base_.edges()) {
        auto it = weights_.find(e);
        if (it == weights_.end())
            throw GraphError("WeightedGraph: missing weight on edge {" +
                             std::to_string(e.first) + "," + std::to_string(e.second) + "}");
        if (it->second.spec() != ring_) throw RingMismatch();
    }
    if (weights_.size() != base_.edges().size())
        throw GraphError("WeightedGraph: weight on a non-edge");
}

const RingElem& WeightedGraph::weight(int i, int j) const {
    auto it = weights_.find(make_edge(i, j));
    if (it == weights_.end())
        throw GraphError("WeightedGraph: no edge {" + std::to_string(i) + "," +
                         std::to_string(j) + "}");
    return it->second;
}

}  // namespace baleq

#include "baleq/decompose.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace baleq {

namespace {

// Mutable subgraph in host labels.
struct Sub {
    std::set<int> verts;
    std::set<Edge> edges;
    std::map<int, std::vector<int>> adj;

    static Sub of(const Graph& g) {
        Sub s;
        for (int v = 1; v <= g.n(); ++v) s.verts.insert(v);
        for (const auto& e : g.edges()) s.edges.insert(e);
        s.rebuild();
        return s;
    }
    void rebuild() {
        adj.clear();
        for (int v : verts) adj[v];
        for (const auto& e : edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());
    }
    int deg(int v) const {
        auto it = adj.find(v);
        return it == adj.end() ? 0 : static_cast<int>(it->second.size());
    }
    bool connected() const {
        if (verts.empty()) return false;
        std::set<int> seen{*verts.begin()};
        std::vector<int> stack{*verts.begin()};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj.at(v))
                if (seen.insert(w).second) stack.push_back(w);
        }
        return seen.size() == verts.size();
    }
    bool is_tree() const { return connected() && edges.size() + 1 == verts.size(); }
    bool is_cycle() const {
        if (!connected() || verts.size() < 3) return false;
        for (int v : verts)
            if (deg(v) != 2) return false;
        return true;
    }
    // Vertex order of the unique cycle; valid only when is_cycle().
    std::vector<int> cycle_order() const {
        std::vector<int> out{*verts.begin()};
        int prev = 0, cur = *verts.begin();
        do {
            const auto& nb = adj.at(cur);
            int nxt = (nb[0] == prev) ? nb[1] : nb[0];
            out.push_back(nxt);
            prev = cur;
            cur = nxt;
        } while (cur != out[0]);
        out.pop_back();
        return out;
    }
    // Relabel to a contiguous Graph; host[i] = original label of vertex i+1.
    std::pair<Graph, std::vector<int>> to_graph() const {
        std::vector<int> host(verts.begin(), verts.end());
        std::map<int, int> idx;
        for (std::size_t i = 0; i < host.size(); ++i) idx[host[i]] = static_cast<int>(i) + 1;
        std::vector<Edge> es;
        for (const auto& e : edges) es.push_back(make_edge(idx.at(e.first), idx.at(e.second)));
        return {Graph(static_cast<int>(host.size()), es), host};
    }
};

// Maximal chains through degree-2 vertices starting at branch vertices;
// closed == true means the walk returned to its start.
struct Chain {
    std::vector<int> walk;
    bool closed;
};

std::vector<Chain> chains(const Sub& s) {
    std::vector<Chain> out;
    std::set<std::vector<int>> seen;
    for (int v : s.verts) {
        if (s.deg(v) == 2) continue;
        for (int first : s.adj.at(v)) {
            std::vector<int> walk{v, first};
            int prev = v, cur = first;
            while (s.deg(cur) == 2 && cur != v) {
                const auto& nb = s.adj.at(cur);
                int nxt = (nb[0] == prev) ? nb[1] : nb[0];
                walk.push_back(nxt);
                prev = cur;
                cur = nxt;
            }
            std::vector<int> rev(walk.rbegin(), walk.rend());
            if (seen.insert(std::min(walk, rev)).second)
                out.push_back({walk, cur == v});
        }
    }
    return out;
}

}  // namespace

BorderlessDecomposition decompose_borderless(const Graph& g, std::size_t budget) {
    if (!g.is_connected()) throw GraphError("decompose_borderless: graph must be connected");
    auto bl = is_borderless(g, budget);
    if (!bl.borderless) throw GraphError("decompose_borderless: graph is not borderless");

    Sub s = Sub::of(g);
    std::vector<GlueStep> rev;
    while (true) {
        if (s.is_tree() || s.is_cycle()) {
            GlueStep last;
            last.is_cycle = s.is_cycle();
            last.vertices.assign(s.verts.begin(), s.verts.end());
            last.edges.assign(s.edges.begin(), s.edges.end());
            last.glue_host = 0;
            rev.push_back(std::move(last));
            break;
        }
        // Candidate pieces to strip.
        struct Cand {
            bool is_cycle;
            std::vector<int> vertices;  // ascending; includes glue vertex
            int glue;
        };
        std::vector<Cand> cands;
        // Hanging trees: peel degree-1 vertices, group the removed forest by
        // its unique attachment vertex.
        {
            std::map<int, int> deg;
            for (int v : s.verts) deg[v] = s.deg(v);
            std::set<int> removed;
            std::vector<int> queue;
            for (int v : s.verts)
                if (deg[v] == 1) queue.push_back(v);
            while (!queue.empty()) {
                int v = queue.back();
                queue.pop_back();
                if (!removed.insert(v).second) continue;
                for (int w : s.adj.at(v))
                    if (!removed.count(w) && --deg[w] == 1) queue.push_back(w);
            }
            std::map<int, std::set<int>> tree_at;  // attachment vertex -> removed vertices
            std::set<int> assigned;
            for (int v : removed) {
                if (assigned.count(v)) continue;
                std::set<int> comp{v};
                std::vector<int> stack{v};
                int attach = 0;
                while (!stack.empty()) {
                    int u = stack.back();
                    stack.pop_back();
                    for (int w : s.adj.at(u)) {
                        if (removed.count(w)) {
                            if (comp.insert(w).second) stack.push_back(w);
                        } else {
                            attach = w;
                        }
                    }
                }
                if (attach == 0)
                    throw GraphError("decompose_borderless: internal peel error");
                for (int u : comp) assigned.insert(u);
                tree_at[attach].insert(comp.begin(), comp.end());
            }
            for (auto& [v, tverts] : tree_at) {
                Cand c;
                c.is_cycle = false;
                c.glue = v;
                tverts.insert(v);
                c.vertices.assign(tverts.begin(), tverts.end());
                cands.push_back(std::move(c));
            }
        }
        // Cycles hanging off a single high-degree vertex (closed chains).
        for (const auto& ch : chains(s)) {
            if (!ch.closed) continue;
            std::set<int> vs(ch.walk.begin(), ch.walk.end());
            Cand c;
            c.is_cycle = true;
            c.glue = ch.walk.front();
            c.vertices.assign(vs.begin(), vs.end());
            cands.push_back(std::move(c));
        }
        if (cands.empty())
            throw GraphError("decompose_borderless: no strippable piece (not borderless?)");
        auto best = std::min_element(cands.begin(), cands.end(),
                                     [](const Cand& a, const Cand& b) {
                                         return a.vertices < b.vertices;
                                     });
        GlueStep step;
        step.is_cycle = best->is_cycle;
        step.vertices = best->vertices;
        step.glue_host = best->glue;
        std::set<int> pv(best->vertices.begin(), best->vertices.end());
        if (best->is_cycle) {
            // Remove only the chain's own edges; the glue vertex keeps its others.
            std::set<int> interior = pv;
            interior.erase(best->glue);
            for (auto it = s.edges.begin(); it != s.edges.end();) {
                if (interior.count(it->first) || interior.count(it->second)) {
                    step.edges.push_back(*it);
                    it = s.edges.erase(it);
                } else {
                    ++it;
                }
            }
        } else {
            for (auto it = s.edges.begin(); it != s.edges.end();) {
                if (pv.count(it->first) && pv.count(it->second)) {
                    step.edges.push_back(*it);
                    it = s.edges.erase(it);
                } else {
                    ++it;
                }
            }
        }
        std::sort(step.edges.begin(), step.edges.end());
        for (int v : step.vertices)
            if (v != best->glue) s.verts.erase(v);
        s.rebuild();
        rev.push_back(std::move(step));
    }
    BorderlessDecomposition dec;
    dec.steps.assign(rev.rbegin(), rev.rend());
    if (!verify_borderless(g, dec))
        throw GraphError("decompose_borderless: replay check failed");
    return dec;
}

bool verify_borderless(const Graph& g, const BorderlessDecomposition& dec) {
    if (dec.steps.empty()) return g.n() == 0;
    std::set<int> acc_v;
    std::set<Edge> acc_e;
    for (std::size_t i = 0; i < dec.steps.size(); ++i) {
        const GlueStep& st = dec.steps[i];
        std::set<int> pv(st.vertices.begin(), st.vertices.end());
        if (i == 0) {
            if (st.glue_host != 0) return false;
        } else {
            if (!acc_v.count(st.glue_host) || !pv.count(st.glue_host)) return false;
            for (int v : pv)
                if (v != st.glue_host && acc_v.count(v)) return false;
        }
        // Piece must be a tree or cycle on its vertex set.
        std::map<int, int> deg;
        for (int v : pv) deg[v] = 0;
        for (const auto& e : st.edges) {
            if (!pv.count(e.first) || !pv.count(e.second)) return false;
            ++deg[e.first];
            ++deg[e.second];
            if (!acc_e.insert(e).second) return false;
        }
        if (st.is_cycle) {
            if (st.edges.size() != pv.size()) return false;
            for (auto& [v, d] : deg) {
                bool glue_extra = (v == st.glue_host && i > 0);
                if (!glue_extra && d != 2) return false;
                if (glue_extra && d != 2) return false;
            }
        } else {
            if (st.edges.size() + 1 != pv.size()) return false;
        }
        acc_v.insert(pv.begin(), pv.end());
    }
    if (static_cast<int>(acc_v.size()) != g.n()) return false;
    std::set<Edge> ge(g.edges().begin(), g.edges().end());
    return acc_e == ge;
}

namespace {

struct SegCand {
    Segment segment;
    std::set<int> interior;
};

std::vector<SegCand> open_segment_candidates(const Sub& s) {
    std::vector<SegCand> out;
    for (const auto& ch : chains(s)) {
        if (ch.closed) continue;
        SegCand c;
        c.segment = Segment(ch.walk);
        for (std::size_t i = 1; i + 1 < ch.walk.size(); ++i) c.interior.insert(ch.walk[i]);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const SegCand& a, const SegCand& b) {
        return a.segment < b.segment;
    });
    return out;
}

Sub strip_segment(Sub s, const SegCand& c) {
    for (const auto& e : c.segment.edge_list()) s.edges.erase(e);
    for (int v : c.interior) s.verts.erase(v);
    s.rebuild();
    return s;
}

bool remainder_ok(const Sub& s, std::size_t budget) {
    if (s.is_cycle()) return true;
    auto [g, host] = s.to_graph();
    (void)host;
    return is_net(g, budget);
}

}  // namespace

NetDecomposition decompose_net(const Graph& g, const std::optional<Anchor>& anchor,
                               std::size_t budget) {
    if (!is_net(g, budget)) throw GraphError("decompose_net: graph is not a net");
    NetDecomposition dec;
    if (anchor) {
        if (!find_bad_cycles(g, budget).empty())
            throw GraphError("decompose_net: anchor-aware decomposition needs no bad cycles");
        if (g.n() == 3 && g.edge_count() == 3)
            throw GraphError("decompose_net: anchor-aware decomposition undefined for C3");
        dec.anchor_aware = true;
    }
    auto non_anchor_count = [&](const std::set<int>& vs) {
        int c = 0;
        for (int v : vs)
            if (!anchor->contains(v)) ++c;
        return c;
    };

    std::vector<NetStep> rev;
    // Depth-first over strip orders; without an anchor the first valid strip
    // (lex-smallest) always succeeds, with an anchor we may backtrack.
    auto search = [&](auto&& self, const Sub& s) -> bool {
        if (s.is_cycle()) {
            auto order = s.cycle_order();
            if (anchor) {
                std::set<int> vs(order.begin(), order.end());
                if (non_anchor_count(vs) != 2) return false;
            }
            dec.base = Cycle(order);
            return true;
        }
        for (const auto& cand : open_segment_candidates(s)) {
            if (anchor) {
                int na = non_anchor_count(cand.interior);
                if (na < 1 || na > 2) continue;
            }
            Sub next = strip_segment(s, cand);
            if (!remainder_ok(next, budget)) continue;
            rev.push_back({cand.segment,
                           {cand.segment.vertices.front(), cand.segment.vertices.back()}});
            if (self(self, next)) return true;
            rev.pop_back();
        }
        return false;
    };
    if (!search(search, Sub::of(g)))
        throw GraphError(anchor ? "decompose_net: no anchor-compatible decomposition"
                                : "decompose_net: no valid strip order");
    dec.steps.assign(rev.rbegin(), rev.rend());
    if (!verify_net(g, dec)) throw GraphError("decompose_net: replay check failed");
    return dec;
}

bool verify_net(const Graph& g, const NetDecomposition& dec) {
    std::set<int> acc_v(dec.base.vertices.begin(), dec.base.vertices.end());
    std::set<Edge> acc_e;
    for (const auto& e : dec.base.edge_list()) acc_e.insert(e);
    for (const auto& st : dec.steps) {
        const auto& vs = st.segment.vertices;
        if (vs.size() < 2) return false;
        if (st.attach != std::make_pair(vs.front(), vs.back())) return false;
        if (!acc_v.count(vs.front()) || !acc_v.count(vs.back())) return false;
        for (std::size_t i = 1; i + 1 < vs.size(); ++i) {
            if (acc_v.count(vs[i])) return false;
            acc_v.insert(vs[i]);
        }
        for (const auto& e : st.segment.edge_list())
            if (!acc_e.insert(e).second) return false;
    }
    if (static_cast<int>(acc_v.size()) != g.n()) return false;
    std::set<Edge> ge(g.edges().begin(), g.edges().end());
    return acc_e == ge;
}

}  // namespace baleq

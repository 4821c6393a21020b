#include "baleq/classify.hpp"

#include <algorithm>
#include <set>

namespace baleq {

bool Anchor::contains(int v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

namespace {

// Orient a bad cycle as u_1..u_r with the degree-2 pair at positions r-1, r.
// Returns the high-degree vertices in cycle order ending next to the pair.
struct BadPattern {
    bool matches = false;
    std::vector<int> high;      // cycle order
    std::pair<int, int> low;    // ascending
};

BadPattern match_bad(const Graph& g, const Cycle& c) {
    BadPattern out;
    std::vector<int> low;
    for (int v : c.vertices)
        if (g.degree(v) == 2) low.push_back(v);
    if (low.size() != 2) return out;
    if (!c.adjacent_on_cycle(low[0], low[1])) return out;
    for (int v : c.vertices)
        if (g.degree(v) != 2 && g.degree(v) <= 2) return out;
    out.matches = true;
    for (int v : c.vertices)
        if (g.degree(v) > 2) out.high.push_back(v);
    out.low = {std::min(low[0], low[1]), std::max(low[0], low[1])};
    return out;
}

struct CycleData {
    std::vector<Cycle> cycles;
    std::vector<std::vector<int>> deg2;  // per cycle: its degree-2 vertices (host degrees)
};

CycleData cycle_data(const Graph& g, std::size_t budget) {
    CycleData d;
    d.cycles = simple_cycles(g, budget);
    d.deg2.resize(d.cycles.size());
    for (std::size_t i = 0; i < d.cycles.size(); ++i)
        for (int v : d.cycles[i].vertices)
            if (g.degree(v) == 2) d.deg2[i].push_back(v);
    return d;
}

// A cycle's violation state for a pinned set W: fewer than two free degree-2
// vertices, or exactly two that are adjacent on the cycle.
bool violated(const Cycle& c, const std::vector<int>& deg2, const std::set<int>& w) {
    std::vector<int> free;
    for (int v : deg2)
        if (!w.count(v)) free.push_back(v);
    if (free.size() < 2) return true;
    if (free.size() == 2 && c.adjacent_on_cycle(free[0], free[1])) return true;
    return false;
}

bool admissible_with(const Graph&, const CycleData& d, const std::set<int>& w) {
    static const std::set<int> empty;
    for (std::size_t i = 0; i < d.cycles.size(); ++i)
        if (violated(d.cycles[i], d.deg2[i], w) && !violated(d.cycles[i], d.deg2[i], empty))
            return false;
    return true;
}

std::vector<int> core_with(const Graph& g, const CycleData& d) {
    std::vector<char> on_cycle(static_cast<std::size_t>(g.n()) + 1, 0);
    for (const auto& c : d.cycles)
        for (int v : c.vertices) on_cycle[v] = 1;
    std::vector<int> core;
    for (int v = 1; v <= g.n(); ++v)
        if (g.degree(v) != 2 || !on_cycle[v]) core.push_back(v);
    return core;
}

}  // namespace

std::vector<BadCycleReport> find_bad_cycles(const Graph& g, std::size_t budget) {
    std::vector<BadCycleReport> out;
    for (const auto& c : simple_cycles(g, budget)) {
        BadPattern p = match_bad(g, c);
        if (p.matches) out.push_back({c, p.low});
    }
    return out;
}

bool is_unfavorable(const WeightedGraph& wg, const ProximityReport& prox) {
    const Graph& g = wg.base();
    BadPattern p = match_bad(g, prox.cycle);
    if (!p.matches || p.low != prox.low_degree_pair) return false;
    Edge low_edge = make_edge(prox.low_degree_pair.first, prox.low_degree_pair.second);
    for (const auto& e : prox.cycle.edge_list()) {
        bool zero_required = (e != low_edge);
        bool is_zero = wg.weight(e.first, e.second).residue() == 0;
        if (zero_required != is_zero) return false;
    }
    if (prox.attachments.size() != p.high.size()) return false;
    for (int u : p.high) {
        auto it = prox.attachments.find(u);
        if (it == prox.attachments.end()) return false;
        int t = it->second;
        if (prox.cycle.contains(t)) return false;
        if (!g.has_edge(u, t)) return false;
        if (wg.weight(u, t).residue() == 0) return false;
    }
    return true;
}

std::vector<ProximityReport> find_unfavorable_proximities(const WeightedGraph& wg,
                                                          std::size_t budget) {
    const Graph& g = wg.base();
    std::vector<ProximityReport> out;
    for (const auto& bad : find_bad_cycles(g, budget)) {
        Edge low_edge = make_edge(bad.low_degree_pair.first, bad.low_degree_pair.second);
        bool residues_ok = true;
        for (const auto& e : bad.cycle.edge_list()) {
            bool zero_required = (e != low_edge);
            if (zero_required != (wg.weight(e.first, e.second).residue() == 0)) {
                residues_ok = false;
                break;
            }
        }
        if (!residues_ok) continue;
        BadPattern p = match_bad(g, bad.cycle);
        std::vector<std::vector<int>> candidates;
        bool feasible = true;
        for (int u : p.high) {
            std::vector<int> cand;
            for (int t : g.neighbors(u))
                if (!bad.cycle.contains(t) && wg.weight(u, t).residue() != 0) cand.push_back(t);
            if (cand.empty()) {
                feasible = false;
                break;
            }
            candidates.push_back(cand);
        }
        if (!feasible) continue;
        std::vector<std::size_t> idx(candidates.size(), 0);
        while (true) {
            ProximityReport rep;
            rep.cycle = bad.cycle;
            rep.low_degree_pair = bad.low_degree_pair;
            for (std::size_t i = 0; i < p.high.size(); ++i)
                rep.attachments[p.high[i]] = candidates[i][idx[i]];
            out.push_back(std::move(rep));
            std::size_t i = candidates.size();
            while (i > 0) {
                --i;
                if (++idx[i] < candidates[i].size()) break;
                idx[i] = 0;
                if (i == 0) {
                    i = candidates.size() + 1;
                    break;
                }
            }
            if (i == candidates.size() + 1) break;
            if (candidates.empty()) break;
        }
    }
    return out;
}

BorderlessResult is_borderless(const Graph& g, std::size_t budget) {
    auto cycles = simple_cycles(g, budget);
    for (std::size_t i = 0; i < cycles.size(); ++i)
        for (std::size_t j = i + 1; j < cycles.size(); ++j) {
            int common = 0;
            for (int v : cycles[i].vertices)
                if (cycles[j].contains(v)) ++common;
            if (common >= 2) return {false, std::make_pair(cycles[i], cycles[j])};
        }
    return {true, std::nullopt};
}

bool is_net(const Graph& g, std::size_t budget) {
    if (!g.is_connected() || g.n() < 3) return false;
    bool all_deg2 = true;
    for (int v = 1; v <= g.n(); ++v)
        if (g.degree(v) != 2) all_deg2 = false;
    if (all_deg2) return true;  // simple cycle, η = 1
    auto cycles = simple_cycles(g, budget);
    if (cycles.size() < 2) return false;
    std::set<Edge> covered;
    for (const auto& c : cycles)
        for (const auto& e : c.edge_list()) covered.insert(e);
    if (covered.size() != g.edge_count()) return false;
    auto segs = maximal_segments(g);
    std::vector<std::vector<Edge>> seg_edges;
    for (const auto& s : segs.open) seg_edges.push_back(s.edge_list());
    // For each cycle, the set of maximal segments lying inside it.
    std::vector<std::set<std::size_t>> seg_in(cycles.size());
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
        std::set<Edge> ce;
        for (const auto& e : cycles[ci].edge_list()) ce.insert(e);
        for (std::size_t si = 0; si < seg_edges.size(); ++si) {
            bool inside = true;
            for (const auto& e : seg_edges[si])
                if (!ce.count(e)) {
                    inside = false;
                    break;
                }
            if (inside) seg_in[ci].insert(si);
        }
    }
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
        bool shares = false;
        for (std::size_t cj = 0; cj < cycles.size() && !shares; ++cj) {
            if (ci == cj) continue;
            for (std::size_t si : seg_in[ci])
                if (seg_in[cj].count(si)) {
                    shares = true;
                    break;
                }
        }
        if (!shares) return false;
    }
    return true;
}

int eta(const Graph& g, std::size_t budget) {
    if (!is_net(g, budget)) throw GraphError("eta: graph is not a net");
    return static_cast<int>(g.edge_count()) - g.n() + 1;
}

bool is_admissible(const Graph& g, const std::vector<int>& w, std::size_t budget) {
    CycleData d = cycle_data(g, budget);
    return admissible_with(g, d, std::set<int>(w.begin(), w.end()));
}

std::vector<int> anchor_core(const Graph& g, std::size_t budget) {
    CycleData d = cycle_data(g, budget);
    return core_with(g, d);
}

Anchor anchors(const Graph& g, std::size_t budget) {
    CycleData d = cycle_data(g, budget);
    std::vector<int> core = core_with(g, d);
    std::set<int> w(core.begin(), core.end());
    for (int v = 1; v <= g.n(); ++v) {
        if (w.count(v)) continue;
        w.insert(v);
        if (!admissible_with(g, d, w)) w.erase(v);
    }
    Anchor a;
    a.vertices.assign(w.begin(), w.end());
    return a;
}

std::vector<Anchor> anchors_all(const Graph& g, std::size_t max_count, std::size_t budget) {
    CycleData d = cycle_data(g, budget);
    std::vector<int> core = core_with(g, d);
    std::set<int> base(core.begin(), core.end());
    std::vector<int> cand;
    for (int v = 1; v <= g.n(); ++v)
        if (!base.count(v)) cand.push_back(v);
    if (cand.size() > 24) throw GraphError("anchors_all: too many candidate vertices");
    std::vector<Anchor> out;
    const std::size_t total = std::size_t{1} << cand.size();
    for (std::size_t mask = 0; mask < total; ++mask) {
        std::set<int> w(base.begin(), base.end());
        for (std::size_t i = 0; i < cand.size(); ++i)
            if (mask & (std::size_t{1} << i)) w.insert(cand[i]);
        if (!admissible_with(g, d, w)) continue;
        bool maximal = true;
        for (std::size_t i = 0; i < cand.size() && maximal; ++i) {
            if (mask & (std::size_t{1} << i)) continue;
            std::set<int> w2 = w;
            w2.insert(cand[i]);
            if (admissible_with(g, d, w2)) maximal = false;
        }
        if (!maximal) continue;
        Anchor a;
        a.vertices.assign(w.begin(), w.end());
        out.push_back(std::move(a));
        if (out.size() > max_count) throw GraphError("anchors_all: more anchors than budget");
    }
    return out;
}

namespace {

// Union-find with parity (0 = same sign as root, 1 = opposite).
struct ParityDSU {
    std::vector<int> parent;
    std::vector<int> parity;
    explicit ParityDSU(int n) : parent(n + 1), parity(n + 1, 0) {
        for (int i = 0; i <= n; ++i) parent[i] = i;
    }
    std::pair<int, int> find(int v) {
        if (parent[v] == v) return {v, 0};
        auto [r, p] = find(parent[v]);
        parent[v] = r;
        parity[v] ^= p;
        return {r, parity[v]};
    }
    // Relate u and v with given relative parity; false on contradiction.
    bool unite(int u, int v, int rel) {
        auto [ru, pu] = find(u);
        auto [rv, pv] = find(v);
        if (ru == rv) return (pu ^ pv) == rel;
        parent[ru] = rv;
        parity[ru] = pu ^ pv ^ rel;
        return true;
    }
};

}  // namespace

SignFunction sign_function(const Graph& g, const Anchor& anchor, int positive_at,
                           std::size_t budget) {
    (void)budget;
    SignFunction sf;
    sf.sigma.assign(static_cast<std::size_t>(g.n()) + 1, 0);
    if (anchor.vertices.empty()) return sf;  // e.g. C3: all zeros
    if (!anchor.contains(positive_at))
        throw GraphError("sign_function: positive_at must be an anchor vertex");
    ParityDSU dsu(g.n());
    for (const auto& e : g.edges())
        if (anchor.contains(e.first) && anchor.contains(e.second))
            if (!dsu.unite(e.first, e.second, 0))
                throw GraphError("sign_function: parity contradiction (adjacent anchors)");
    for (int w = 1; w <= g.n(); ++w) {
        if (anchor.contains(w)) continue;
        const auto& nb = g.neighbors(w);
        std::vector<int> anb;
        for (int u : nb)
            if (anchor.contains(u)) anb.push_back(u);
        for (std::size_t i = 0; i < anb.size(); ++i)
            for (std::size_t j = i + 1; j < anb.size(); ++j)
                if (!dsu.unite(anb[i], anb[j], 1))
                    throw GraphError("sign_function: parity contradiction (shared neighbor)");
    }
    // Orient each component: positive_at's component by positive_at, the others
    // by their lowest-index anchor vertex.
    std::map<int, int> root_sign;  // root -> sign of parity-0 members
    {
        auto [r, p] = dsu.find(positive_at);
        root_sign[r] = p == 0 ? 1 : -1;
    }
    for (int v : anchor.vertices) {
        auto [r, p] = dsu.find(v);
        if (!root_sign.count(r)) root_sign[r] = p == 0 ? 1 : -1;
    }
    for (int v : anchor.vertices) {
        auto [r, p] = dsu.find(v);
        sf.sigma[v] = root_sign[r] * (p == 0 ? 1 : -1);
    }
    return sf;
}

std::optional<std::string> check_sign_function(const Graph& g, const Anchor& anchor,
                                               const SignFunction& sf) {
    for (int v = 1; v <= g.n(); ++v) {
        bool in = anchor.contains(v);
        if (in && sf(v) == 0) return "anchor vertex " + std::to_string(v) + " has sign 0";
        if (!in && sf(v) != 0) return "non-anchor vertex " + std::to_string(v) + " has nonzero sign";
    }
    for (const auto& e : g.edges())
        if (anchor.contains(e.first) && anchor.contains(e.second) && sf(e.first) != sf(e.second))
            return "adjacent anchor vertices " + std::to_string(e.first) + "," +
                   std::to_string(e.second) + " differ in sign";
    for (int w = 1; w <= g.n(); ++w) {
        if (anchor.contains(w)) continue;
        const auto& nb = g.neighbors(w);
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (anchor.contains(nb[i]) && anchor.contains(nb[j]) &&
                    sf(nb[i]) != -sf(nb[j]))
                    return "anchor vertices " + std::to_string(nb[i]) + "," +
                           std::to_string(nb[j]) + " share non-anchor neighbor " +
                           std::to_string(w) + " but are not opposite";
    }
    return std::nullopt;
}

}  // namespace baleq

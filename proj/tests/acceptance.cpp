// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failing criteria.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "baleq/bilinear.hpp"
#include "baleq/classify.hpp"
#include "baleq/graph.hpp"
#include "baleq/groups.hpp"
#include "baleq/io.hpp"
#include "baleq/label.hpp"
#include "baleq/oracle.hpp"

using namespace baleq;

namespace {

std::uint64_t upow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::vector<Edge> vertex_pairs(int n) {
    std::vector<Edge> out;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) out.push_back({i, j});
    return out;
}

Graph graph_from_mask(int n, const std::vector<Edge>& pairs, std::uint64_t mask) {
    std::vector<Edge> es;
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (mask >> k & 1) es.push_back(pairs[k]);
    return Graph(n, std::move(es));
}

WeightedGraph weigh(const Graph& g, const RingSpec& R, const std::vector<std::uint64_t>& w) {
    std::map<Edge, RingElem> ws;
    for (std::size_t k = 0; k < g.edges().size(); ++k)
        ws.emplace(g.edges()[k], RingElem(R, w[k]));
    return WeightedGraph(R, g, std::move(ws));
}

// Both directions of the cycle from each start vertex; v[1..n].
std::vector<std::vector<int>> cycle_enumerations(const Graph& g) {
    std::vector<int> order{1};
    int prev = 0, cur = 1;
    while (order.size() < static_cast<std::size_t>(g.n())) {
        for (int nb : g.neighbors(cur))
            if (nb != prev) {
                order.push_back(nb);
                prev = cur;
                cur = nb;
                break;
            }
    }
    std::vector<std::vector<int>> out;
    int n = g.n();
    for (int start = 0; start < n; ++start)
        for (int dir : {1, -1}) {
            std::vector<int> v(static_cast<std::size_t>(n) + 1, 0);
            for (int i = 0; i < n; ++i)
                v[static_cast<std::size_t>(i) + 1] =
                    order[static_cast<std::size_t>(((start + dir * i) % n + n) % n)];
            out.push_back(v);
        }
    return out;
}

struct Tally {
    std::uint64_t checked = 0, unknown = 0;
};

// ---------------------------------------------------------------- criterion 1

bool criterion1(std::string& detail) {
    RingSpec R(3, 1);
    Tally t;
    for (int n = 3; n <= 5; ++n) {
        auto pairs = vertex_pairs(n);
        const std::uint64_t top = 1ull << pairs.size();
        for (std::uint64_t mask = 0; mask < top; ++mask) {
            Graph g = graph_from_mask(n, pairs, mask);
            if (!g.is_connected()) continue;
            const std::size_t E = g.edges().size();
            auto check_one = [&](const std::vector<std::uint64_t>& w) -> bool {
                WeightedGraph wg = weigh(g, R, w);
                auto out = label_general(wg);
                ++t.checked;
                if (out.kind == LabelOutcome::Kind::Labeled)
                    return verify_labeling(wg, *out.labeling);
                if (out.kind == LabelOutcome::Kind::NoSolution)
                    return oracle_solve(wg).status == OracleStatus::Unsolvable;
                ++t.unknown;
                return true;
            };
            if (upow(3, static_cast<unsigned>(E)) <= 729) {
                std::vector<std::uint64_t> w(E, 0);
                while (true) {
                    if (!check_one(w)) {
                        detail = "disagreement on n=" + std::to_string(n) +
                                 " mask=" + std::to_string(mask);
                        return false;
                    }
                    std::size_t i = 0;
                    while (i < E && ++w[i] == 3) w[i++] = 0;
                    if (i == E) break;
                }
            } else {
                std::mt19937_64 rng(0xC1 * 1000003 + mask * 97 + static_cast<std::uint64_t>(n));
                for (int trial = 0; trial < 200; ++trial) {
                    std::vector<std::uint64_t> w(E);
                    for (auto& x : w) x = rng() % 3;
                    if (!check_one(w)) {
                        detail = "disagreement on n=" + std::to_string(n) +
                                 " mask=" + std::to_string(mask) + " trial=" + std::to_string(trial);
                        return false;
                    }
                }
            }
        }
    }
    detail = std::to_string(t.checked) + " instances, " + std::to_string(t.unknown) + " Unknown";
    return true;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2(std::string& detail) {
    Graph gamma4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 3}});
    auto pres = group_from_graph(gamma4, 3, 1);
    auto img = commutator_image(pres);
    // (1,0,1,0) in the order e12,e23,e34,e13 is c12+c34; sorted edge order of
    // the presentation is (1,2),(1,3),(2,3),(3,4).
    std::vector<std::uint64_t> missing{1, 0, 0, 1};
    if (img.exceeded || img.full || img.box_size != 81 || img.image.size() >= 81 ||
        img.image.count(missing)) {
        detail = "Gamma4 image not a strict subset missing c12+c34";
        return false;
    }
    auto presc = group_from_graph(Graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}), 3, 1);
    auto imgc = commutator_image(presc);
    if (imgc.exceeded || !imgc.full || imgc.image.size() != 81) {
        detail = "C4 image is not all 81 elements";
        return false;
    }
    detail = "Gamma4 image " + std::to_string(img.image.size()) + "/81 missing (1,0,1,0); C4 81/81";
    return true;
}

// ---------------------------------------------------------------- criterion 3

bool criterion3(std::string& detail) {
    RingSpec R(3, 1);
    Graph g(4, {{1, 2}, {2, 3}, {1, 3}, {1, 4}});
    // Unfavorable residue pattern per the definition: 0 on the cycle edges at
    // the high-degree vertex, nonzero on the low-degree edge and attachment.
    std::map<Edge, RingElem> bad{{{1, 2}, RingElem(R, 0)},
                                 {{1, 3}, RingElem(R, 0)},
                                 {{2, 3}, RingElem(R, 1)},
                                 {{1, 4}, RingElem(R, 1)}};
    WeightedGraph wbad(R, g, bad);
    auto out = label_general(wbad);
    if (out.kind != LabelOutcome::Kind::NoSolution || !out.certificate ||
        !is_unfavorable(wbad, *out.certificate)) {
        detail = "no NoSolution certificate on the unfavorable weights";
        return false;
    }
    auto cnt = oracle_count(wbad);
    if (cnt.exceeded || cnt.count != 0) {
        detail = "oracle did not confirm unsolvability";
        return false;
    }
    // The literally quoted weights d12=1,d23=0,d13=0,d14=1 are solvable
    // (v3 -> (0,0) works); both engine and oracle agree.
    std::map<Edge, RingElem> lit{{{1, 2}, RingElem(R, 1)},
                                 {{1, 3}, RingElem(R, 0)},
                                 {{2, 3}, RingElem(R, 0)},
                                 {{1, 4}, RingElem(R, 1)}};
    WeightedGraph wlit(R, g, lit);
    auto lout = label_general(wlit);
    bool lit_solvable = lout.kind == LabelOutcome::Kind::Labeled &&
                        verify_labeling(wlit, *lout.labeling) &&
                        oracle_solve(wlit).status == OracleStatus::Labeled;
    detail = "unfavorable weights: NoSolution + certificate, oracle exhausted all 6561 "
             "assignments; transposed weight quote is solvable (" +
             std::string(lit_solvable ? "confirmed" : "NOT confirmed") + ")";
    return lit_solvable;
}

// ---------------------------------------------------------------- criterion 4

bool criterion4(std::string& detail) {
    struct Combo {
        Graph g;
        std::uint64_t p;
        unsigned r;
    };
    Graph k2(2, {{1, 2}});
    Graph p3(3, {{1, 2}, {2, 3}});
    Graph tri(3, {{1, 2}, {2, 3}, {1, 3}});
    Graph p4(4, {{1, 2}, {2, 3}, {3, 4}});
    Graph star3(4, {{1, 2}, {1, 3}, {1, 4}});
    Graph c4(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}});
    Graph c4c(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 3}});
    std::vector<Combo> pool;
    for (std::uint64_t p : {2, 3, 5, 7}) pool.push_back({k2, p, 1});
    for (std::uint64_t p : {2, 3}) pool.push_back({k2, p, 2});
    pool.push_back({k2, 2, 3});
    for (std::uint64_t p : {2, 3}) pool.push_back({p3, p, 1});
    for (std::uint64_t p : {2, 3}) pool.push_back({tri, p, 1});
    pool.push_back({p4, 2, 1});
    pool.push_back({star3, 2, 1});
    pool.push_back({c4, 2, 1});
    pool.push_back({c4c, 2, 1});

    std::mt19937_64 rng(0xC4C4);
    for (int trial = 0; trial < 50; ++trial) {
        const Combo& cb = pool[rng() % pool.size()];
        auto pres = group_from_graph(cb.g, cb.p, cb.r);
        unsigned E = static_cast<unsigned>(cb.g.edge_count());
        unsigned V = static_cast<unsigned>(cb.g.n());
        std::uint64_t expect_order = upow(cb.p, E + V + 3 * cb.r - 3);
        std::uint64_t expect_derived = upow(cb.p, E + cb.r - 1);

        // Enumerate all normal forms; they are pairwise distinct by definition,
        // counted explicitly.
        std::set<GroupElement> all;
        GroupElement x = identity(pres);
        bool more = true;
        while (more) {
            all.insert(x);
            more = false;
            for (std::size_t i = 1; i < x.gen.size() && !more; ++i) {
                if (++x.gen[i] < pres.gen_orders[i]) more = true;
                else x.gen[i] = 0;
            }
            for (std::size_t b = 0; b < x.central.size() && !more; ++b) {
                if (++x.central[b] < pres.basis_orders[b]) more = true;
                else x.central[b] = 0;
            }
        }
        if (all.size() != expect_order) {
            detail = "order mismatch on trial " + std::to_string(trial);
            return false;
        }
        std::uint64_t derived = 1;
        for (std::uint64_t o : pres.basis_orders) derived *= o;
        if (derived != expect_derived) {
            detail = "derived order mismatch on trial " + std::to_string(trial);
            return false;
        }
        auto ex = group_exponent_by_enumeration(pres);
        std::uint64_t expect_exp = cb.p == 2 ? upow(2, cb.r + 1) : upow(cb.p, cb.r);
        if (!ex || *ex != expect_exp || group_sizes(pres).exponent != expect_exp) {
            detail = "exponent mismatch on trial " + std::to_string(trial);
            return false;
        }
    }
    detail = "50 seeded presentations: order, derived order and exponent formulas hold";
    return true;
}

// ---------------------------------------------------------------- criterion 5

Graph delete_segment(const Graph& g, const Segment& seg) {
    std::set<Edge> gone(seg.edge_list().begin(), seg.edge_list().end());
    std::vector<Edge> kept;
    for (const Edge& e : g.edges())
        if (!gone.count(e)) kept.push_back(e);
    std::set<int> used;
    for (const Edge& e : kept) {
        used.insert(e.first);
        used.insert(e.second);
    }
    std::map<int, int> relabel;
    for (int v : used) relabel[v] = static_cast<int>(relabel.size()) + 1;
    std::vector<Edge> es;
    for (const Edge& e : kept) es.push_back(make_edge(relabel[e.first], relabel[e.second]));
    return Graph(static_cast<int>(used.size()), std::move(es));
}

bool net_checks(const Graph& g, std::string& detail) {
    int E = static_cast<int>(g.edge_count()), V = g.n();
    int et = eta(g);
    if (et != E - V + 1) {
        detail = "eta formula fails";
        return false;
    }
    if (et >= 2) {
        auto segs = maximal_segments(g);
        if (segs.open.empty()) {
            detail = "net with eta >= 2 has no maximal segment";
            return false;
        }
        for (const auto& seg : segs.open) {
            Graph h = delete_segment(g, seg);
            if (!h.is_connected() || !is_net(h) || eta(h) != et - 1) {
                detail = "maximal-segment deletion does not reduce eta by 1";
                return false;
            }
        }
    }
    auto a = anchors(g);
    if (!is_admissible(g, a.vertices)) {
        detail = "canonical anchor is not admissible";
        return false;
    }
    for (int v = 1; v <= g.n(); ++v) {
        if (a.contains(v)) continue;
        auto w = a.vertices;
        w.push_back(v);
        std::sort(w.begin(), w.end());
        if (is_admissible(g, w)) {
            detail = "canonical anchor is not maximal";
            return false;
        }
    }
    if (find_bad_cycles(g).empty() && !a.vertices.empty()) {
        auto sf = sign_function(g, a, a.vertices.front());
        if (auto why = check_sign_function(g, a, sf)) {
            detail = "sign function clause fails: " + *why;
            return false;
        }
    }
    return true;
}

Graph random_net(std::mt19937_64& rng, int max_v) {
    int base = 3 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_v - 2));
    std::vector<Edge> es;
    for (int i = 1; i < base; ++i) es.push_back({i, i + 1});
    es.push_back({1, base});
    int V = base;
    int steps = 1 + static_cast<int>(rng() % 3);
    for (int s = 0; s < steps; ++s) {
        Graph g(V, es);
        int u = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(V));
        int w = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(V));
        if (u == w) continue;
        int room = max_v - V;
        int interior = room > 0 ? static_cast<int>(rng() % static_cast<std::uint64_t>(room + 1)) : 0;
        if (interior == 0) {
            if (g.has_edge(u, w)) continue;
            es.push_back(make_edge(u, w));
        } else {
            int prev = u;
            for (int t = 0; t < interior; ++t) {
                ++V;
                es.push_back(make_edge(prev, V));
                prev = V;
            }
            es.push_back(make_edge(prev, w));
        }
    }
    return Graph(V, es);
}

bool criterion5(std::string& detail) {
    std::uint64_t nets = 0;
    // Exhaustive over all labeled connected graphs with <= 6 vertices.
    for (int n = 3; n <= 6; ++n) {
        auto pairs = vertex_pairs(n);
        const std::uint64_t top = 1ull << pairs.size();
        for (std::uint64_t mask = 0; mask < top; ++mask) {
            Graph g = graph_from_mask(n, pairs, mask);
            if (!g.is_connected() || !is_net(g)) continue;
            ++nets;
            if (!net_checks(g, detail)) {
                detail += " (n=" + std::to_string(n) + " mask=" + std::to_string(mask) + ")";
                return false;
            }
        }
    }
    // Seeded random nets on 7 and 8 vertices (full exhaustion at these sizes
    // exceeds the runtime budget; see the acceptance notes).
    std::mt19937_64 rng(0xC5C5);
    std::uint64_t sampled = 0;
    while (sampled < 1000) {
        Graph g = random_net(rng, 8);
        if (g.n() < 7 || !is_net(g)) continue;
        ++sampled;
        if (!net_checks(g, detail)) {
            detail += " (sampled 7-8 vertex net)";
            return false;
        }
    }
    detail = std::to_string(nets) + " nets exhaustive on <=6 vertices + 1000 sampled on 7-8";
    return true;
}

// ---------------------------------------------------------------- criterion 6

WeightedGraph random_cycle(std::mt19937_64& rng, const RingSpec& R, int n) {
    std::vector<Edge> es;
    for (int i = 1; i < n; ++i) es.push_back({i, i + 1});
    es.push_back({1, n});
    Graph g(n, es);
    std::vector<std::uint64_t> w(g.edge_count());
    for (auto& x : w) x = rng() % R.modulus();
    return weigh(g, R, w);
}

std::uint64_t random_unit(std::mt19937_64& rng, const RingSpec& R) {
    while (true) {
        std::uint64_t x = rng() % R.modulus();
        if (x % R.p() != 0) return x;
    }
}

bool check_cycle_clauses(const WeightedGraph& wg, const Labeling& lab, int s, int r,
                         const RingElem& a, const RingElem& b, const RingElem& c) {
    if (!(lab.at(s).first == a) || !(lab.at(s).second == b)) return false;
    const std::size_t n = static_cast<std::size_t>(wg.base().n());
    for (const auto& v : cycle_enumerations(wg.base())) {
        std::size_t ps = 0, pr = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            if (v[i] == s) ps = i;
            if (v[i] == r) pr = i;
        }
        if (!(ps < pr && pr <= n - 2)) continue;
        bool ok = lab.at(v[pr + 1]).second == c;
        for (std::size_t k = 1; k < pr && ok; ++k) ok = lab.at(v[k]).first.is_unit();
        for (std::size_t k = pr + 1; k < n && ok; ++k) ok = lab.at(v[k]).second.is_unit();
        if (ok) return true;
    }
    return false;
}

bool check_cycle_residue2_clauses(const WeightedGraph& wg, const Labeling& lab, int r,
                                  const RingElem& a1, const RingElem& a2, const RingElem& a3,
                                  const RingElem& a4) {
    const std::size_t n = static_cast<std::size_t>(wg.base().n());
    if (!(lab.at(1).first == a3)) return false;
    for (const auto& v : cycle_enumerations(wg.base())) {
        if (v[1] != 1) continue;  // the corollary's enumeration starts at v1
        std::size_t pr = 0;
        for (std::size_t i = 1; i <= n; ++i)
            if (v[i] == r) pr = i;
        if (!(2 <= pr && pr <= n - 2)) continue;
        bool ok = lab.at(v[pr + 1]).second == a4;
        for (std::size_t k = 1; k < pr && ok; ++k) {
            const auto& [x, y] = lab.at(v[k]);
            ok = x.is_unit() && (!y.is_unit() || mul(y, inverse(x)).residue() == a1.residue());
        }
        for (std::size_t k = pr + 1; k < n && ok; ++k) {
            const auto& [x, y] = lab.at(v[k]);
            ok = y.is_unit() && (!x.is_unit() || mul(y, inverse(x)).residue() == a2.residue());
        }
        if (ok) return true;
    }
    return false;
}

bool check_net_clauses(const WeightedGraph& wg, const Labeling& lab, const SignFunction& sf, int s,
                       const RingElem& a, const RingElem& b) {
    const RingSpec& R = wg.ring();
    std::uint64_t rho = b.is_unit() ? mul(inverse(a), b).residue() : inverse(a).residue();
    std::uint64_t gamma = find_unit_avoiding(R, rho).residue();
    if (!(lab.at(s).first == a) || !(lab.at(s).second == b)) return false;
    for (int v = 1; v <= wg.base().n(); ++v) {
        const auto& [x, y] = lab.at(v);
        if (sf(v) == 1) {
            if (!x.is_unit()) return false;
            if (y.is_unit() && mul(y, inverse(x)).residue() != rho) return false;
        } else if (sf(v) == -1) {
            if (!y.is_unit()) return false;
            if (x.is_unit() && mul(y, inverse(x)).residue() != gamma) return false;
        }
    }
    return true;
}

Graph random_borderless(std::mt19937_64& rng, int max_v) {
    bool start_cycle = rng() % 2 == 0;
    std::vector<Edge> es;
    int V;
    if (start_cycle) {
        V = 4 + static_cast<int>(rng() % 3);
        for (int i = 1; i < V; ++i) es.push_back({i, i + 1});
        es.push_back({1, V});
    } else {
        V = 2 + static_cast<int>(rng() % 3);
        for (int i = 2; i <= V; ++i) es.push_back(make_edge(1 + static_cast<int>(rng() % (i - 1)), i));
    }
    int pieces = 1 + static_cast<int>(rng() % 2);
    for (int p = 0; p < pieces && V + 3 < max_v; ++p) {
        int host = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(V));
        if (rng() % 2 == 0) {  // glue a cycle of length 4 or 5
            int len = 4 + static_cast<int>(rng() % 2);
            int prev = host;
            for (int i = 0; i < len - 1; ++i) {
                ++V;
                es.push_back(make_edge(prev, V));
                prev = V;
            }
            es.push_back(make_edge(V, host));
        } else {  // glue a small path
            int len = 1 + static_cast<int>(rng() % 2);
            int prev = host;
            for (int i = 0; i < len; ++i) {
                ++V;
                es.push_back(make_edge(prev, V));
                prev = V;
            }
        }
    }
    return Graph(V, es);
}

bool criterion6(std::string& detail) {
    std::vector<RingSpec> big{{3, 1}, {5, 1}, {3, 2}};
    std::vector<RingSpec> all{{3, 1}, {5, 1}, {3, 2}, {2, 1}, {2, 2}};

    std::mt19937_64 rng(0xC6C6);
    // label_cycle
    for (int trial = 0; trial < 500; ++trial) {
        const RingSpec& R = big[static_cast<std::size_t>(trial) % big.size()];
        int n = 4 + static_cast<int>(rng() % 6);
        WeightedGraph wg = random_cycle(rng, R, n);
        RingElem a(R, random_unit(rng, R)), b(R, rng() % R.modulus()), c(R, random_unit(rng, R));
        bool done = false;
        for (int attempt = 0; attempt < 60 && !done; ++attempt) {
            int s = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            if (s == r) continue;
            try {
                Labeling lab = label_cycle(wg, s, r, a, b, c);
                if (!verify_labeling(wg, lab) || !check_cycle_clauses(wg, lab, s, r, a, b, c)) {
                    detail = "label_cycle clause failure, trial " + std::to_string(trial);
                    return false;
                }
                done = true;
            } catch (const GraphError&) {
            }
        }
        if (!done) {
            detail = "label_cycle: no feasible (s,r) found, trial " + std::to_string(trial);
            return false;
        }
    }
    // label_cycle_residue2
    for (int trial = 0; trial < 500; ++trial) {
        const RingSpec& R = all[static_cast<std::size_t>(trial) % all.size()];
        int n = 4 + static_cast<int>(rng() % 6);
        WeightedGraph wg = random_cycle(rng, R, n);
        RingElem a1(R, random_unit(rng, R)), a2(R, random_unit(rng, R)),
            a3(R, random_unit(rng, R)), a4(R, random_unit(rng, R));
        bool done = false;
        for (int attempt = 0; attempt < 60 && !done; ++attempt) {
            int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            try {
                Labeling lab = label_cycle_residue2(wg, r, a1, a2, a3, a4);
                if (!verify_labeling(wg, lab) ||
                    !check_cycle_residue2_clauses(wg, lab, r, a1, a2, a3, a4)) {
                    detail = "label_cycle_residue2 clause failure, trial " + std::to_string(trial);
                    return false;
                }
                done = true;
            } catch (const GraphError&) {
            }
        }
        if (!done) {
            detail = "label_cycle_residue2: no feasible r, trial " + std::to_string(trial);
            return false;
        }
    }
    // label_net
    int net_done = 0;
    while (net_done < 500) {
        const RingSpec& R = big[static_cast<std::size_t>(net_done) % big.size()];
        Graph g = random_net(rng, 9);
        if (!is_net(g) || g.n() == 3 || !find_bad_cycles(g).empty()) continue;
        std::vector<std::uint64_t> w(g.edge_count());
        for (auto& x : w) x = rng() % R.modulus();
        WeightedGraph wg = weigh(g, R, w);
        auto anc = anchors(g);
        if (anc.vertices.empty()) continue;
        int s = anc.vertices[rng() % anc.vertices.size()];
        auto sf = sign_function(g, anc, s);
        RingElem a(R, random_unit(rng, R)), b(R, rng() % R.modulus());
        try {
            Labeling lab = label_net(wg, anc, sf, s, a, b);
            if (!verify_labeling(wg, lab) || !check_net_clauses(wg, lab, sf, s, a, b)) {
                detail = "label_net clause failure, instance " + std::to_string(net_done);
                return false;
            }
        } catch (const std::exception& e) {
            detail = std::string("label_net threw: ") + e.what();
            return false;
        }
        ++net_done;
    }
    // label_borderless
    int bl_done = 0;
    while (bl_done < 500) {
        const RingSpec& R = big[static_cast<std::size_t>(bl_done) % big.size()];
        Graph g = random_borderless(rng, 12);
        if (!is_borderless(g).borderless || !find_bad_cycles(g).empty() || g.n() == 3) continue;
        std::vector<std::uint64_t> w(g.edge_count());
        for (auto& x : w) x = rng() % R.modulus();
        WeightedGraph wg = weigh(g, R, w);
        auto anc = anchors(g);
        if (anc.vertices.empty()) continue;
        int u = anc.vertices[rng() % anc.vertices.size()];
        RingElem a(R, random_unit(rng, R)), b(R, rng() % R.modulus());
        try {
            Labeling lab = label_borderless(wg, anc, u, a, b);
            bool ok = verify_labeling(wg, lab) && lab.at(u).first == a && lab.at(u).second == b;
            for (int v : anc.vertices)
                ok = ok && (lab.at(v).first.is_unit() || lab.at(v).second.is_unit());
            if (!ok) {
                detail = "label_borderless clause failure, instance " + std::to_string(bl_done);
                return false;
            }
        } catch (const std::exception& e) {
            detail = std::string("label_borderless threw: ") + e.what();
            return false;
        }
        ++bl_done;
    }
    detail = "500 instances each: cycle, residue-2 cycle, net, borderless clauses hold";
    return true;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7(std::string& detail) {
    std::uint64_t maps = 0;
    for (int n = 2; n <= 5; ++n) {
        auto pairs = vertex_pairs(n);
        const std::uint64_t top = 1ull << pairs.size();
        for (std::uint64_t mask = 1; mask < top; ++mask) {
            Graph g = graph_from_mask(n, pairs, mask);
            if (!g.is_connected()) continue;
            AlternatingMap map;
            map.p = 3;
            map.n = n;
            map.m = g.edge_count();
            for (std::size_t k = 0; k < g.edges().size(); ++k) {
                std::vector<std::uint64_t> vec(map.m, 0);
                vec[k] = 1;
                map.structure[g.edges()[k]] = vec;
            }
            // Bilinear image by direct enumeration over all (u, v).
            std::set<std::vector<std::uint64_t>> bimage;
            std::vector<std::uint64_t> u(static_cast<std::size_t>(n), 0),
                v(static_cast<std::size_t>(n), 0);
            auto bump = [&](std::vector<std::uint64_t>& x) {
                for (auto& c : x) {
                    if (++c < 3) return true;
                    c = 0;
                }
                return false;
            };
            do {
                std::fill(v.begin(), v.end(), 0);
                do {
                    bimage.insert(evaluate(map, u, v));
                } while (bump(v));
            } while (bump(u));

            auto pres = group_from_graph(g, 3, 1);
            auto img = commutator_image(pres);
            if (img.exceeded || bimage != img.image) {
                detail = "image mismatch on n=" + std::to_string(n) +
                         " mask=" + std::to_string(mask);
                return false;
            }
            auto full = full_image_check(map);
            if (full.full != img.full || (full.missing && bimage.count(*full.missing))) {
                detail = "full_image_check disagrees on n=" + std::to_string(n) +
                         " mask=" + std::to_string(mask);
                return false;
            }
            ++maps;
        }
    }
    detail = std::to_string(maps) + " basis-structure maps agree with the group images";
    return true;
}

// ---------------------------------------------------------------- criterion 8

// Wedge of cycles at vertex 1 plus pendant trees; all cycles share vertex 1
// and contain no bad cycle (cycle lengths >= 4). Optionally one extra
// two-edge segment through a neighbor of vertex 1, creating a net block whose
// glued segment has a non-anchor vertex adjacent to vertex 1.
Graph random_residue2_graph(std::mt19937_64& rng) {
    std::vector<Edge> es;
    int V = 1;
    int cycles = 1 + static_cast<int>(rng() % 3);
    int first_cycle_second = 0;
    for (int c = 0; c < cycles; ++c) {
        int len = 4 + static_cast<int>(rng() % 3);
        int first = V + 1;
        for (int i = 0; i < len - 1; ++i) {
            ++V;
            es.push_back(make_edge(i == 0 ? 1 : V - 1, V));
        }
        es.push_back(make_edge(V, 1));
        if (c == 0) first_cycle_second = first;
    }
    if (rng() % 3 == 0 && first_cycle_second != 0) {
        // Parallel 2-segment from vertex 1 to the second vertex of the first
        // cycle's far side, producing a net block; its interior vertex is
        // adjacent to vertex 1.
        int target = first_cycle_second + 1;
        ++V;
        es.push_back(make_edge(1, V));
        es.push_back(make_edge(V, target));
    }
    int trees = static_cast<int>(rng() % 3);
    for (int t = 0; t < trees; ++t) {
        int host = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(V));
        int len = 1 + static_cast<int>(rng() % 2);
        int prev = host;
        for (int i = 0; i < len; ++i) {
            ++V;
            es.push_back(make_edge(prev, V));
            prev = V;
        }
    }
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    return Graph(V, es);
}

bool criterion8(std::string& detail) {
    std::mt19937_64 rng(0xC8C8);
    std::vector<RingSpec> rings{{2, 1}, {2, 2}};
    int done = 0;
    while (done < 100) {
        const RingSpec& R = rings[static_cast<std::size_t>(done) % rings.size()];
        Graph g = random_residue2_graph(rng);
        if (!find_bad_cycles(g).empty()) continue;
        // Structural condition (i): all simple cycles share a vertex.
        auto cycles = simple_cycles(g);
        std::set<int> common(cycles.empty() ? std::set<int>{}
                                            : std::set<int>(cycles[0].vertices.begin(),
                                                            cycles[0].vertices.end()));
        for (const auto& c : cycles) {
            std::set<int> cs(c.vertices.begin(), c.vertices.end()), inter;
            std::set_intersection(common.begin(), common.end(), cs.begin(), cs.end(),
                                  std::inserter(inter, inter.begin()));
            common = inter;
        }
        if (!cycles.empty() && common.empty()) continue;
        std::vector<std::uint64_t> w(g.edge_count());
        for (auto& x : w) x = rng() % R.modulus();
        WeightedGraph wg = weigh(g, R, w);
        auto out = label_general(wg);
        if (out.kind != LabelOutcome::Kind::Labeled || !verify_labeling(wg, *out.labeling)) {
            detail = "condition (i)+(ii) graph not labeled, instance " + std::to_string(done) +
                     (out.kind == LabelOutcome::Kind::Unknown ? " (" + out.reason + ")" : "");
            return false;
        }
        ++done;
    }
    RingSpec R2(2, 1);
    auto mk = [&](const char* name) {
        Graph g = fixture(name).graph;
        std::vector<std::uint64_t> w(g.edge_count(), 1);
        return weigh(g, R2, w);
    };
    auto f5 = label_general(mk("fig5"));
    if (f5.kind != LabelOutcome::Kind::Unknown || f5.reason.find("condition (i)") == std::string::npos) {
        detail = "fig5 not classified as failing condition (i)";
        return false;
    }
    auto f6 = label_general(mk("fig6"));
    if (f6.kind != LabelOutcome::Kind::Unknown ||
        f6.reason.find("condition (ii)") == std::string::npos) {
        detail = "fig6 not classified as failing condition (ii)";
        return false;
    }
    detail = "100 seeded condition-(i)+(ii) graphs labeled over Z/2 and Z/4; fig5/fig6 classified";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*fn)(std::string&);
    };
    const Criterion cs[] = {
        {"1 labeling soundness sweep (3-5 vertices vs oracle)", criterion1},
        {"2 commutator image: Gamma4 strict subset, C4 full", criterion2},
        {"3 nonexistence certificate on the 4-vertex graph", criterion3},
        {"4 order/derived/exponent formulas on 50 presentations", criterion4},
        {"5 net eta/segment/anchor/sign suites", criterion5},
        {"6 lemma clause fidelity (500 instances each)", criterion6},
        {"7 bilinear image equals commutator image (F_3, <=5 vertices)", criterion7},
        {"8 residue-2 restricted theorem + fig5/fig6 classification", criterion8},
    };
    const char* only = std::getenv("ACCEPT_ONLY");
    int failures = 0;
    for (const auto& c : cs) {
        if (only && c.name[0] != only[0]) continue;
        std::string detail;
        bool ok = c.fn(detail);
        std::cout << "criterion " << c.name << ": " << (ok ? "PASS" : "FAIL") << " - " << detail
                  << std::endl;
        if (!ok) ++failures;
    }
    return failures;
}

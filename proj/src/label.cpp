#include "baleq/label.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "baleq/decompose.hpp"
#include "baleq/oracle.hpp"

namespace baleq {

const std::pair<RingElem, RingElem>& Labeling::at(int v) const {
    auto it = pairs.find(v);
    if (it == pairs.end())
        throw GraphError("Labeling: vertex " + std::to_string(v) + " is unlabeled");
    return it->second;
}

void Labeling::set(int v, RingElem alpha, RingElem beta) {
    pairs.insert_or_assign(v, std::make_pair(alpha, beta));
}

bool verify_labeling(const WeightedGraph& wg, const Labeling& lab) {
    const Graph& g = wg.base();
    if (static_cast<int>(lab.pairs.size()) != g.n())
        throw GraphError("verify_labeling: labeling domain does not match the vertex set");
    for (const auto& [v, ab] : lab.pairs) {
        g.check_vertex(v);
        if (ab.first.spec() != wg.ring() || ab.second.spec() != wg.ring()) throw RingMismatch();
    }
    for (const auto& e : g.edges()) {
        const auto& [ai, bi] = lab.at(e.first);
        const auto& [aj, bj] = lab.at(e.second);
        if (sub(mul(ai, bj), mul(aj, bi)) != wg.weight(e.first, e.second)) return false;
    }
    return true;
}

namespace {

using Pair = std::pair<RingElem, RingElem>;

// Weight of the ordered pair (u, w): the equation x_u y_w - x_w y_u = wdir(u, w)
// holds regardless of which endpoint has the smaller label.
RingElem wdir(const WeightedGraph& wg, int u, int w) {
    const RingElem& d = wg.weight(u, w);
    return u < w ? d : neg(d);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    // Extended Euclid on residues; a must be nonzero mod p.
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw NotAUnit();
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

// One step of the alpha-chain: P carries (x_P, y_P) with x_P a unit and
// [y_P] = 0 or [y_P x_P^-1] = rho; produces a label for the adjacent vertex u
// with x_u a unit and the same residue alternative.
Pair x_step(const WeightedGraph& wg, std::uint64_t rho, int P, const Pair& lp, int u) {
    const RingSpec& R = wg.ring();
    RingElem d = wdir(wg, P, u);
    const auto& [xp, yp] = lp;
    RingElem xu(R, 1);
    if (d.is_unit()) {
        if (yp.is_unit()) {
            xu = neg(mul(inverse(yp), d));  // forces y_u = 0 exactly
        } else {
            std::uint64_t c = mul(d, inverse(xp)).residue();
            xu = RingElem(R, c * inv_mod(rho, R.p()) % R.p());
        }
    }
    RingElem yu = mul(add(d, mul(xu, yp)), inverse(xp));
    return {xu, yu};
}

// One step of the beta-chain: P carries (x_P, y_P) with y_P a unit and
// [x_P] = 0 or [y_P x_P^-1] = gres; same alternative holds at u.
Pair y_step(const WeightedGraph& wg, std::uint64_t gres, int P, const Pair& lp, int u) {
    const RingSpec& R = wg.ring();
    RingElem d = wdir(wg, P, u);
    const auto& [xp, yp] = lp;
    RingElem yu(R, 1);
    if (d.is_unit()) {
        if (xp.is_unit()) {
            yu = mul(inverse(xp), d);  // forces x_u = 0 exactly
        } else {
            std::uint64_t c = neg(mul(d, inverse(yp))).residue();
            yu = RingElem(R, gres * c % R.p());
        }
    }
    RingElem xu = mul(sub(mul(xp, yu), d), inverse(yp));
    return {xu, yu};
}

// Solves the two equations of an unlabeled vertex m sitting between labeled
// neighbors A and B; possible exactly when y_A x_B - x_A y_B is a unit.
std::optional<Pair> junction_solve(const WeightedGraph& wg, int m, int A, const Pair& la, int B,
                                   const Pair& lb) {
    RingElem d1 = wdir(wg, A, m);
    RingElem d2 = wdir(wg, m, B);
    const auto& [xa, ya] = la;
    const auto& [xb, yb] = lb;
    RingElem det = sub(mul(ya, xb), mul(xa, yb));
    if (!det.is_unit()) return std::nullopt;
    RingElem di = inverse(det);
    RingElem xm = mul(di, neg(add(mul(xb, d1), mul(xa, d2))));
    RingElem ym = mul(di, neg(add(mul(yb, d1), mul(ya, d2))));
    return Pair{xm, ym};
}

// Two consecutive unknowns m1, m2 between labeled L and R, both of which carry
// unit x-coordinates. d1 = wdir(L, m1), d2 = wdir(m1, m2), d3 = wdir(m2, R).
std::optional<std::pair<Pair, Pair>> pair_solve_xx(const RingSpec& R, const Pair& ll,
                                                   const Pair& lr, const RingElem& d1,
                                                   const RingElem& d2, const RingElem& d3) {
    const auto& [xl, yl] = ll;
    const auto& [xr, yr] = lr;
    RingElem ixl = inverse(xl), ixr = inverse(xr);
    RingElem u = sub(mul(yr, ixr), mul(yl, ixl));

    auto finish = [&](const RingElem& x1, const RingElem& x2) -> std::optional<std::pair<Pair, Pair>> {
        RingElem y1 = mul(add(d1, mul(x1, yl)), ixl);
        RingElem y2 = mul(sub(mul(x2, yr), d3), ixr);
        if (sub(mul(x1, y2), mul(x2, y1)) != d2) return std::nullopt;
        return std::make_pair(Pair{x1, y1}, Pair{x2, y2});
    };

    std::vector<RingElem> cands;
    std::uint64_t lim = std::min<std::uint64_t>(R.p(), 64);
    for (std::uint64_t v = 0; v < lim; ++v) cands.emplace_back(R, v);

    for (const auto& x2 : cands) {
        RingElem coeff = sub(mul(x2, u), mul(d3, ixr));
        if (!coeff.is_unit()) continue;
        RingElem x1 = mul(add(d2, mul(x2, mul(d1, ixl))), inverse(coeff));
        if (auto got = finish(x1, x2)) return got;
    }
    for (const auto& x1 : cands) {
        RingElem coeff = sub(mul(x1, u), mul(d1, ixl));
        if (!coeff.is_unit()) continue;
        RingElem x2 = mul(add(d2, mul(x1, mul(d3, ixr))), inverse(coeff));
        if (auto got = finish(x1, x2)) return got;
    }
    // Chain-reset alternatives: put (0, c) on one of the two unknowns with the
    // forced unit c, which works whenever the outer edge weight is a unit.
    if (d3.is_unit()) {
        RingElem c = neg(mul(ixr, d3));  // m2 = (0, c); the m2-R equation forces c
        RingElem x1 = mul(d2, inverse(c));
        RingElem y1 = mul(add(d1, mul(x1, yl)), ixl);
        Pair m1{x1, y1}, m2{RingElem(R, 0), c};
        if (sub(mul(m1.first, m2.second), mul(m2.first, m1.second)) == d2 &&
            sub(mul(m2.first, yr), mul(xr, m2.second)) == d3)
            return std::make_pair(m1, m2);
    }
    if (d1.is_unit()) {
        RingElem c = mul(ixl, d1);  // m1 = (0, c); the L-m1 equation forces c
        RingElem x2 = neg(mul(d2, inverse(c)));
        RingElem y2 = mul(sub(mul(x2, yr), d3), ixr);
        Pair m1{RingElem(R, 0), c}, m2{x2, y2};
        if (sub(mul(m1.first, m2.second), mul(m2.first, m1.second)) == d2) return std::make_pair(m1, m2);
    }
    // Last resort for small rings: exact enumeration of both unknowns.
    const std::uint64_t m = R.modulus();
    if (m <= 64) {
        for (std::uint64_t v1 = 0; v1 < m; ++v1)
            for (std::uint64_t v2 = 0; v2 < m; ++v2)
                if (auto got = finish(RingElem(R, v1), RingElem(R, v2))) return got;
    }
    return std::nullopt;
}

Pair swapped(const Pair& p) { return {p.second, p.first}; }

WeightedGraph negate_weights(const WeightedGraph& wg) {
    std::map<Edge, RingElem> w;
    for (const auto& [e, d] : wg.weights()) w.emplace(e, neg(d));
    return WeightedGraph(wg.ring(), wg.base(), std::move(w));
}

// The coordinate swap (x, y) -> (y, x) turns a solution for D into a solution
// for -D and back; used to reduce beta-pinned cases to alpha-pinned ones.
Labeling swap_labeling(const Labeling& lab) {
    Labeling out;
    for (const auto& [v, ab] : lab.pairs) out.set(v, ab.second, ab.first);
    return out;
}

// Cyclic vertex order of a cycle graph, starting at its smallest vertex.
std::vector<int> cycle_order(const Graph& g) {
    std::vector<int> out{1};
    int prev = 0, cur = 1;
    do {
        const auto& nb = g.neighbors(cur);
        int nxt = (nb[0] == prev) ? nb[1] : nb[0];
        out.push_back(nxt);
        prev = cur;
        cur = nxt;
    } while (cur != 1);
    out.pop_back();
    return out;
}

bool graph_is_cycle(const Graph& g) {
    if (g.n() < 3 || !g.is_connected()) return false;
    for (int v = 1; v <= g.n(); ++v)
        if (g.degree(v) != 2) return false;
    return true;
}

// Shared engine for the cycle constructions: the enumeration v[1..N] walks the
// cycle, ps is the pinned position, pr the chain-switch position (requires
// ps < pr <= N-2), rho/gres the residue targets for the two chains, c the unit
// written at position pr+1. Produces labels keyed by the real vertex ids.
Labeling run_cycle_engine(const WeightedGraph& wg, const std::vector<int>& v, std::size_t ps,
                          std::size_t pr, const Pair& pin, const RingElem& c, std::uint64_t rho,
                          std::uint64_t gres) {
    const std::size_t N = v.size() - 1;
    Labeling lab;
    lab.set(v[ps], pin.first, pin.second);
    for (std::size_t i = ps + 1; i + 1 <= pr; ++i) {
        auto got = x_step(wg, rho, v[i - 1], lab.at(v[i - 1]), v[i]);
        lab.set(v[i], got.first, got.second);
    }
    for (std::size_t i = ps; i-- > 1;) {
        auto got = x_step(wg, rho, v[i + 1], lab.at(v[i + 1]), v[i]);
        lab.set(v[i], got.first, got.second);
    }
    // Chain switch: position pr+1 restarts the beta-chain at (0, c); the two
    // equations around position pr then force its label.
    lab.set(v[pr + 1], RingElem(wg.ring(), 0), c);
    RingElem xr = mul(wdir(wg, v[pr], v[pr + 1]), inverse(c));
    const Pair& lp = lab.at(v[pr - 1]);
    RingElem yr = mul(add(wdir(wg, v[pr - 1], v[pr]), mul(xr, lp.second)), inverse(lp.first));
    lab.set(v[pr], xr, yr);
    for (std::size_t i = pr + 2; i <= N - 1; ++i) {
        auto got = y_step(wg, gres, v[i - 1], lab.at(v[i - 1]), v[i]);
        lab.set(v[i], got.first, got.second);
    }
    auto got = junction_solve(wg, v[N], v[N - 1], lab.at(v[N - 1]), v[1], lab.at(v[1]));
    if (!got) throw GraphError("cycle engine: junction determinant is not a unit");
    lab.set(v[N], got->first, got->second);
    if (!verify_labeling(wg, lab)) throw GraphError("cycle engine: labeling failed verification");
    return lab;
}

std::uint64_t ratio_target(const RingSpec&, const RingElem& a, const RingElem& b) {
    // Residue class every nonzero [beta alpha^-1] must hit on the alpha-chain.
    return b.is_unit() ? mul(inverse(a), b).residue() : inverse(a).residue();
}

// Layout-searching cycle labeling shared by the public op and the dispatcher:
// pins s -> (a, b) and places the chain switch at r, the junction at a vertex
// not adjacent to r.
Labeling label_cycle_layout(const WeightedGraph& wg, int s, int r, const RingElem& a,
                            const RingElem& b, const RingElem& c,
                            std::optional<int> junction_at = std::nullopt) {
    const Graph& g = wg.base();
    const std::size_t N = static_cast<std::size_t>(g.n());
    std::vector<int> order = cycle_order(g);
    for (std::size_t rot = 0; rot < N; ++rot) {
        for (int dir : {1, -1}) {
            std::vector<int> v(N + 1, 0);
            for (std::size_t i = 0; i < N; ++i)
                v[i + 1] = order[(rot + N + static_cast<std::size_t>(dir) * i) % N];
            if (junction_at && v[N] != *junction_at) continue;
            std::size_t ps = 0, pr = 0;
            for (std::size_t i = 1; i <= N; ++i) {
                if (v[i] == s) ps = i;
                if (v[i] == r) pr = i;
            }
            if (ps < pr && pr <= N - 2) {
                std::uint64_t rho = ratio_target(wg.ring(), a, b);
                std::uint64_t gres = find_unit_avoiding(wg.ring(), rho).residue();
                return run_cycle_engine(wg, v, ps, pr, {a, b}, c, rho, gres);
            }
        }
    }
    throw GraphError("label_cycle: no enumeration places the switch vertex away from the junction");
}

}  // namespace

Labeling label_tree(const WeightedGraph& wg,
                    const std::optional<std::map<int, RingElem>>& x_labels,
                    const std::optional<std::pair<int, RingElem>>& free_y) {
    const Graph& g = wg.base();
    if (g.n() < 1 || !g.is_connected() || g.edge_count() + 1 != static_cast<std::size_t>(g.n()))
        throw GraphError("label_tree: base graph is not a tree");
    const RingSpec& R = wg.ring();
    auto x_of = [&](int v) -> RingElem {
        if (x_labels) {
            auto it = x_labels->find(v);
            if (it != x_labels->end()) {
                if (it->second.spec() != R) throw RingMismatch();
                if (!it->second.is_unit()) throw NotAUnit();
                return it->second;
            }
        }
        return RingElem(R, 1);
    };
    int root = free_y ? free_y->first : 1;
    g.check_vertex(root);
    RingElem y0 = free_y ? free_y->second : RingElem(R, 0);
    if (y0.spec() != R) throw RingMismatch();

    Labeling lab;
    lab.set(root, x_of(root), y0);
    std::vector<int> queue{root};
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int P = queue[h];
        const Pair& lp = lab.at(P);
        for (int u : g.neighbors(P)) {
            if (lab.has(u)) continue;
            RingElem xu = x_of(u);
            RingElem yu = mul(add(wdir(wg, P, u), mul(xu, lp.second)), inverse(lp.first));
            lab.set(u, xu, yu);
            queue.push_back(u);
        }
    }
    if (!verify_labeling(wg, lab)) throw GraphError("label_tree: labeling failed verification");
    return lab;
}

Labeling label_cycle(const WeightedGraph& wg, int s, int r, RingElem a, RingElem b, RingElem c) {
    const Graph& g = wg.base();
    if (!graph_is_cycle(g) || g.n() <= 3)
        throw GraphError("label_cycle: base graph is not a cycle on more than three vertices");
    if (!wg.ring().has_big_residue_field()) throw ResidueFieldTooSmall();
    g.check_vertex(s);
    g.check_vertex(r);
    if (s == r) throw GraphError("label_cycle: pin vertex and switch vertex coincide");
    if (!a.is_unit() || !c.is_unit()) throw NotAUnit();
    if (a.spec() != wg.ring() || b.spec() != wg.ring() || c.spec() != wg.ring())
        throw RingMismatch();
    return label_cycle_layout(wg, s, r, a, b, c);
}

Labeling label_cycle_residue2(const WeightedGraph& wg, int r, RingElem a1, RingElem a2,
                              RingElem a3, RingElem a4) {
    const Graph& g = wg.base();
    if (!graph_is_cycle(g) || g.n() <= 3)
        throw GraphError("label_cycle_residue2: base graph is not a cycle on more than three vertices");
    g.check_vertex(r);
    for (const RingElem* e : {&a1, &a2, &a3, &a4}) {
        if (e->spec() != wg.ring()) throw RingMismatch();
        if (!e->is_unit()) throw NotAUnit();
    }
    const std::size_t N = static_cast<std::size_t>(g.n());
    std::vector<int> order = cycle_order(g);
    for (int dir : {1, -1}) {
        std::vector<int> v(N + 1, 0);
        for (std::size_t i = 0; i < N; ++i)
            v[i + 1] = order[(N + static_cast<std::size_t>(dir) * i) % N];
        std::size_t pr = 0;
        for (std::size_t i = 1; i <= N; ++i)
            if (v[i] == r) pr = i;
        if (2 <= pr && pr <= N - 2) {
            Pair pin{a3, RingElem(wg.ring(), 0)};
            return run_cycle_engine(wg, v, 1, pr, pin, a4, a1.residue(), a2.residue());
        }
    }
    throw GraphError("label_cycle_residue2: switch vertex is adjacent to the enumeration's endpoints");
}

Labeling label_triangle(const WeightedGraph& wg) {
    const Graph& g = wg.base();
    if (!graph_is_cycle(g) || g.n() != 3)
        throw GraphError("label_triangle: base graph is not a triangle");
    const RingSpec& R = wg.ring();
    RingElem d12 = wg.weight(1, 2), d13 = wg.weight(1, 3), d23 = wg.weight(2, 3);

    // Relabel by a transposition pi so either d'_{2,3} is a unit (Case 1) or
    // the valuation ordering l_{1,2} >= l_{1,3} holds (Case 2); the original
    // labeling is recovered by applying pi to the vertex indices.
    int pi[4] = {0, 1, 2, 3};
    RingElem e12 = d12, e13 = d13, e23 = d23;
    bool case1 = d12.is_unit() || d13.is_unit() || d23.is_unit();
    if (case1) {
        if (d23.is_unit()) {
            // identity
        } else if (d13.is_unit()) {
            pi[1] = 2;
            pi[2] = 1;
            e12 = neg(d12);
            e13 = d23;
            e23 = d13;
        } else {
            pi[1] = 3;
            pi[3] = 1;
            e12 = neg(d23);
            e13 = neg(d13);
            e23 = neg(d12);
        }
    } else {
        auto level = [&](const RingElem& d) {
            return d.is_zero() ? R.k() : val_unit(d).valuation;
        };
        if (level(d12) < level(d13)) {
            pi[2] = 3;
            pi[3] = 2;
            e12 = d13;
            e13 = d12;
            e23 = neg(d23);
        }
    }

    RingElem alpha[4] = {RingElem(R, 0), e13, e23, RingElem(R, 0)};
    RingElem beta[4] = {RingElem(R, 0), RingElem(R, 0), RingElem(R, 1), RingElem(R, 1)};
    if (case1) {
        beta[1] = mul(inverse(e23), sub(e13, e12));
    } else {
        if (e12.is_zero()) {
            beta[2] = RingElem(R, 0);
        } else {
            auto v12 = val_unit(e12), v13 = val_unit(e13);
            RingElem pw(R, 1);
            for (unsigned i = v13.valuation; i < v12.valuation; ++i) pw = mul(pw, RingElem(R, R.p()));
            beta[2] = mul(mul(*v12.unit_part, inverse(*v13.unit_part)), pw);
        }
    }

    Labeling lab;
    for (int k = 1; k <= 3; ++k) lab.set(pi[k], alpha[k], beta[k]);
    if (!verify_labeling(wg, lab)) throw GraphError("label_triangle: labeling failed verification");
    return lab;
}

std::pair<WeightedGraph, Labeling> merge_labelings(const WeightedGraph& wg1, const Labeling& lab1,
                                                   const WeightedGraph& wg2, const Labeling& lab2,
                                                   int v, int w) {
    if (wg1.ring() != wg2.ring()) throw RingMismatch();
    wg1.base().check_vertex(v);
    wg2.base().check_vertex(w);
    if (!verify_labeling(wg1, lab1) || !verify_labeling(wg2, lab2))
        throw GraphError("merge_labelings: an input labeling is inconsistent");
    if (lab1.at(v) != lab2.at(w))
        throw GraphError("merge_labelings: the glue vertices carry different labels");

    Graph g = wedge_sum(wg1.base(), wg2.base(), v, w);
    // Same vertex map as wedge_sum: w goes to v, the rest follow wg1's range.
    std::vector<int> map2(static_cast<std::size_t>(wg2.base().n()) + 1, 0);
    int next = wg1.base().n();
    for (int u = 1; u <= wg2.base().n(); ++u) map2[u] = (u == w) ? v : ++next;

    std::map<Edge, RingElem> weights(wg1.weights());
    for (const auto& [e, d] : wg2.weights()) {
        int i = map2[e.first], j = map2[e.second];
        weights.emplace(make_edge(i, j), i < j ? d : neg(d));
    }
    WeightedGraph merged(wg1.ring(), g, std::move(weights));

    Labeling lab = lab1;
    for (const auto& [u, ab] : lab2.pairs)
        if (u != w) lab.set(map2[u], ab.first, ab.second);
    if (!verify_labeling(merged, lab))
        throw GraphError("merge_labelings: merged labeling failed verification");
    return {std::move(merged), std::move(lab)};
}

namespace {

// Induced weighted subgraph with order-preserving relabeling, so edge
// orientations (and hence weights) carry over unchanged.
struct SubWG {
    WeightedGraph wg;
    std::vector<int> host;     // host[i-1] = host id of local vertex i
    std::map<int, int> local;  // host id -> local id
};

SubWG make_sub(const WeightedGraph& hw, const std::vector<int>& verts,
               const std::vector<Edge>& edges) {
    std::vector<int> host(verts);
    std::sort(host.begin(), host.end());
    std::map<int, int> local;
    for (std::size_t i = 0; i < host.size(); ++i) local[host[i]] = static_cast<int>(i) + 1;
    std::vector<Edge> les;
    std::map<Edge, RingElem> w;
    for (const auto& e : edges) {
        Edge le = make_edge(local.at(e.first), local.at(e.second));
        les.push_back(le);
        w.emplace(le, hw.weight(e.first, e.second));
    }
    Graph g(static_cast<int>(host.size()), les);
    return {WeightedGraph(hw.ring(), std::move(g), std::move(w)), std::move(host),
            std::move(local)};
}

// Maximal biconnected edge sets (single-edge blocks are the bridges).
std::vector<std::vector<Edge>> biconnected_components(const Graph& g) {
    int n = g.n();
    std::vector<int> disc(static_cast<std::size_t>(n) + 1, 0), low(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Edge> stack;
    std::vector<std::vector<Edge>> out;
    int timer = 0;

    auto dfs = [&](auto&& self, int v, int parent) -> void {
        disc[v] = low[v] = ++timer;
        for (int w : g.neighbors(v)) {
            if (w == parent) {
                parent = 0;  // skip the tree edge to the parent exactly once
                continue;
            }
            if (disc[w] == 0) {
                stack.push_back(make_edge(v, w));
                self(self, w, v);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) {
                    std::vector<Edge> comp;
                    Edge top = make_edge(v, w);
                    while (true) {
                        Edge e = stack.back();
                        stack.pop_back();
                        comp.push_back(e);
                        if (e == top) break;
                    }
                    out.push_back(std::move(comp));
                }
            } else if (disc[w] < disc[v]) {
                stack.push_back(make_edge(v, w));
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    for (int v = 1; v <= n; ++v)
        if (disc[v] == 0) dfs(dfs, v, 0);
    for (auto& comp : out) std::sort(comp.begin(), comp.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> vertices_of(const std::vector<Edge>& edges) {
    std::set<int> vs;
    for (const auto& e : edges) {
        vs.insert(e.first);
        vs.insert(e.second);
    }
    return {vs.begin(), vs.end()};
}

// Labels u across the edge (P, u) from an already-labeled P carrying at least
// one unit coordinate.
void extend_over_tree_edge(const WeightedGraph& wg, Labeling& lab, int P, int u) {
    const Pair& lp = lab.at(P);
    if (lp.first.is_unit()) {
        auto got = x_step(wg, 1, P, lp, u);
        lab.set(u, got.first, got.second);
    } else if (lp.second.is_unit()) {
        auto got = y_step(wg, 1, P, lp, u);
        lab.set(u, got.first, got.second);
    } else {
        throw GraphError("tree extension: attachment vertex has no unit coordinate");
    }
}

// Greedy maximal admissible vertex set, preferring the mandatory core, then
// the caller's priority vertices, then the rest in ascending order.
Anchor steered_anchor(const Graph& g, const std::vector<int>& prefer) {
    std::vector<int> order = anchor_core(g);
    std::set<int> seen(order.begin(), order.end());
    for (int v : prefer)
        if (seen.insert(v).second) order.push_back(v);
    for (int v = 1; v <= g.n(); ++v)
        if (seen.insert(v).second) order.push_back(v);
    std::vector<int> w;
    for (int v : order) {
        std::vector<int> cand(w);
        cand.push_back(v);
        std::sort(cand.begin(), cand.end());
        if (is_admissible(g, cand)) w = std::move(cand);
    }
    return Anchor{std::move(w)};
}

// Depth-first search over a pinned block: the pin is fixed, vertices listed in
// `need_unit` may only take labels with at least one unit coordinate.
std::optional<Labeling> pinned_block_search(const WeightedGraph& wg, int pin_vertex,
                                            const Pair& pin, const std::set<int>& need_unit,
                                            std::uint64_t max_nodes) {
    const Graph& g = wg.base();
    const RingSpec& R = wg.ring();
    const std::uint64_t m = R.modulus();

    std::vector<int> order{pin_vertex};
    std::vector<int> pos(static_cast<std::size_t>(g.n()) + 1, -1);
    pos[pin_vertex] = 0;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (int w : g.neighbors(order[h]))
            if (pos[w] < 0) {
                pos[w] = static_cast<int>(order.size());
                order.push_back(w);
            }
    if (order.size() != static_cast<std::size_t>(g.n())) return std::nullopt;

    std::vector<Pair> value(order.size(), pin);
    std::uint64_t nodes = 0;

    auto consistent = [&](std::size_t idx) {
        int v = order[idx];
        for (int u : g.neighbors(v)) {
            int iu = pos[u];
            if (iu < 0 || static_cast<std::size_t>(iu) > idx) continue;
            const Pair& a = value[static_cast<std::size_t>(iu)];
            const Pair& b = value[idx];
            const Pair& lo = (u < v) ? a : b;
            const Pair& hi = (u < v) ? b : a;
            if (sub(mul(lo.first, hi.second), mul(hi.first, lo.second)) != wg.weight(u, v))
                return false;
        }
        return true;
    };
    auto dfs = [&](auto&& self, std::size_t idx) -> bool {
        if (idx == order.size()) return true;
        int v = order[idx];
        bool restrict_unit = need_unit.count(v) != 0;
        for (std::uint64_t av = 0; av < m; ++av)
            for (std::uint64_t bv = 0; bv < m; ++bv) {
                if (++nodes > max_nodes) return false;
                RingElem ra(R, av), rb(R, bv);
                if (restrict_unit && !ra.is_unit() && !rb.is_unit()) continue;
                value[idx] = {ra, rb};
                if (!consistent(idx)) continue;
                if (self(self, idx + 1)) return true;
            }
        return false;
    };
    if (!consistent(0)) return std::nullopt;
    if (!dfs(dfs, 1)) return std::nullopt;
    Labeling lab;
    for (std::size_t i = 0; i < order.size(); ++i)
        lab.set(order[i], value[i].first, value[i].second);
    return lab;
}

// Small mutable subgraph used for the strip-order search of the residue-two
// structural condition on net blocks.
struct MiniSub {
    std::set<int> verts;
    std::set<Edge> edges;

    int deg(int v) const {
        int d = 0;
        for (const auto& e : edges)
            if (e.first == v || e.second == v) ++d;
        return d;
    }
    std::vector<int> nbrs(int v) const {
        std::vector<int> out;
        for (const auto& e : edges) {
            if (e.first == v) out.push_back(e.second);
            if (e.second == v) out.push_back(e.first);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    bool is_cycle_on() const {
        if (verts.size() < 3 || edges.size() != verts.size()) return false;
        for (int v : verts)
            if (deg(v) != 2) return false;
        // connectivity
        std::set<int> seen{*verts.begin()};
        std::vector<int> st{*verts.begin()};
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : nbrs(v))
                if (seen.insert(w).second) st.push_back(w);
        }
        return seen.size() == verts.size();
    }
    Graph relabeled() const {
        std::map<int, int> idx;
        int next = 0;
        for (int v : verts) idx[v] = ++next;
        std::vector<Edge> es;
        for (const auto& e : edges) es.push_back(make_edge(idx.at(e.first), idx.at(e.second)));
        return Graph(next, es);
    }
    std::vector<std::vector<int>> open_segments() const {
        std::vector<std::vector<int>> out;
        std::set<std::vector<int>> seen;
        for (int v : verts) {
            if (deg(v) == 2) continue;
            for (int first : nbrs(v)) {
                std::vector<int> walk{v, first};
                int prev = v, cur = first;
                while (deg(cur) == 2 && cur != v) {
                    auto nb = nbrs(cur);
                    int nxt = (nb[0] == prev) ? nb[1] : nb[0];
                    walk.push_back(nxt);
                    prev = cur;
                    cur = nxt;
                }
                if (cur == v) continue;  // closed chain; not strippable here
                std::vector<int> rev(walk.rbegin(), walk.rend());
                if (seen.insert(std::min(walk, rev)).second) out.push_back(walk);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

// Structural condition for the residue-two theorem on a net block: the block
// must strip down to a cycle through vi, with every stripped segment carrying
// an interior vertex outside the anchor set that is adjacent to vi.
// Labels a cycle-shaped weighted graph pinned at pl, placing the chain switch
// and the junction on two allowed (non-adjacent) vertices.
Labeling pinned_cycle_label(const WeightedGraph& cwg, int pl, const Pair& pin,
                            const std::vector<int>& zcands) {
    const Graph& g = cwg.base();
    for (std::size_t i = 0; i < zcands.size(); ++i)
        for (std::size_t j = 0; j < zcands.size(); ++j) {
            if (i == j) continue;
            int zr = zcands[i], zn = zcands[j];
            if (g.has_edge(zr, zn)) continue;
            if (pin.first.is_unit())
                return label_cycle_layout(cwg, pl, zr, pin.first, pin.second,
                                          RingElem(cwg.ring(), 1), zn);
            if (pin.second.is_unit())
                return swap_labeling(label_cycle_layout(negate_weights(cwg), pl, zr, pin.second,
                                                        pin.first, RingElem(cwg.ring(), 1), zn));
            throw GraphError("cycle labeling: pin has no unit coordinate");
        }
    throw GraphError("cycle labeling: no non-adjacent placement for the switch and junction");
}

bool residue2_strippable(const Graph& host, const std::vector<int>& block_vertices,
                         const std::vector<Edge>& block_edges, int vi, const Anchor& anchor) {
    MiniSub start;
    start.verts.insert(block_vertices.begin(), block_vertices.end());
    start.edges.insert(block_edges.begin(), block_edges.end());

    auto search = [&](auto&& self, const MiniSub& s) -> bool {
        if (s.is_cycle_on()) return s.verts.count(vi) != 0;
        for (const auto& walk : s.open_segments()) {
            bool ok = false;
            for (std::size_t i = 1; i + 1 < walk.size(); ++i)
                if (!anchor.contains(walk[i]) && host.has_edge(walk[i], vi)) ok = true;
            if (!ok) continue;
            MiniSub next = s;
            for (std::size_t i = 1; i < walk.size(); ++i)
                next.edges.erase(make_edge(walk[i - 1], walk[i]));
            for (std::size_t i = 1; i + 1 < walk.size(); ++i) next.verts.erase(walk[i]);
            Graph rem = next.relabeled();
            if (!(next.is_cycle_on() || is_net(rem))) continue;
            if (self(self, next)) return true;
        }
        return false;
    };
    return search(search, start);
}

}  // namespace

Labeling label_borderless(const WeightedGraph& wg, const Anchor& anchor, int u, RingElem a,
                          RingElem b) {
    const Graph& g = wg.base();
    const RingSpec& R = wg.ring();
    if (!R.has_big_residue_field()) throw ResidueFieldTooSmall();
    if (a.spec() != R || b.spec() != R) throw RingMismatch();
    if (!g.is_connected()) throw GraphError("label_borderless: graph must be connected");
    if (!is_borderless(g).borderless) throw GraphError("label_borderless: graph is not borderless");
    if (graph_is_cycle(g) && g.n() == 3)
        throw GraphError("label_borderless: triangle input is not supported");
    if (!find_bad_cycles(g).empty())
        throw GraphError("label_borderless: graph contains a bad cycle");
    g.check_vertex(u);
    if (!anchor.contains(u))
        throw GraphError("label_borderless: pin vertex must be an anchor vertex");
    if (!a.is_unit() && !b.is_unit()) throw NotAUnit();

    const auto steps = decompose_borderless(g).steps;
    const std::size_t np = steps.size();
    std::vector<std::set<int>> pv(np);
    for (std::size_t i = 0; i < np; ++i)
        pv[i].insert(steps[i].vertices.begin(), steps[i].vertices.end());

    std::size_t root = np;
    for (std::size_t i = 0; i < np && root == np; ++i)
        if (pv[i].count(u)) root = i;

    auto label_piece = [&](const GlueStep& st, int pin_v, const Pair& pin, Labeling& lab) {
        SubWG sub = make_sub(wg, st.vertices, st.edges);
        int pl = sub.local.at(pin_v);
        Labeling plab;
        if (!st.is_cycle) {
            if (pin.first.is_unit()) {
                std::map<int, RingElem> xs{{pl, pin.first}};
                plab = label_tree(sub.wg, xs, std::make_pair(pl, pin.second));
            } else if (pin.second.is_unit()) {
                std::map<int, RingElem> xs{{pl, pin.second}};
                plab = swap_labeling(
                    label_tree(negate_weights(sub.wg), xs, std::make_pair(pl, pin.first)));
            } else {
                throw GraphError("label_borderless: glue vertex has no unit coordinate");
            }
        } else {
            std::vector<int> zcands;
            for (std::size_t i = 0; i < sub.host.size(); ++i) {
                int h = sub.host[i];
                if (h != pin_v && !anchor.contains(h)) zcands.push_back(static_cast<int>(i) + 1);
            }
            plab = pinned_cycle_label(sub.wg, pl, pin, zcands);
        }
        for (std::size_t i = 0; i < sub.host.size(); ++i) {
            int h = sub.host[i];
            if (h != pin_v) lab.set(h, plab.at(static_cast<int>(i) + 1).first,
                                    plab.at(static_cast<int>(i) + 1).second);
        }
    };

    Labeling lab;
    lab.set(u, a, b);
    std::vector<char> done(np, 0);
    std::vector<std::pair<std::size_t, int>> queue{{root, u}};
    done[root] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        auto [pi, pinv] = queue[h];
        label_piece(steps[pi], pinv, lab.at(pinv), lab);
        for (std::size_t j = 0; j < np; ++j) {
            if (done[j]) continue;
            for (int v : pv[j])
                if (pv[pi].count(v)) {
                    done[j] = 1;
                    queue.emplace_back(j, v);
                    break;
                }
        }
    }
    if (!verify_labeling(wg, lab))
        throw GraphError("label_borderless: labeling failed verification");
    for (int v : anchor.vertices)
        if (!lab.at(v).first.is_unit() && !lab.at(v).second.is_unit())
            throw GraphError("label_borderless: an anchor vertex received no unit coordinate");
    return lab;
}

Labeling label_net(const WeightedGraph& wg, const Anchor& anchor, const SignFunction& sigma,
                   int s, RingElem a, RingElem b) {
    const Graph& g = wg.base();
    const RingSpec& R = wg.ring();
    if (!R.has_big_residue_field()) throw ResidueFieldTooSmall();
    if (a.spec() != R || b.spec() != R) throw RingMismatch();
    if (!g.is_connected() || !is_net(g)) throw GraphError("label_net: base graph is not a net");
    if (g.n() == 3 && graph_is_cycle(g))
        throw GraphError("label_net: triangle input is not supported");
    if (!find_bad_cycles(g).empty()) throw GraphError("label_net: graph contains a bad cycle");
    if (auto why = check_sign_function(g, anchor, sigma))
        throw GraphError("label_net: invalid sign function: " + *why);
    g.check_vertex(s);
    if (!anchor.contains(s) || sigma(s) != 1)
        throw GraphError("label_net: pin vertex must be an anchor vertex of positive parity");
    if (!a.is_unit()) throw NotAUnit();

    const std::uint64_t rho = ratio_target(R, a, b);
    const std::uint64_t gres = find_unit_avoiding(R, rho).residue();
    const int n = g.n();

    std::vector<char> in_anchor(static_cast<std::size_t>(n) + 1, 0);
    for (int v : anchor.vertices) in_anchor[v] = 1;
    for (int v = 1; v <= n; ++v)
        if (!in_anchor[v] && g.degree(v) != 2)
            throw GraphError("label_net: a non-anchor vertex has degree different from two");

    // Connected components of the anchor-induced subgraph; each must be a tree
    // of uniform parity (adjacent anchors share their sign).
    std::vector<int> comp(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> comp_sign{0};  // 1-based by component id
    int ncomp = 0;
    for (int v : anchor.vertices) {
        if (comp[v] != 0) continue;
        ++ncomp;
        comp_sign.push_back(sigma(v));
        std::vector<int> queue{v};
        comp[v] = ncomp;
        std::size_t edges_in = 0;
        std::size_t count = 0;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int x = queue[h];
            ++count;
            for (int w : g.neighbors(x))
                if (in_anchor[w]) {
                    ++edges_in;
                    if (comp[w] == 0) {
                        comp[w] = ncomp;
                        queue.push_back(w);
                    }
                }
        }
        if (edges_in != 2 * (count - 1))
            throw GraphError("label_net: the anchor set induces a cycle");
        for (int x : queue)
            if (sigma(x) != comp_sign.back())
                throw GraphError("label_net: adjacent anchor vertices with different parity");
    }

    struct Run {
        int A = 0, B = 0;          // anchor endpoints
        std::vector<int> ws;       // interior, ordered from the A side
    };
    std::vector<Run> runs;
    {
        std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
        for (int v = 1; v <= n; ++v) {
            if (in_anchor[v] || seen[v]) continue;
            // walk to both ends of the degree-2 path through v
            auto walk_out = [&](int start, int towards) {
                std::vector<int> path;
                int prev = start, cur = towards;
                while (!in_anchor[cur]) {
                    path.push_back(cur);
                    const auto& nb = g.neighbors(cur);
                    int nxt = (nb[0] == prev) ? nb[1] : nb[0];
                    prev = cur;
                    cur = nxt;
                }
                path.push_back(cur);  // the anchor endpoint
                return path;
            };
            auto left = walk_out(v, g.neighbors(v)[0]);
            auto right = walk_out(v, g.neighbors(v)[1]);
            Run r;
            r.A = left.back();
            r.B = right.back();
            for (std::size_t i = left.size() - 1; i-- > 0;) r.ws.push_back(left[i]);
            r.ws.push_back(v);
            for (std::size_t i = 0; i + 1 < right.size(); ++i) r.ws.push_back(right[i]);
            for (int w : r.ws) seen[w] = 1;
            if (std::make_pair(r.B, std::vector<int>(r.ws.rbegin(), r.ws.rend())) <
                std::make_pair(r.A, r.ws)) {
                std::swap(r.A, r.B);
                std::reverse(r.ws.begin(), r.ws.end());
            }
            runs.push_back(std::move(r));
        }
        std::sort(runs.begin(), runs.end(), [](const Run& x, const Run& y) {
            return std::tie(x.A, x.B, x.ws) < std::tie(y.A, y.B, y.ws);
        });
    }

    auto walk_step = [&](int t, Labeling& lab, int P, int u) {
        auto got = (t == 1) ? x_step(wg, rho, P, lab.at(P), u) : y_step(wg, gres, P, lab.at(P), u);
        lab.set(u, got.first, got.second);
    };
    auto prop_tree = [&](Labeling& lab, std::set<int>& dc, int root, int cid) {
        dc.insert(cid);
        std::vector<int> queue{root};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int P = queue[h];
            for (int w : g.neighbors(P))
                if (in_anchor[w] && comp[w] == cid && !lab.has(w)) {
                    walk_step(comp_sign[cid], lab, P, w);
                    queue.push_back(w);
                }
        }
    };

    std::vector<RingElem> seeds;
    for (std::uint64_t v = 1; v < std::min<std::uint64_t>(R.p(), 9); ++v) seeds.emplace_back(R, v);

    auto clauses_ok = [&](const Labeling& lab) {
        if (lab.at(s) != Pair{a, b}) return false;
        for (int v = 1; v <= n; ++v) {
            int sg = sigma(v);
            const auto& [x, y] = lab.at(v);
            if (sg == 1) {
                if (!x.is_unit()) return false;
                if (y.is_unit() && mul(y, inverse(x)).residue() != rho) return false;
            } else if (sg == -1) {
                if (!y.is_unit()) return false;
                if (x.is_unit() && mul(y, inverse(x)).residue() != gres) return false;
            }
        }
        return true;
    };

    // Event loop with backtracking over the seed constants of freshly entered
    // components: resolve one run at a time, always one whose A-side tree is
    // already labeled.
    auto solve = [&](auto&& self, Labeling lab, std::set<int> dc,
                     std::vector<char> resolved) -> std::optional<Labeling> {
        std::size_t pick = runs.size();
        bool flip = false;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (resolved[i]) continue;
            if (dc.count(comp[runs[i].A])) {
                pick = i;
                flip = false;
                break;
            }
            if (dc.count(comp[runs[i].B])) {
                pick = i;
                flip = true;
                break;
            }
        }
        if (pick == runs.size()) {
            for (std::size_t i = 0; i < runs.size(); ++i)
                if (!resolved[i]) return std::nullopt;  // unreachable for connected nets
            if (static_cast<int>(lab.pairs.size()) != n) return std::nullopt;
            if (!verify_labeling(wg, lab) || !clauses_ok(lab)) return std::nullopt;
            return lab;
        }
        Run r = runs[pick];
        if (flip) {
            std::swap(r.A, r.B);
            std::reverse(r.ws.begin(), r.ws.end());
        }
        resolved[pick] = 1;
        const int TA = comp_sign[comp[r.A]];
        const int TB = comp_sign[comp[r.B]];
        const std::size_t m = r.ws.size();

        if (!dc.count(comp[r.B])) {
            if (TB == TA) {
                Labeling l2 = lab;
                std::set<int> d2 = dc;
                int P = r.A;
                for (int w : r.ws) {
                    walk_step(TA, l2, P, w);
                    P = w;
                }
                walk_step(TA, l2, P, r.B);
                prop_tree(l2, d2, r.B, comp[r.B]);
                return self(self, std::move(l2), std::move(d2), resolved);
            }
            for (const RingElem& c : seeds) {
                Labeling l2 = lab;
                std::set<int> d2 = dc;
                int P = r.A;
                for (std::size_t i = 0; i + 1 < m; ++i) {
                    walk_step(TA, l2, P, r.ws[i]);
                    P = r.ws[i];
                }
                int wm = r.ws.back();
                if (TA == 1) {
                    l2.set(r.B, RingElem(R, 0), c);
                    RingElem xw = mul(wdir(wg, wm, r.B), inverse(c));
                    const Pair& lp = l2.at(P);
                    RingElem yw =
                        mul(add(wdir(wg, P, wm), mul(xw, lp.second)), inverse(lp.first));
                    l2.set(wm, xw, yw);
                } else {
                    l2.set(r.B, c, RingElem(R, 0));
                    RingElem yw = neg(mul(wdir(wg, wm, r.B), inverse(c)));
                    const Pair& lp = l2.at(P);
                    RingElem xw =
                        mul(sub(mul(lp.first, yw), wdir(wg, P, wm)), inverse(lp.second));
                    l2.set(wm, xw, yw);
                }
                prop_tree(l2, d2, r.B, comp[r.B]);
                if (auto got = self(self, std::move(l2), std::move(d2), resolved)) return got;
            }
            return std::nullopt;
        }

        // Both endpoint trees already labeled.
        if (TA != TB) {
            Labeling l2 = lab;
            int P = r.A;
            for (std::size_t i = 0; i + 1 < m; ++i) {
                walk_step(TA, l2, P, r.ws[i]);
                P = r.ws[i];
            }
            int wm = r.ws.back();
            auto got = junction_solve(wg, wm, P, l2.at(P), r.B, l2.at(r.B));
            if (!got) return std::nullopt;
            l2.set(wm, got->first, got->second);
            return self(self, std::move(l2), dc, resolved);
        }
        // Same parity on both sides: place the two-unknown solver at every
        // position of the run, then fall back to an interior chain switch.
        for (std::size_t k = 1; k < m; ++k) {
            Labeling l2 = lab;
            int L = r.A;
            for (std::size_t i = 0; i + 1 < k; ++i) {
                walk_step(TA, l2, L, r.ws[i]);
                L = r.ws[i];
            }
            int Rv = r.B;
            for (std::size_t i = m; i-- > k + 1;) {
                walk_step(TB, l2, Rv, r.ws[i]);
                Rv = r.ws[i];
            }
            int m1 = r.ws[k - 1], m2 = r.ws[k];
            RingElem d1 = wdir(wg, L, m1), d2w = wdir(wg, m1, m2), d3 = wdir(wg, m2, Rv);
            std::optional<std::pair<Pair, Pair>> got;
            if (TA == 1) {
                got = pair_solve_xx(R, l2.at(L), l2.at(Rv), d1, d2w, d3);
            } else {
                got = pair_solve_xx(R, swapped(l2.at(L)), swapped(l2.at(Rv)), neg(d1), neg(d2w),
                                    neg(d3));
                if (got) {
                    got->first = swapped(got->first);
                    got->second = swapped(got->second);
                }
            }
            if (!got) continue;
            l2.set(m1, got->first.first, got->first.second);
            l2.set(m2, got->second.first, got->second.second);
            if (auto ok = self(self, std::move(l2), dc, resolved)) return ok;
        }
        if (m >= 3) {
            for (const RingElem& c : seeds) {
                Labeling l2 = lab;
                int w0 = r.ws[0], w1 = r.ws[1];
                if (TA == 1) {
                    l2.set(w1, RingElem(R, 0), c);
                    RingElem xw = mul(wdir(wg, w0, w1), inverse(c));
                    const Pair& lp = l2.at(r.A);
                    RingElem yw =
                        mul(add(wdir(wg, r.A, w0), mul(xw, lp.second)), inverse(lp.first));
                    l2.set(w0, xw, yw);
                } else {
                    l2.set(w1, c, RingElem(R, 0));
                    RingElem yw = neg(mul(wdir(wg, w0, w1), inverse(c)));
                    const Pair& lp = l2.at(r.A);
                    RingElem xw =
                        mul(sub(mul(lp.first, yw), wdir(wg, r.A, w0)), inverse(lp.second));
                    l2.set(w0, xw, yw);
                }
                int P = w1;
                for (std::size_t i = 2; i + 1 < m; ++i) {
                    walk_step(-TA, l2, P, r.ws[i]);
                    P = r.ws[i];
                }
                int wm = r.ws.back();
                auto got = junction_solve(wg, wm, P, l2.at(P), r.B, l2.at(r.B));
                if (!got) continue;
                l2.set(wm, got->first, got->second);
                if (auto ok = self(self, std::move(l2), dc, resolved)) return ok;
            }
        }
        return std::nullopt;
    };

    Labeling start;
    start.set(s, a, b);
    std::set<int> dc;
    prop_tree(start, dc, s, comp[s]);
    auto got = solve(solve, std::move(start), std::move(dc),
                     std::vector<char>(runs.size(), 0));
    if (!got) throw GraphError("label_net: propagation found no clause-respecting labeling");
    return *got;
}

namespace {

// Block-by-block constructive labeling for bad-cycle-free graphs: single-edge
// blocks extend over the bridge, cycle blocks use the cycle construction with
// the switch and junction kept off attachment vertices, everything else is
// treated as a net.
Labeling label_blocks(const WeightedGraph& wg) {
    const Graph& g = wg.base();
    const RingSpec& R = wg.ring();
    Labeling lab;
    if (g.n() == 1) {
        lab.set(1, RingElem(R, 1), RingElem(R, 0));
        return lab;
    }
    auto comps = biconnected_components(g);
    std::vector<std::vector<int>> verts(comps.size());
    std::vector<std::vector<std::size_t>> blocks_of(static_cast<std::size_t>(g.n()) + 1);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        verts[i] = vertices_of(comps[i]);
        for (int v : verts[i]) blocks_of[v].push_back(i);
    }
    std::size_t root = blocks_of[1].front();

    auto label_one = [&](std::size_t bi, int pv) {
        const Pair pin = lab.at(pv);
        if (comps[bi].size() == 1) {
            const Edge& e = comps[bi].front();
            extend_over_tree_edge(wg, lab, pv, e.first == pv ? e.second : e.first);
            return;
        }
        SubWG sub = make_sub(wg, verts[bi], comps[bi]);
        int pl = sub.local.at(pv);
        Labeling plab;
        if (graph_is_cycle(sub.wg.base())) {
            std::vector<int> zcands;
            for (std::size_t i = 0; i < sub.host.size(); ++i)
                if (sub.host[i] != pv && g.degree(sub.host[i]) == 2)
                    zcands.push_back(static_cast<int>(i) + 1);
            plab = pinned_cycle_label(sub.wg, pl, pin, zcands);
        } else {
            std::vector<int> prefer{pl};
            for (std::size_t i = 0; i < sub.host.size(); ++i)
                if (g.degree(sub.host[i]) > sub.wg.base().degree(static_cast<int>(i) + 1))
                    prefer.push_back(static_cast<int>(i) + 1);
            Anchor na = steered_anchor(sub.wg.base(), prefer);
            if (!na.contains(pl))
                throw GraphError("block labeling: glue vertex cannot be anchored");
            SignFunction sf = sign_function(sub.wg.base(), na, pl);
            if (pin.first.is_unit()) {
                plab = label_net(sub.wg, na, sf, pl, pin.first, pin.second);
            } else if (pin.second.is_unit()) {
                plab = swap_labeling(
                    label_net(negate_weights(sub.wg), na, sf, pl, pin.second, pin.first));
            } else {
                throw GraphError("block labeling: glue vertex has no unit coordinate");
            }
        }
        for (std::size_t i = 0; i < sub.host.size(); ++i)
            if (sub.host[i] != pv)
                lab.set(sub.host[i], plab.at(static_cast<int>(i) + 1).first,
                        plab.at(static_cast<int>(i) + 1).second);
    };

    lab.set(1, RingElem(R, 1), RingElem(R, 0));
    std::vector<char> done(comps.size(), 0);
    std::vector<std::pair<std::size_t, int>> queue{{root, 1}};
    done[root] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        auto [bi, pv] = queue[h];
        label_one(bi, pv);
        for (int v : verts[bi])
            for (std::size_t bj : blocks_of[v])
                if (!done[bj]) {
                    done[bj] = 1;
                    queue.emplace_back(bj, v);
                }
    }
    return lab;
}

}  // namespace

LabelOutcome label_general(const WeightedGraph& wg, std::uint64_t oracle_budget) {
    const Graph& g = wg.base();
    LabelOutcome out;
    if (g.n() == 0) {
        out.kind = LabelOutcome::Kind::Labeled;
        out.labeling = Labeling{};
        return out;
    }
    if (!g.is_connected()) throw GraphError("label_general: graph must be connected");
    if (wg.ring().p() == 2) return label_general_residue2(wg, anchors(g));

    auto oracle_fallback = [&](const std::string& reason) {
        LabelOutcome o;
        auto r = oracle_solve(wg, {oracle_budget});
        if (r.status == OracleStatus::Labeled) {
            o.kind = LabelOutcome::Kind::Labeled;
            o.labeling = std::move(r.labeling);
        } else if (r.status == OracleStatus::Unsolvable) {
            o.kind = LabelOutcome::Kind::NoSolution;
            o.oracle_verified = true;
        } else {
            o.kind = LabelOutcome::Kind::Unknown;
            o.reason = reason + " (oracle budget exceeded)";
        }
        return o;
    };

    if (graph_is_cycle(g) && g.n() == 3) {
        out.kind = LabelOutcome::Kind::Labeled;
        out.labeling = label_triangle(wg);
        return out;
    }
    if (!find_bad_cycles(g).empty()) {
        auto prox = find_unfavorable_proximities(wg);
        if (!prox.empty()) {
            out.kind = LabelOutcome::Kind::NoSolution;
            out.certificate = prox.front();
            auto r = oracle_solve(wg, {oracle_budget});
            if (r.status == OracleStatus::Labeled) {
                // Defensive only: the certificate argument rules this out.
                out = LabelOutcome{};
                out.kind = LabelOutcome::Kind::Labeled;
                out.labeling = std::move(r.labeling);
                return out;
            }
            if (r.status == OracleStatus::Unsolvable) out.oracle_verified = true;
            return out;
        }
        return oracle_fallback("bad cycle without an unfavorable proximity");
    }
    try {
        Labeling lab = label_blocks(wg);
        if (!verify_labeling(wg, lab))
            throw GraphError("block labeling failed verification");
        out.kind = LabelOutcome::Kind::Labeled;
        out.labeling = std::move(lab);
        return out;
    } catch (const GraphError& e) {
        return oracle_fallback(std::string("constructive labeling failed: ") + e.what());
    } catch (const RingError& e) {
        return oracle_fallback(std::string("constructive labeling failed: ") + e.what());
    }
}

LabelOutcome label_general_residue2(const WeightedGraph& wg, const Anchor& anchor) {
    const Graph& g = wg.base();
    const RingSpec& R = wg.ring();
    LabelOutcome out;
    if (g.n() == 0) {
        out.kind = LabelOutcome::Kind::Labeled;
        out.labeling = Labeling{};
        return out;
    }
    if (!g.is_connected()) throw GraphError("label_general_residue2: graph must be connected");
    if (graph_is_cycle(g) && g.n() == 3) {
        out.kind = LabelOutcome::Kind::Labeled;
        out.labeling = label_triangle(wg);
        return out;
    }
    if (!find_bad_cycles(g).empty()) {
        out.kind = LabelOutcome::Kind::Unknown;
        out.reason = "graph contains a bad cycle";
        return out;
    }
    std::vector<Cycle> cycles;
    try {
        cycles = simple_cycles(g);
    } catch (const CycleBudgetExceeded&) {
        out.kind = LabelOutcome::Kind::Unknown;
        out.reason = "cycle enumeration budget exceeded";
        return out;
    }
    if (cycles.empty()) {
        out.kind = LabelOutcome::Kind::Labeled;
        out.labeling = label_tree(wg);
        return out;
    }
    std::set<int> common(cycles.front().vertices.begin(), cycles.front().vertices.end());
    for (const auto& c : cycles) {
        std::set<int> next;
        for (int v : c.vertices)
            if (common.count(v)) next.insert(v);
        common = std::move(next);
    }
    if (common.empty()) {
        out.kind = LabelOutcome::Kind::Unknown;
        out.reason = "condition (i) fails: the cycles share no common vertex";
        return out;
    }

    auto comps = biconnected_components(g);
    const std::uint64_t search_budget = 20000000;
    const Pair pin{RingElem(R, 1), RingElem(R, 0)};
    std::string reason = "no common cycle vertex admits the pinned construction";
    bool cond2_failed = false;

    for (int vi : common) {
        bool candidate_ok = true;
        Labeling lab;
        lab.set(vi, pin.first, pin.second);
        for (std::size_t bi = 0; bi < comps.size() && candidate_ok; ++bi) {
            if (comps[bi].size() == 1) continue;  // bridges handled as tree edges below
            auto bverts = vertices_of(comps[bi]);
            SubWG sub = make_sub(wg, bverts, comps[bi]);
            if (!sub.local.count(vi)) {
                candidate_ok = false;
                break;
            }
            int vil = sub.local.at(vi);
            std::set<int> need;
            for (std::size_t i = 0; i < sub.host.size(); ++i) {
                int h = sub.host[i];
                if (h != vi && g.degree(h) > sub.wg.base().degree(static_cast<int>(i) + 1))
                    need.insert(static_cast<int>(i) + 1);
            }
            std::optional<Labeling> plab;
            if (graph_is_cycle(sub.wg.base())) {
                const std::size_t N = sub.host.size();
                std::vector<int> base = cycle_order(sub.wg.base());
                std::size_t at = 0;
                for (std::size_t i = 0; i < N; ++i)
                    if (base[i] == vil) at = i;
                for (int dir : {1, -1}) {
                    std::vector<int> v(N + 1, 0);
                    for (std::size_t i = 0; i < N; ++i)
                        v[i + 1] = base[(at + N + static_cast<std::size_t>(dir) * i) % N];
                    for (std::size_t pr = 2; pr + 2 <= N && !plab; ++pr) {
                        try {
                            Labeling cl =
                                run_cycle_engine(sub.wg, v, 1, pr, pin, RingElem(R, 1), 1, 1);
                            bool units_ok = true;
                            for (int l : need) {
                                const auto& lv = cl.at(l);
                                if (!lv.first.is_unit() && !lv.second.is_unit()) units_ok = false;
                            }
                            if (units_ok) plab = std::move(cl);
                        } catch (const RingError&) {
                        } catch (const GraphError&) {
                        }
                    }
                    if (plab) break;
                }
                if (!plab) plab = pinned_block_search(sub.wg, vil, pin, need, search_budget);
            } else {
                if (!residue2_strippable(g, bverts, comps[bi], vi, anchor)) {
                    cond2_failed = true;
                    candidate_ok = false;
                    break;
                }
                plab = pinned_block_search(sub.wg, vil, pin, need, search_budget);
            }
            if (!plab) {
                candidate_ok = false;
                break;
            }
            for (std::size_t i = 0; i < sub.host.size(); ++i)
                if (sub.host[i] != vi)
                    lab.set(sub.host[i], plab->at(static_cast<int>(i) + 1).first,
                            plab->at(static_cast<int>(i) + 1).second);
        }
        if (!candidate_ok) continue;
        // Hang the remaining trees off the labeled part.
        bool progress = true;
        while (progress) {
            progress = false;
            for (const auto& e : g.edges()) {
                int p = 0, q = 0;
                if (lab.has(e.first) && !lab.has(e.second)) p = e.first, q = e.second;
                if (lab.has(e.second) && !lab.has(e.first)) p = e.second, q = e.first;
                if (p == 0) continue;
                try {
                    extend_over_tree_edge(wg, lab, p, q);
                } catch (const GraphError&) {
                    candidate_ok = false;
                    break;
                }
                progress = true;
            }
            if (!candidate_ok) break;
        }
        if (!candidate_ok || static_cast<int>(lab.pairs.size()) != g.n()) continue;
        if (!verify_labeling(wg, lab)) continue;
        out.kind = LabelOutcome::Kind::Labeled;
        out.labeling = std::move(lab);
        return out;
    }
    out.kind = LabelOutcome::Kind::Unknown;
    out.reason = cond2_failed
                     ? "condition (ii) fails: a net cannot be stripped through neighbors of the "
                       "common cycle vertex"
                     : reason;
    return out;
}

}  // namespace baleq

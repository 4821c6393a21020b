#include "baleq/groups.hpp"

#include <algorithm>
#include <numeric>

#include "baleq/oracle.hpp"

namespace baleq {

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t upow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

void check_same(const Class2Presentation& pres, const GroupElement& x) {
    if (x.gen.size() != pres.gen_orders.size() || x.central.size() != pres.basis_orders.size())
        throw GroupError("element does not belong to this presentation");
}

// Adds coeff * rep(e) into the central accumulator.
void add_rep(const Class2Presentation& pres, std::vector<std::uint64_t>& central, const Edge& e,
             std::uint64_t coeff) {
    const auto& rep = pres.edge_rep.at(e);
    for (std::size_t b = 0; b < rep.size(); ++b) {
        std::uint64_t m = pres.basis_orders[b];
        central[b] = (central[b] + coeff % m * (rep[b] % m)) % m;
    }
}

}  // namespace

bool Class2Presentation::independent_basis() const {
    const auto& es = graph.edges();
    if (basis_orders.size() != es.size()) return false;
    for (std::size_t k = 0; k < es.size(); ++k) {
        auto it = edge_rep.find(es[k]);
        if (it == edge_rep.end()) return false;
        for (std::size_t b = 0; b < basis_orders.size(); ++b)
            if (it->second[b] != (b == k ? 1u : 0u)) return false;
    }
    return true;
}

Class2Presentation group_from_graph(const Graph& g, std::uint64_t p, unsigned r) {
    if (!is_prime(p)) throw GroupError("group_from_graph: p must be prime");
    if (r < 1) throw GroupError("group_from_graph: r must be positive");
    if (g.n() < 2 || !g.is_connected())
        throw GroupError("group_from_graph: graph must be connected with at least one edge");
    for (int v = 1; v <= g.n(); ++v)
        if (g.degree(v) == 0) throw GroupError("group_from_graph: isolated vertex");

    Class2Presentation pres;
    pres.p = p;
    pres.r = r;
    pres.graph = g;
    pres.gen_orders.assign(static_cast<std::size_t>(g.n()) + 1, p);
    pres.gen_orders[0] = 0;
    pres.gen_orders[1] = upow(p, r);
    pres.gen_orders[2] = upow(p, r);
    const auto& es = g.edges();
    for (std::size_t k = 0; k < es.size(); ++k) {
        pres.basis_orders.push_back(es[k] == Edge{1, 2} ? upow(p, r) : p);
        std::vector<std::uint64_t> rep(es.size(), 0);
        rep[k] = 1;
        pres.edge_rep.emplace(es[k], std::move(rep));
    }
    return pres;
}

GroupSizes group_sizes(const Class2Presentation& pres) {
    GroupSizes s;
    unsigned E = static_cast<unsigned>(pres.graph.edge_count());
    unsigned V = static_cast<unsigned>(pres.graph.n());
    s.derived_exp = E + pres.r - 1;
    s.quotient_exp = V + 2 * pres.r - 2;
    s.order_exp = E + V + 3 * pres.r - 3;
    s.exponent = pres.p == 2 ? upow(2, pres.r + 1) : upow(pres.p, pres.r);
    return s;
}

GroupElement identity(const Class2Presentation& pres) {
    GroupElement e;
    e.gen.assign(pres.gen_orders.size(), 0);
    e.central.assign(pres.basis_orders.size(), 0);
    return e;
}

GroupElement generator(const Class2Presentation& pres, int i) {
    if (i < 1 || static_cast<std::size_t>(i) >= pres.gen_orders.size())
        throw GroupError("generator index out of range");
    GroupElement e = identity(pres);
    e.gen[static_cast<std::size_t>(i)] = 1;
    return e;
}

GroupElement central_generator(const Class2Presentation& pres, std::size_t b) {
    if (b >= pres.basis_orders.size()) throw GroupError("central basis index out of range");
    GroupElement e = identity(pres);
    e.central[b] = 1;
    return e;
}

GroupElement mul(const Class2Presentation& pres, const GroupElement& x, const GroupElement& y) {
    check_same(pres, x);
    check_same(pres, y);
    GroupElement z = identity(pres);
    for (std::size_t i = 1; i < z.gen.size(); ++i)
        z.gen[i] = (x.gen[i] + y.gen[i]) % pres.gen_orders[i];
    for (std::size_t b = 0; b < z.central.size(); ++b)
        z.central[b] = (x.central[b] + y.central[b]) % pres.basis_orders[b];
    // Collect y's generator part left through x's: moving g_i^{b_i} (from y)
    // past g_j^{a_j} (from x) for i < j contributes [g_j, g_i]^{a_j b_i}
    // = c_{i,j}^{-a_j b_i}.
    for (const auto& e : pres.graph.edges()) {
        auto i = static_cast<std::size_t>(e.first);
        auto j = static_cast<std::size_t>(e.second);
        std::uint64_t ord = 1;
        for (std::size_t b = 0; b < pres.basis_orders.size(); ++b)
            ord = std::max(ord, pres.basis_orders[b]);
        std::uint64_t prod = (x.gen[j] % ord) * (y.gen[i] % ord) % ord;
        add_rep(pres, z.central, e, (ord - prod) % ord);
    }
    return z;
}

GroupElement inv(const Class2Presentation& pres, const GroupElement& x) {
    check_same(pres, x);
    GroupElement y = identity(pres);
    for (std::size_t i = 1; i < y.gen.size(); ++i)
        y.gen[i] = (pres.gen_orders[i] - x.gen[i]) % pres.gen_orders[i];
    GroupElement probe = mul(pres, x, y);  // purely central residue of x * y
    for (std::size_t b = 0; b < y.central.size(); ++b) {
        std::uint64_t m = pres.basis_orders[b];
        y.central[b] = (m - probe.central[b] % m) % m;
    }
    return y;
}

GroupElement power(const Class2Presentation& pres, const GroupElement& x, std::uint64_t m) {
    GroupElement acc = identity(pres);
    GroupElement base = x;
    while (m > 0) {
        if (m & 1) acc = mul(pres, acc, base);
        base = mul(pres, base, base);
        m >>= 1;
    }
    return acc;
}

GroupElement commutator(const Class2Presentation& pres, const GroupElement& x,
                        const GroupElement& y) {
    check_same(pres, x);
    check_same(pres, y);
    GroupElement z = identity(pres);
    for (const auto& e : pres.graph.edges()) {
        auto i = static_cast<std::size_t>(e.first);
        auto j = static_cast<std::size_t>(e.second);
        std::uint64_t ord = 1;
        for (std::size_t b = 0; b < pres.basis_orders.size(); ++b)
            ord = std::max(ord, pres.basis_orders[b]);
        std::uint64_t pos = (x.gen[i] % ord) * (y.gen[j] % ord) % ord;
        std::uint64_t negv = (x.gen[j] % ord) * (y.gen[i] % ord) % ord;
        add_rep(pres, z.central, e, (pos + ord - negv) % ord);
    }
    return z;
}

bool is_central(const Class2Presentation& pres, const GroupElement& x) {
    check_same(pres, x);
    for (std::size_t i = 1; i < x.gen.size(); ++i)
        if (x.gen[i] != 0) return false;
    return true;
}

std::uint64_t element_order(const Class2Presentation& pres, const GroupElement& x) {
    GroupElement e = identity(pres);
    GroupElement acc = x;
    std::uint64_t cap = upow(pres.p, pres.r + 1) + 1;
    for (std::uint64_t k = 1; k <= cap; ++k) {
        if (acc == e) return k;
        acc = mul(pres, acc, x);
    }
    throw GroupError("element_order: order exceeds the class-2 exponent bound");
}

std::optional<std::uint64_t> group_exponent_by_enumeration(const Class2Presentation& pres,
                                                           std::uint64_t max_elems) {
    std::uint64_t total = 1;
    for (std::size_t i = 1; i < pres.gen_orders.size(); ++i) {
        total *= pres.gen_orders[i];
        if (total > max_elems) return std::nullopt;
    }
    for (std::uint64_t m : pres.basis_orders) {
        total *= m;
        if (total > max_elems) return std::nullopt;
    }
    std::uint64_t exp = 1;
    GroupElement x = identity(pres);
    auto bump = [&]() {
        for (std::size_t i = 1; i < x.gen.size(); ++i) {
            if (++x.gen[i] < pres.gen_orders[i]) return true;
            x.gen[i] = 0;
        }
        for (std::size_t b = 0; b < x.central.size(); ++b) {
            if (++x.central[b] < pres.basis_orders[b]) return true;
            x.central[b] = 0;
        }
        return false;
    };
    do {
        exp = std::lcm(exp, element_order(pres, x));
    } while (bump());
    return exp;
}

std::pair<PresentationD, WeightedGraph> build_presentation_D(const Class2Presentation& pres,
                                                             const GroupElement& target) {
    if (!is_central(pres, target)) throw GroupError("build_presentation_D: target is not central");
    if (!pres.independent_basis())
        throw GroupError("build_presentation_D: commutator basis is not the edge set");
    const auto& es = pres.graph.edges();
    std::set<int> supp;
    for (std::size_t k = 0; k < es.size(); ++k)
        if (target.central[k] != 0) {
            supp.insert(es[k].first);
            supp.insert(es[k].second);
        }
    PresentationD pd;
    pd.support.assign(supp.begin(), supp.end());
    std::map<int, int> local;
    for (std::size_t i = 0; i < pd.support.size(); ++i)
        local[pd.support[i]] = static_cast<int>(i) + 1;

    RingSpec R(pres.p, pres.r);
    std::vector<Edge> sub_edges;
    std::map<Edge, RingElem> sub_weights;
    for (std::size_t k = 0; k < es.size(); ++k) {
        if (!supp.count(es[k].first) || !supp.count(es[k].second)) continue;
        pd.weights[es[k]] = target.central[k] % R.modulus();
        Edge le = make_edge(local[es[k].first], local[es[k].second]);
        sub_edges.push_back(le);
        sub_weights.emplace(le, RingElem(R, target.central[k]));
    }
    Graph sub(static_cast<int>(pd.support.size()), sub_edges);
    return {std::move(pd), WeightedGraph(R, sub, std::move(sub_weights))};
}

namespace {

// Turns a labeling of a (sub)graph into a witness pair and verifies it.
std::optional<std::pair<GroupElement, GroupElement>> lift_witness(
    const Class2Presentation& pres, const std::vector<int>& support, const Labeling& lab,
    const GroupElement& target) {
    GroupElement g = identity(pres), h = identity(pres);
    for (std::size_t i = 0; i < support.size(); ++i) {
        auto v = static_cast<std::size_t>(support[i]);
        const auto& [x, y] = lab.at(static_cast<int>(i) + 1);
        g.gen[v] = x.value() % pres.gen_orders[v];
        h.gen[v] = y.value() % pres.gen_orders[v];
    }
    if (commutator(pres, g, h) != target) return std::nullopt;
    return std::make_pair(std::move(g), std::move(h));
}

CommutatorDecision decide_independent(const Class2Presentation& pres, const GroupElement& target,
                                      std::uint64_t budget) {
    auto [pd, wg] = build_presentation_D(pres, target);
    CommutatorDecision dec;
    if (pd.support.empty()) {
        dec.kind = CommutatorDecision::Kind::Witness;
        dec.witness = {identity(pres), identity(pres)};
        return dec;
    }
    // A weight is only determined modulo its commutator's order; enumerate the
    // lifts to Z/p^r for edges of order < p^r.
    const auto& es = pres.graph.edges();
    std::vector<std::pair<Edge, std::uint64_t>> lift_edges;  // local edge, stride
    std::map<int, int> local;
    for (std::size_t i = 0; i < pd.support.size(); ++i)
        local[pd.support[i]] = static_cast<int>(i) + 1;
    std::uint64_t total = 1;
    const std::uint64_t mod = upow(pres.p, pres.r);
    for (std::size_t k = 0; k < es.size(); ++k) {
        if (!local.count(es[k].first) || !local.count(es[k].second)) continue;
        std::uint64_t ord = pres.basis_orders[k];
        if (ord < mod) {
            lift_edges.push_back({make_edge(local[es[k].first], local[es[k].second]), ord});
            total *= mod / ord;
            if (total > 100000) {
                dec.kind = CommutatorDecision::Kind::Unknown;
                dec.reason = "too many weight lifts to enumerate";
                return dec;
            }
        }
    }
    RingSpec R = wg.ring();
    bool any_unknown = false;
    std::string why;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::map<Edge, RingElem> w = wg.weights();
        std::uint64_t t = idx;
        for (const auto& [le, ord] : lift_edges) {
            std::uint64_t steps = mod / ord;
            w.at(le) = RingElem(R, w.at(le).value() % ord + (t % steps) * ord);
            t /= steps;
        }
        WeightedGraph lifted(R, wg.base(), std::move(w));
        auto out = label_general(lifted, budget);
        if (out.kind == LabelOutcome::Kind::Labeled) {
            auto wit = lift_witness(pres, pd.support, *out.labeling, target);
            if (!wit) {
                any_unknown = true;
                why = "labeling did not lift to a commutator witness";
                continue;
            }
            dec.kind = CommutatorDecision::Kind::Witness;
            dec.witness = std::move(wit);
            return dec;
        }
        if (out.kind == LabelOutcome::Kind::Unknown) {
            any_unknown = true;
            why = out.reason;
            continue;
        }
        if (!dec.certificate && out.certificate) dec.certificate = out.certificate;
        if (out.oracle_verified) dec.oracle_verified = true;
    }
    if (any_unknown) {
        dec.kind = CommutatorDecision::Kind::Unknown;
        dec.reason = why;
        return dec;
    }
    dec.kind = CommutatorDecision::Kind::NotACommutator;
    return dec;
}

CommutatorDecision decide_dependent(const Class2Presentation& pres, const GroupElement& target,
                                    std::uint64_t budget) {
    // Enumerate presentation d-vectors: weights on the edges whose basis image
    // matches the target, then ask the labeling engine about each.
    CommutatorDecision dec;
    const auto& es = pres.graph.edges();
    const std::uint64_t mod = upow(pres.p, pres.r);
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < es.size(); ++k) {
        total *= mod;
        if (total > 100000) {
            dec.kind = CommutatorDecision::Kind::Unknown;
            dec.reason = "too many presentation weight vectors to enumerate";
            return dec;
        }
    }
    RingSpec R(pres.p, pres.r);
    bool any_unknown = false;
    std::string why;
    std::vector<int> full_support;
    for (int v = 1; v <= pres.graph.n(); ++v) full_support.push_back(v);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<std::uint64_t> d(es.size());
        std::uint64_t t = idx;
        for (std::size_t k = 0; k < es.size(); ++k) {
            d[k] = t % mod;
            t /= mod;
        }
        std::vector<std::uint64_t> image(pres.basis_orders.size(), 0);
        for (std::size_t k = 0; k < es.size(); ++k) {
            const auto& rep = pres.edge_rep.at(es[k]);
            for (std::size_t b = 0; b < image.size(); ++b) {
                std::uint64_t m = pres.basis_orders[b];
                image[b] = (image[b] + d[k] % m * (rep[b] % m)) % m;
            }
        }
        if (image != target.central) continue;
        std::map<Edge, RingElem> w;
        for (std::size_t k = 0; k < es.size(); ++k) w.emplace(es[k], RingElem(R, d[k]));
        auto out = label_general(WeightedGraph(R, pres.graph, std::move(w)), budget);
        if (out.kind == LabelOutcome::Kind::Labeled) {
            auto wit = lift_witness(pres, full_support, *out.labeling, target);
            if (!wit) {
                any_unknown = true;
                why = "labeling did not lift to a commutator witness";
                continue;
            }
            dec.kind = CommutatorDecision::Kind::Witness;
            dec.witness = std::move(wit);
            return dec;
        }
        if (out.kind == LabelOutcome::Kind::Unknown) {
            any_unknown = true;
            why = out.reason;
            continue;
        }
        if (!dec.certificate && out.certificate) dec.certificate = out.certificate;
        if (out.oracle_verified) dec.oracle_verified = true;
    }
    if (any_unknown) {
        dec.kind = CommutatorDecision::Kind::Unknown;
        dec.reason = why;
        return dec;
    }
    dec.kind = CommutatorDecision::Kind::NotACommutator;
    return dec;
}

}  // namespace

CommutatorDecision decide_commutator(const Class2Presentation& pres, const GroupElement& target,
                                     std::uint64_t budget) {
    if (!is_central(pres, target)) throw GroupError("decide_commutator: target is not central");
    if (pres.independent_basis()) return decide_independent(pres, target, budget);
    return decide_dependent(pres, target, budget);
}

ImageResult commutator_image(const Class2Presentation& pres, std::uint64_t budget) {
    ImageResult res;
    res.box_size = 1;
    for (std::uint64_t m : pres.basis_orders) res.box_size *= m;
    std::uint64_t classes = 1;
    for (std::size_t i = 1; i < pres.gen_orders.size(); ++i) classes *= pres.gen_orders[i];
    if (classes > budget || classes * classes > budget) {
        res.exceeded = true;
        return res;
    }
    auto bump = [&](GroupElement& x) {
        for (std::size_t i = 1; i < x.gen.size(); ++i) {
            if (++x.gen[i] < pres.gen_orders[i]) return true;
            x.gen[i] = 0;
        }
        return false;
    };
    GroupElement x = identity(pres);
    do {
        GroupElement y = identity(pres);
        do {
            res.image.insert(commutator(pres, x, y).central);
        } while (bump(y));
    } while (bump(x));
    res.full = res.image.size() == res.box_size;
    if (!res.full) {
        std::vector<std::uint64_t> v(pres.basis_orders.size(), 0);
        auto bump_c = [&]() {
            for (std::size_t b = 0; b < v.size(); ++b) {
                if (++v[b] < pres.basis_orders[b]) return true;
                v[b] = 0;
            }
            return false;
        };
        do {
            if (!res.image.count(v)) {
                res.missing = v;
                break;
            }
        } while (bump_c());
    }
    return res;
}

Class2Presentation construct_family_example(std::uint64_t p, unsigned r, unsigned s, unsigned t) {
    if (s + 1 < r + 1 || t + 2 < s + 2 * r)
        throw GroupError("construct_family_example: m = s-r+1 and n = t-s-2r+2 must be positive");
    unsigned m = s - r + 1;
    unsigned n = t - s - 2 * r + 2;
    if (n < 4)
        throw GroupError("construct_family_example: bound 4 <= n fails (n = " +
                         std::to_string(n) + ")");
    if (m < n)
        throw GroupError("construct_family_example: bound n <= m fails (n = " +
                         std::to_string(n) + ", m = " + std::to_string(m) + ")");
    // A connected n-vertex graph with a bad cycle keeps two adjacent degree-2
    // vertices on it, so at most C(n-2, 2) + 3 edges are possible; the
    // corollary's stated bound n(n-1)/2 over-counts.
    unsigned cap = (n - 2) * (n - 3) / 2 + 3;
    if (m > cap)
        throw GroupError("construct_family_example: bound m <= C(n-2,2)+3 fails (m = " +
                         std::to_string(m) + ", cap = " + std::to_string(cap) + ")");

    std::vector<Edge> es;
    for (unsigned i = 1; i < n; ++i) es.push_back({static_cast<int>(i), static_cast<int>(i) + 1});
    es.push_back({1, 3});
    for (unsigned i = 3; i <= n && es.size() < m; ++i)
        for (unsigned j = i + 2; j <= n && es.size() < m; ++j)
            es.push_back({static_cast<int>(i), static_cast<int>(j)});
    return group_from_graph(Graph(static_cast<int>(n), std::move(es)), p, r);
}

}  // namespace baleq

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "baleq/classify.hpp"
#include "baleq/graph.hpp"
#include "baleq/label.hpp"

namespace baleq {

struct GroupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite class-2 p-group in normal form: generators g_1..g_n with prescribed
// orders, a central subgroup presented by an independent basis c_1..c_B with
// prescribed orders, and each commutator [g_i, g_j] (i < j adjacent in the
// graph) expressed in basis coordinates. Non-adjacent generators commute.
struct Class2Presentation {
    std::uint64_t p = 0;
    unsigned r = 1;
    Graph graph;                                         // non-commuting pairs
    std::vector<std::uint64_t> gen_orders;               // 1-based; [0] unused
    std::vector<std::uint64_t> basis_orders;             // 0-based central basis
    std::map<Edge, std::vector<std::uint64_t>> edge_rep; // [g_i,g_j] in basis coords

    // True when the commutator basis is exactly the edge set: B = |E| and edge
    // k maps to the k-th unit vector (the graph-group case).
    bool independent_basis() const;

    friend bool operator==(const Class2Presentation& a, const Class2Presentation& b) {
        return a.p == b.p && a.r == b.r && a.graph.edges() == b.graph.edges() &&
               a.graph.n() == b.graph.n() && a.gen_orders == b.gen_orders &&
               a.basis_orders == b.basis_orders && a.edge_rep == b.edge_rep;
    }
    friend bool operator!=(const Class2Presentation& a, const Class2Presentation& b) {
        return !(a == b);
    }
};

struct GroupElement {
    std::vector<std::uint64_t> gen;      // 1-based exponents; [0] unused
    std::vector<std::uint64_t> central;  // basis coordinates

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.gen == b.gen && a.central == b.central;
    }
    friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
    friend bool operator<(const GroupElement& a, const GroupElement& b) {
        return std::tie(a.gen, a.central) < std::tie(b.gen, b.central);
    }
};

// Group orders as exponents of p, plus the exponent of the group per the
// closed formula (p^r, or 2^{r+1} when p = 2).
struct GroupSizes {
    unsigned order_exp = 0;      // |G|   = p^order_exp
    unsigned derived_exp = 0;    // |G'|  = |Z(G)| = p^derived_exp
    unsigned quotient_exp = 0;   // |G/Z| = p^quotient_exp
    std::uint64_t exponent = 1;  // exp(G)
};

// The group G attached to a graph: generators one per vertex, g_1 and g_2 of
// order p^r, the rest of order p; [g_i, g_j] nontrivial exactly on edges, of
// order p^r on {1,2} and p elsewhere; all commutators central and independent.
Class2Presentation group_from_graph(const Graph& g, std::uint64_t p, unsigned r);

GroupSizes group_sizes(const Class2Presentation& pres);

GroupElement identity(const Class2Presentation& pres);
GroupElement generator(const Class2Presentation& pres, int i);
GroupElement central_generator(const Class2Presentation& pres, std::size_t b);

GroupElement mul(const Class2Presentation& pres, const GroupElement& x, const GroupElement& y);
GroupElement inv(const Class2Presentation& pres, const GroupElement& x);
GroupElement power(const Class2Presentation& pres, const GroupElement& x, std::uint64_t m);
// Closed form alpha_i beta_j - alpha_j beta_i per edge, mapped through the
// basis coordinates; agrees with x^-1 y^-1 x y computed by mul/inv.
GroupElement commutator(const Class2Presentation& pres, const GroupElement& x,
                        const GroupElement& y);

bool is_central(const Class2Presentation& pres, const GroupElement& x);
std::uint64_t element_order(const Class2Presentation& pres, const GroupElement& x);

// Exact exp(G) by enumerating all normal forms; nullopt when the group has
// more than max_elems elements.
std::optional<std::uint64_t> group_exponent_by_enumeration(const Class2Presentation& pres,
                                                           std::uint64_t max_elems = 1000000);

// The weight function of a central target on its support: vertices incident to
// an edge with nonzero target exponent, all edges among them, weights = target
// exponents lifted to Z/p^r. support maps local vertex k+1 -> host vertex.
struct PresentationD {
    std::vector<int> support;
    std::map<Edge, std::uint64_t> weights;  // host-indexed, values mod p^r
};
std::pair<PresentationD, WeightedGraph> build_presentation_D(const Class2Presentation& pres,
                                                             const GroupElement& target);

struct CommutatorDecision {
    enum class Kind { Witness, NotACommutator, Unknown };
    Kind kind;
    std::optional<std::pair<GroupElement, GroupElement>> witness;
    std::optional<ProximityReport> certificate;  // NotACommutator, when one exists
    bool oracle_verified = false;
    std::string reason;  // Unknown
};

// Is the central target a commutator? Labeled outcomes are lifted to a
// verified witness pair; NoSolution across every weight lift proves the
// negative; anything unresolved is Unknown.
CommutatorDecision decide_commutator(const Class2Presentation& pres, const GroupElement& target,
                                     std::uint64_t budget = 100000000);

struct ImageResult {
    bool exceeded = false;
    std::set<std::vector<std::uint64_t>> image;  // central coordinates attained
    std::uint64_t box_size = 0;                  // |G'|
    bool full = false;
    std::optional<std::vector<std::uint64_t>> missing;  // least vector not attained
};

// Exact commutator image K(G) in central coordinates, by enumerating all
// (x, y) classes modulo the center.
ImageResult commutator_image(const Class2Presentation& pres, std::uint64_t budget = 100000000);

// The graph-group witness family: a connected graph on n = t-s-2r+2 vertices
// with m = s-r+1 edges containing a bad cycle, so |G| = p^t, |G'| = p^s,
// exp(G) = p^r (2^{r+1} for p = 2) and K(G) != G'.
Class2Presentation construct_family_example(std::uint64_t p, unsigned r, unsigned s, unsigned t);

}  // namespace baleq

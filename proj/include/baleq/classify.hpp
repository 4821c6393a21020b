#pragma once

#include <map>
#include <optional>
#include <vector>

#include "baleq/graph.hpp"

namespace baleq {

// A simple cycle u_1..u_r with deg(u_i) > 2 for i <= r-2 and the two remaining
// adjacent vertices of degree exactly 2.
struct BadCycleReport {
    Cycle cycle;
    std::pair<int, int> low_degree_pair;  // ascending

    friend bool operator==(const BadCycleReport& a, const BadCycleReport& b) {
        return a.cycle == b.cycle && a.low_degree_pair == b.low_degree_pair;
    }
};

// A bad cycle together with one chosen outside neighbor per high-degree vertex.
struct ProximityReport {
    Cycle cycle;
    std::pair<int, int> low_degree_pair;
    std::map<int, int> attachments;  // high-degree cycle vertex -> neighbor outside the cycle

    friend bool operator==(const ProximityReport& a, const ProximityReport& b) {
        return a.cycle == b.cycle && a.low_degree_pair == b.low_degree_pair &&
               a.attachments == b.attachments;
    }
};

struct Anchor {
    std::vector<int> vertices;  // ascending

    bool contains(int v) const;
};

struct SignFunction {
    std::vector<int> sigma;  // 1-based; sigma[0] unused; values in {-1, 0, +1}

    int operator()(int v) const { return sigma[static_cast<std::size_t>(v)]; }
};

struct BorderlessResult {
    bool borderless;
    std::optional<std::pair<Cycle, Cycle>> witness;  // two cycles sharing >= 2 vertices
};

std::vector<BadCycleReport> find_bad_cycles(const Graph& g,
                                            std::size_t budget = kDefaultCycleBudget);

std::vector<ProximityReport> find_unfavorable_proximities(
    const WeightedGraph& wg, std::size_t budget = kDefaultCycleBudget);

// True when the residue pattern of an unfavorable proximity holds for `prox` in wg:
// cycle edges touching the high-degree chain have residue 0, the low-degree edge
// and all attachment edges have nonzero residue.
bool is_unfavorable(const WeightedGraph& wg, const ProximityReport& prox);

BorderlessResult is_borderless(const Graph& g, std::size_t budget = kDefaultCycleBudget);

bool is_net(const Graph& g, std::size_t budget = kDefaultCycleBudget);

int eta(const Graph& g, std::size_t budget = kDefaultCycleBudget);

// W is admissible when no simple cycle acquires a violation it did not already
// have at W = {}: a violation is fewer than two degree-2 vertices outside W on
// the cycle, or exactly two that are adjacent on it.
bool is_admissible(const Graph& g, const std::vector<int>& w,
                   std::size_t budget = kDefaultCycleBudget);

// Canonical anchor: greedy maximal extension of P = {v : deg(v) != 2 or v on no
// simple cycle} in increasing vertex order.
Anchor anchors(const Graph& g, std::size_t budget = kDefaultCycleBudget);

std::vector<Anchor> anchors_all(const Graph& g, std::size_t max_count,
                                std::size_t budget = kDefaultCycleBudget);

// Vertices of degree != 2 or on no simple cycle (contained in every anchor).
std::vector<int> anchor_core(const Graph& g, std::size_t budget = kDefaultCycleBudget);

SignFunction sign_function(const Graph& g, const Anchor& anchor, int positive_at,
                           std::size_t budget = kDefaultCycleBudget);

// Checks the three parity clauses literally; returns an explanation on failure.
std::optional<std::string> check_sign_function(const Graph& g, const Anchor& anchor,
                                               const SignFunction& sf);

}  // namespace baleq

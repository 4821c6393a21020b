#pragma once

#include <optional>
#include <vector>

#include "baleq/classify.hpp"
#include "baleq/graph.hpp"

namespace baleq {

// One gluing step: a tree or cycle piece, given by its vertex/edge sets in the
// host graph's labels. glue_host is the single vertex shared with the graph
// accumulated so far (0 for the first step).
struct GlueStep {
    bool is_cycle = false;
    std::vector<int> vertices;  // ascending host labels
    std::vector<Edge> edges;
    int glue_host = 0;
};

struct BorderlessDecomposition {
    std::vector<GlueStep> steps;
};

// One net-building step: a segment glued at both endpoints, its interior
// vertices new to the accumulated graph.
struct NetStep {
    Segment segment;
    std::pair<int, int> attach;  // endpoints, in the segment's canonical direction
};

struct NetDecomposition {
    Cycle base;
    std::vector<NetStep> steps;
    bool anchor_aware = false;

    // Base cycle counts as one step, so this equals eta of the net.
    std::size_t step_count() const { return steps.size() + 1; }
};

// Strips pendant trees and cycles-hanging-off-one-vertex until a single tree or
// cycle remains; lexicographically smallest candidate first. Requires a
// connected borderless graph.
BorderlessDecomposition decompose_borderless(const Graph& g,
                                             std::size_t budget = kDefaultCycleBudget);

// Strips maximal segments keeping the remainder a net (or cycle) until only
// the base cycle is left. With an anchor, the base cycle must end with exactly
// two non-anchor points and every stripped segment must carry one or two
// non-anchor interior points (found by backtracking over strip orders);
// requires no bad cycles and g != C3 in that case.
NetDecomposition decompose_net(const Graph& g, const std::optional<Anchor>& anchor = std::nullopt,
                               std::size_t budget = kDefaultCycleBudget);

// Replay checks: the steps rebuild exactly g's edge set with single-vertex
// (resp. two-endpoint) attachment at every step.
bool verify_borderless(const Graph& g, const BorderlessDecomposition& dec);
bool verify_net(const Graph& g, const NetDecomposition& dec);

}  // namespace baleq

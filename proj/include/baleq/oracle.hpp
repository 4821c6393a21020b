#pragma once

#include <cstdint>
#include <optional>

#include "baleq/graph.hpp"
#include "baleq/label.hpp"

namespace baleq {

struct OracleBudget {
    std::uint64_t max_nodes = 100000000;
};

enum class OracleStatus { Labeled, Unsolvable, BudgetExceeded };

struct OracleResult {
    OracleStatus status;
    std::optional<Labeling> labeling;  // lexicographically least, when Labeled
    std::uint64_t nodes = 0;
};

struct OracleCount {
    bool exceeded = false;
    std::uint64_t count = 0;
    std::uint64_t nodes = 0;
};

// Depth-first search over per-vertex (alpha, beta) pairs in BFS-from-vertex-1
// order, value order alpha-major ascending, pruning on each fully assigned
// edge. The first solution found is the lexicographically least one.
OracleResult oracle_solve(const WeightedGraph& wg, OracleBudget budget = {});

// Same search, counting every consistent labeling.
OracleCount oracle_count(const WeightedGraph& wg, OracleBudget budget = {});

}  // namespace baleq

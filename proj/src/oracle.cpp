#include "baleq/oracle.hpp"

#include <vector>

namespace baleq {

namespace {

struct Search {
    const WeightedGraph& wg;
    std::uint64_t max_nodes;
    std::uint64_t nodes = 0;
    bool exceeded = false;
    std::vector<int> order;                    // assignment order
    std::vector<int> pos;                      // vertex -> index in order (or -1)
    std::vector<std::pair<std::uint64_t, std::uint64_t>> value;  // by order index
    std::uint64_t count = 0;
    bool stop_at_first;
    std::optional<Labeling> first;

    explicit Search(const WeightedGraph& g, std::uint64_t budget, bool first_only)
        : wg(g), max_nodes(budget), stop_at_first(first_only) {
        const Graph& b = g.base();
        pos.assign(static_cast<std::size_t>(b.n()) + 1, -1);
        std::vector<char> seen(static_cast<std::size_t>(b.n()) + 1, 0);
        // BFS from vertex 1, then from each later unvisited vertex.
        for (int s = 1; s <= b.n(); ++s) {
            if (seen[s]) continue;
            std::vector<int> queue{s};
            seen[s] = 1;
            for (std::size_t h = 0; h < queue.size(); ++h) {
                int v = queue[h];
                pos[v] = static_cast<int>(order.size());
                order.push_back(v);
                for (int w : b.neighbors(v))
                    if (!seen[w]) {
                        seen[w] = 1;
                        queue.push_back(w);
                    }
            }
        }
        value.resize(order.size());
    }

    bool consistent(int idx) const {
        int v = order[idx];
        const auto [av, bv] = value[idx];
        const std::uint64_t m = wg.ring().modulus();
        for (int u : wg.base().neighbors(v)) {
            int iu = pos[u];
            if (iu > idx) continue;  // not assigned yet (order index decides)
            const auto [au, bu] = value[iu];
            std::uint64_t d = wg.weight(u, v).value();
            // Equation x_i y_j - x_j y_i = d_{i,j} with i < j by vertex label.
            std::uint64_t lhs;
            if (u < v)
                lhs = (au % m) * bv % m + (m - (av % m) * bu % m) % m;
            else
                lhs = (av % m) * bu % m + (m - (au % m) * bv % m) % m;
            if (lhs % m != d) return false;
        }
        return true;
    }

    // Returns false when the caller should unwind (first found or budget hit).
    bool dfs(std::size_t idx) {
        if (idx == order.size()) {
            ++count;
            if (stop_at_first) {
                Labeling lab;
                for (std::size_t i = 0; i < order.size(); ++i)
                    lab.set(order[i], RingElem(wg.ring(), value[i].first),
                            RingElem(wg.ring(), value[i].second));
                first = std::move(lab);
                return false;
            }
            return true;
        }
        const std::uint64_t m = wg.ring().modulus();
        for (std::uint64_t a = 0; a < m; ++a)
            for (std::uint64_t b = 0; b < m; ++b) {
                if (++nodes > max_nodes) {
                    exceeded = true;
                    return false;
                }
                value[idx] = {a, b};
                if (!consistent(static_cast<int>(idx))) continue;
                if (!dfs(idx + 1)) return false;
            }
        return true;
    }
};

}  // namespace

OracleResult oracle_solve(const WeightedGraph& wg, OracleBudget budget) {
    Search s(wg, budget.max_nodes, true);
    s.dfs(0);
    OracleResult r;
    r.nodes = s.nodes;
    if (s.first) {
        r.status = OracleStatus::Labeled;
        r.labeling = std::move(s.first);
    } else if (s.exceeded) {
        r.status = OracleStatus::BudgetExceeded;
    } else {
        r.status = OracleStatus::Unsolvable;
    }
    return r;
}

OracleCount oracle_count(const WeightedGraph& wg, OracleBudget budget) {
    Search s(wg, budget.max_nodes, false);
    s.dfs(0);
    return {s.exceeded, s.count, s.nodes};
}

}  // namespace baleq

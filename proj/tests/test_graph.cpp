#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "baleq/graph.hpp"

using namespace baleq;

namespace {
Graph theta5() {
    // Three parallel length-2 paths between vertices 2 and 4.
    return Graph(5, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {2, 5}, {4, 5}});
}
Graph kite6() {
    // 4-cycle 1-2-3-4 with two pendant edges at vertex 3.
    return Graph(6, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {3, 5}, {3, 6}});
}
}  // namespace

TEST_CASE("graph construction and validation") {
    Graph g(4, {{2, 1}, {3, 2}, {1, 3}});
    CHECK(g.n() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK(!g.has_edge(1, 4));
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(4) == 0);
    CHECK(g.neighbors(2) == std::vector<int>{1, 3});
    CHECK(!g.is_connected());
    CHECK(Graph(3, {{1, 2}, {2, 3}}).is_connected());
    CHECK(Graph(0, {}).is_connected());
    CHECK_THROWS_AS(Graph(3, {{1, 1}}), GraphError);          // loop
    CHECK_THROWS_AS(Graph(3, {{1, 2}, {2, 1}}), GraphError);  // parallel
    CHECK_THROWS_AS(Graph(3, {{1, 4}}), GraphError);          // out of range
    CHECK_THROWS_AS(Graph(3, {{0, 2}}), GraphError);
    CHECK_THROWS_AS(g.degree(5), GraphError);
}

TEST_CASE("cycle canonical form") {
    Cycle a({3, 1, 2});
    Cycle b({2, 3, 1});
    Cycle c({1, 3, 2});
    CHECK(a.vertices == std::vector<int>{1, 2, 3});
    CHECK(a == b);
    CHECK(a == c);  // reflection
    Cycle d({4, 3, 2, 1});
    CHECK(d.vertices == std::vector<int>{1, 2, 3, 4});
    CHECK(d.contains(3));
    CHECK(!d.contains(5));
    CHECK(d.adjacent_on_cycle(1, 2));
    CHECK(d.adjacent_on_cycle(4, 1));
    CHECK(!d.adjacent_on_cycle(1, 3));
    auto el = d.edge_list();
    CHECK(el == std::vector<Edge>{{1, 2}, {1, 4}, {2, 3}, {3, 4}});
    CHECK_THROWS_AS(Cycle({1, 2}), GraphError);
    CHECK_THROWS_AS(Cycle({1, 2, 1}), GraphError);
}

TEST_CASE("simple cycle enumeration") {
    CHECK(simple_cycles(Graph(3, {{1, 2}, {2, 3}})).empty());
    auto c3 = simple_cycles(Graph(3, {{1, 2}, {2, 3}, {1, 3}}));
    REQUIRE(c3.size() == 1);
    CHECK(c3[0].vertices == std::vector<int>{1, 2, 3});

    Graph k4(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    CHECK(simple_cycles(k4).size() == 7);  // 4 triangles + 3 squares

    auto th = simple_cycles(theta5());
    REQUIRE(th.size() == 3);
    CHECK(th[0].size() == 4);
    CHECK(th[1].size() == 4);
    CHECK(th[2].size() == 4);

    CHECK_THROWS_AS(simple_cycles(k4, 3), CycleBudgetExceeded);
}

TEST_CASE("maximal segments") {
    auto ms = maximal_segments(theta5());
    CHECK(!ms.is_cycle);
    REQUIRE(ms.open.size() == 3);
    CHECK(ms.closed.empty());
    CHECK(ms.open[0].vertices == std::vector<int>{2, 1, 4});
    CHECK(ms.open[1].vertices == std::vector<int>{2, 3, 4});
    CHECK(ms.open[2].vertices == std::vector<int>{2, 5, 4});

    auto kite = maximal_segments(kite6());
    CHECK(kite.open.size() == 2);   // the two pendant edges at vertex 3
    REQUIRE(kite.closed.size() == 1);  // the 4-cycle hanging off vertex 3
    CHECK(kite.closed[0].front() == 3);
    CHECK(kite.closed[0].back() == 3);
    CHECK(kite.closed[0].size() == 5);

    auto cyc = maximal_segments(Graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}));
    CHECK(cyc.is_cycle);
    CHECK(cyc.open.empty());
    CHECK(cyc.closed.empty());

    CHECK_THROWS_AS(maximal_segments(Graph(4, {{1, 2}, {3, 4}})), GraphError);
}

TEST_CASE("wedge sum") {
    Graph c3(3, {{1, 2}, {2, 3}, {1, 3}});
    Graph p2(2, {{1, 2}});
    Graph w = wedge_sum(c3, p2, 2, 1);
    CHECK(w.n() == 4);
    CHECK(w.edge_count() == 4);
    CHECK(w.has_edge(2, 4));
    Graph w2 = wedge_sum(c3, c3, 1, 3);
    CHECK(w2.n() == 5);
    CHECK(w2.edge_count() == 6);
    CHECK(w2.degree(1) == 4);
    CHECK_THROWS_AS(wedge_sum(c3, p2, 4, 1), GraphError);
}

TEST_CASE("weighted graph") {
    RingSpec z3(3, 1);
    Graph g(3, {{1, 2}, {2, 3}});
    std::map<Edge, RingElem> w{{{1, 2}, RingElem(z3, 1)}, {{2, 3}, RingElem(z3, 2)}};
    WeightedGraph wg(z3, g, w);
    CHECK(wg.weight(1, 2).value() == 1);
    CHECK(wg.weight(3, 2).value() == 2);
    CHECK_THROWS_AS(wg.weight(1, 3), GraphError);
    std::map<Edge, RingElem> missing{{{1, 2}, RingElem(z3, 1)}};
    CHECK_THROWS_AS(WeightedGraph(z3, g, missing), GraphError);
    std::map<Edge, RingElem> extra = w;
    extra.emplace(Edge{1, 3}, RingElem(z3, 0));
    CHECK_THROWS_AS(WeightedGraph(z3, g, extra), GraphError);
    std::map<Edge, RingElem> wrong{{{1, 2}, RingElem(z3, 1)},
                                   {{2, 3}, RingElem(RingSpec(5, 1), 2)}};
    CHECK_THROWS_AS(WeightedGraph(z3, g, wrong), RingMismatch);
}

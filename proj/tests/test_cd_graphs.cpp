#include <doctest.h>

#include "atlas/cd_graphs.hpp"

using namespace atlas;
using arith::i64;

TEST_CASE("eichler class numbers") {
    CHECK(cd::eichler_class_number(70, 1) == 2);
    CHECK(cd::eichler_class_number(70, 3) == 8);
    CHECK(cd::eichler_class_number(2, 1) == 1);
    CHECK(cd::eichler_class_number(2, 13) == 3);
    CHECK(cd::eichler_class_number(13, 2) == 3);

    CHECK_THROWS_AS(cd::eichler_class_number(26, 1), BadInput);   // even factor count
    CHECK_THROWS_AS(cd::eichler_class_number(70, 14), BadInput);  // not coprime
}

TEST_CASE("torsion-free test") {
    CHECK(cd::torsion_free(210, 3));
    CHECK(cd::torsion_free(26, 2));
    CHECK(!cd::torsion_free(26, 13));
    CHECK(!cd::torsion_free(35, 5));
    CHECK(!cd::torsion_free(210, 5));
}

TEST_CASE("dual graph skeletons") {
    auto sk = cd::dual_graph(26, 13);
    CHECK(sk.kind == cd::DualGraphResult::Kind::SkeletonOnly);
    CHECK(sk.skeleton.n_vertices == 2);
    CHECK(sk.skeleton.n_edges == 3);
    CHECK(!sk.skeleton.torsion_free);

    auto und = cd::dual_graph(210, 3);
    CHECK(und.kind == cd::DualGraphResult::Kind::Underdetermined);
    CHECK(und.skeleton.n_vertices == 4);
    CHECK(und.skeleton.n_edges == 8);
    CHECK(und.skeleton.torsion_free);

    CHECK_THROWS_AS(cd::dual_graph(26, 13, 4), TorsionPresent);
    CHECK_THROWS_AS(cd::dual_graph(26, 5), BadInput);
}

TEST_CASE("constrained dual graph of the fiber at (210, 3)") {
    std::vector<std::pair<int, int>> forbidden{{0, 1}, {2, 3}};  // within each side
    auto res = cd::dual_graph(210, 3, 4, forbidden);
    REQUIRE(res.kind == cd::DualGraphResult::Kind::Full);
    const auto& g = *res.graph;
    CHECK(g.h == 2);
    CHECK(g.graph.edges.size() == 8);
    for (i64 i = 0; i < 2; ++i)
        for (i64 j = 0; j < 2; ++j) CHECK(g.multiplicity[i][j] == 2);

    // every vertex has degree p + 1 = 4
    std::vector<int> deg(4, 0);
    for (auto& e : g.graph.edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    for (int v = 0; v < 4; ++v) CHECK(deg[v] == 4);

    // the same graph comes out without the redundant forbidden pairs
    auto res2 = cd::dual_graph(210, 3, 4);
    REQUIRE(res2.kind == cd::DualGraphResult::Kind::Full);
    CHECK(res2.graph->multiplicity == g.multiplicity);
}

TEST_CASE("side-swap quotient and reduction type") {
    auto res = cd::dual_graph(210, 3, 4);
    REQUIRE(res.kind == cd::DualGraphResult::Kind::Full);
    const auto& g = *res.graph;

    auto inv = cd::side_swap_involution(g);
    cd::Graph q = cd::al_quotient(g.graph, inv);
    CHECK(q.n_vertices == 2);
    CHECK(q.edges.size() == 2);
    CHECK(cd::kodaira_symbol(q) == KodairaSymbol{2});
}

TEST_CASE("quotient edge rules") {
    // identity action: nothing changes
    cd::Graph g;
    g.n_vertices = 2;
    g.edges = {{0, 1, 1}, {0, 1, 1}};
    cd::EdgeInvolution id;
    id.vertex_map = {0, 1};
    id.edge_map = {0, 1};
    id.edge_reversed = {0, 0};
    cd::Graph q = cd::al_quotient(g, id);
    CHECK(q.n_vertices == 2);
    CHECK(q.edges.size() == 2);

    // free action pairing vertices and edges: counts halve
    cd::Graph h;
    h.n_vertices = 4;
    h.edges = {{0, 1, 1}, {2, 3, 1}};
    cd::EdgeInvolution swap;
    swap.vertex_map = {2, 3, 0, 1};
    swap.edge_map = {1, 0};
    swap.edge_reversed = {0, 0};
    cd::Graph hq = cd::al_quotient(h, swap);
    CHECK(hq.n_vertices == 2);
    CHECK(hq.edges.size() == 1);

    // broken action is rejected
    cd::EdgeInvolution bad;
    bad.vertex_map = {1, 0};
    bad.edge_map = {0, 1};
    bad.edge_reversed = {0, 0};
    CHECK_THROWS_AS(cd::al_quotient(h, bad), NotInvolution);
}

TEST_CASE("kodaira symbols of quotient graphs") {
    cd::Graph loop;
    loop.n_vertices = 1;
    loop.edges = {{0, 0, 1}};
    CHECK(cd::kodaira_symbol(loop) == KodairaSymbol{1});

    cd::Graph tree;
    tree.n_vertices = 2;
    tree.edges = {{0, 1, 1}};
    CHECK_THROWS_AS(cd::kodaira_symbol(tree), NotGenusOne);

    cd::Graph disconnected;
    disconnected.n_vertices = 3;
    disconnected.edges = {{0, 0, 1}};
    CHECK_THROWS_AS(cd::kodaira_symbol(disconnected), NotGenusOne);

    // a cycle with a tail: the tail is ignored, lengths add up
    cd::Graph tadpole;
    tadpole.n_vertices = 3;
    tadpole.edges = {{0, 1, 2}, {0, 1, 3}, {1, 2, 7}};
    CHECK(cd::kodaira_symbol(tadpole) == KodairaSymbol{5});
}

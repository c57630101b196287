#include "cyclept/splittree.hpp"

#include <gtest/gtest.h>

using namespace cyclept;

namespace {

Graph cycle_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= n; ++i) e.emplace_back(i, i % n + 1);
    return make_graph(n, e);
}

}  // namespace

TEST(SplitTree, CliqueWithThreeLeavesIsTriangle) {
    SplitTree t = parse_split_tree("Z(K(Z, Z))");
    EXPECT_EQ(t.leaf_count(), 3);
    EXPECT_EQ(t.clique_count(), 1);
    EXPECT_EQ(graph_json(original_graph(t)), R"({"n":3,"edges":[[1,2],[1,3],[2,3]]})");
    EXPECT_TRUE(isomorphic(t, parse_split_tree("KR(Z, Z, Z)")));
}

TEST(SplitTree, StarEnteredAtCenter) {
    // The root leaf binds to the star center: K_{1,2} centered at vertex 1.
    Graph g = original_graph(parse_split_tree("Z(SC(Z,Z))"));
    EXPECT_EQ(g.edges, (std::vector<std::pair<int, int>>{{1, 2}, {1, 3}}));
}

TEST(SplitTree, StarEnteredAtExtremity) {
    // SX(center, extremity): the root leaf is an extremity, so the path is 1-2-3.
    Graph g = original_graph(parse_split_tree("Z(SX(Z, Z))"));
    EXPECT_EQ(g.edges, (std::vector<std::pair<int, int>>{{1, 2}, {2, 3}}));
}

TEST(SplitTree, TwoStarsCenterToCenterIsFourCycle) {
    SplitTree t = parse_split_tree("e(SC(Z,Z), SC(Z,Z))");
    EXPECT_EQ(t.star_count(), 2);
    Graph g = original_graph(t);
    EXPECT_EQ(g.edges, (std::vector<std::pair<int, int>>{{1, 3}, {1, 4}, {2, 3}, {2, 4}}));
    EXPECT_TRUE(validate_dh(t));
}

TEST(SplitTree, DegreeErrors) {
    EXPECT_THROW(parse_split_tree("SR(Z)"), split_syntax_error);
    EXPECT_THROW(parse_split_tree("Z(K(Z))"), split_syntax_error);
    EXPECT_THROW(parse_split_tree("e(SC(Z,Z))"), split_syntax_error);
}

TEST(SplitTree, SyntaxErrorsCarryPosition) {
    try {
        parse_split_tree("Z(K(Z, Q))");
        FAIL() << "expected an error";
    } catch (const split_syntax_error& e) {
        EXPECT_EQ(e.position, 7u);
    }
    EXPECT_THROW(parse_split_tree("Z(K(Z, Z)"), split_syntax_error);
    EXPECT_THROW(parse_split_tree("K(Z, Z, Z)"), split_syntax_error);
}

TEST(SplitTree, PrintRoundTrip) {
    for (const char* s : {"Z(K(Z, Z))", "KR(Z, Z, Z, Z)", "e(SX(Z, Z), SX(Z, Z))", "SR(Z, K(Z, Z), K(Z, Z), Z, Z, Z)",
                          "KR(SX(K(Z, Z), Z), Z, Z, Z)", "Z(K(Z, SC(K(Z, Z), K(Z, Z))))"}) {
        SplitTree t = parse_split_tree(s);
        SplitTree u = parse_split_tree(print(t));
        EXPECT_TRUE(isomorphic(t, u)) << s;
        EXPECT_EQ(graph_json(original_graph(t)).size(), graph_json(original_graph(u)).size()) << s;
    }
}

TEST(SplitTree, WhitespaceIsFlexible) {
    EXPECT_TRUE(isomorphic(parse_split_tree(" Z ( K ( Z ,Z ) ) "), parse_split_tree("Z(K(Z, Z))")));
}

TEST(SplitTree, Validators) {
    EXPECT_TRUE(validate_3lp(parse_split_tree("Z(SC(Z,Z))")));
    // Star center bound to another star's extremity is not reduced.
    EXPECT_FALSE(validate_dh(parse_split_tree("Z(SC(SC(Z, Z), Z))")));
    // Two cliques joined by an edge are not reduced.
    EXPECT_FALSE(validate_dh(parse_split_tree("Z(K(K(Z, Z), Z))")));
    // C4 is distance-hereditary but not a 3-leaf power.
    EXPECT_FALSE(validate_3lp(parse_split_tree("e(SC(Z,Z), SC(Z,Z))")));
}

TEST(SplitTree, DistanceHereditary) {
    EXPECT_TRUE(is_distance_hereditary(cycle_graph(4)));
    EXPECT_FALSE(is_distance_hereditary(cycle_graph(5)));
    EXPECT_FALSE(is_distance_hereditary(cycle_graph(6)));
    EXPECT_TRUE(is_distance_hereditary(make_graph(5, {{1, 2}, {2, 3}, {3, 4}, {3, 5}})));
    EXPECT_THROW(is_distance_hereditary(cycle_graph(12)), std::exception);
}

TEST(SplitTree, DotOutput) {
    std::string dot = graph_dot(original_graph(parse_split_tree("Z(K(Z, Z))")));
    EXPECT_NE(dot.find("graph"), std::string::npos);
    EXPECT_NE(dot.find("1 -- 2"), std::string::npos);
}

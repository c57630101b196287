#include "cyclept/verify.hpp"

#include <gtest/gtest.h>

using namespace cyclept;

TEST(Verify, ChiSquaredStatistic) {
    EXPECT_NEAR(chi_squared({12, 8}, {0.5, 0.5}, 20), 0.8, 1e-12);
    EXPECT_THROW(chi_squared({1, 1}, {1.0, 0.0}, 2), precondition_error);
}

TEST(Verify, ChiSquaredIsPermutationInvariant) {
    EXPECT_DOUBLE_EQ(chi_squared({5, 10, 15}, {0.2, 0.3, 0.5}, 30), chi_squared({15, 5, 10}, {0.5, 0.2, 0.3}, 30));
}

TEST(Verify, Cutoffs) {
    EXPECT_DOUBLE_EQ(chi_squared_cutoff(29), 43.7);
    EXPECT_NEAR(chi_squared_cutoff(1), 3.841, 1e-3);
    EXPECT_NEAR(chi_squared_cutoff(27), 40.113, 1e-3);
}

TEST(Verify, ZeroProbabilityBucketsAreDropped) {
    auto c = chi_squared_test({0, 5, 5}, {0.0, 0.5, 0.5});
    EXPECT_EQ(c.df, 1);
    EXPECT_EQ(c.draws, 10);
    EXPECT_DOUBLE_EQ(c.statistic, 0.0);
    auto bad = chi_squared_test({1, 5, 5}, {0.0, 0.5, 0.5});
    EXPECT_FALSE(bad.pass());
}

TEST(Verify, BucketProbabilitiesSumToOne) {
    auto p = size_bucket_probabilities(enumerate_pointed(catalog(ClassId::two_three_trees), 300), Real("0.1"), 30);
    double sum = 0;
    for (double x : p) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(p[0], 0.0);
    EXPECT_EQ(p[2], 0.0);
}

TEST(Verify, ConnectedGraphCounts) {
    std::vector<std::size_t> expected{1, 1, 2, 6, 21, 112};
    for (int n = 1; n <= 6; ++n) EXPECT_EQ(connected_graphs(n).size(), expected[n - 1]);
}

TEST(Verify, CanonicalFormIgnoresLabels) {
    Graph a = make_graph(4, {{1, 2}, {2, 3}, {3, 4}});
    Graph b = make_graph(4, {{3, 1}, {1, 4}, {4, 2}});
    Graph star = make_graph(4, {{1, 2}, {1, 3}, {1, 4}});
    EXPECT_EQ(graph_canonical_form(a), graph_canonical_form(b));
    EXPECT_NE(graph_canonical_form(a), graph_canonical_form(star));
}

TEST(Verify, ThreeLeafPowerWitness) {
    Graph paw = make_graph(4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}});
    auto w = three_leaf_power_witness(paw);
    ASSERT_TRUE(w);
    EXPECT_FALSE(three_leaf_power_witness(make_graph(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}})));
}

TEST(Verify, BruteForceCounts) {
    EXPECT_EQ(count_23_trees(12), (std::vector<long>{0, 0, 1, 0, 1, 1, 1, 1, 2, 2, 4, 5, 8}));
    EXPECT_EQ(brute_force_count(ClassId::dh, 6), (std::vector<long>{0, 1, 1, 2, 6, 18, 73}));
    EXPECT_EQ(brute_force_count(ClassId::tlp, 6), (std::vector<long>{0, 1, 1, 2, 5, 12, 32}));
    EXPECT_THROW(brute_force_count(ClassId::dh, 9), precondition_error);
}

TEST(Verify, AutomorphismCycles) {
    // path 0-1-2: the swap (0 2) is an automorphism, (0 1) is not
    std::vector<std::vector<bool>> m{{false, true, false}, {true, false, true}, {false, true, false}};
    EXPECT_TRUE(is_automorphism_cycle(m, {0, 2}));
    EXPECT_FALSE(is_automorphism_cycle(m, {0, 1}));
    EXPECT_TRUE(is_automorphism_cycle(m, {1}));
}

TEST(Verify, TreeCanonicalForm) {
    Tree a, b;
    for (int i = 0; i < 4; ++i) a.add_vertex(), b.add_vertex();
    a.connect(0, 1), a.connect(0, 2), a.connect(0, 3);
    b.connect(3, 0), b.connect(3, 1), b.connect(3, 2);
    EXPECT_EQ(tree_canonical_form(a), tree_canonical_form(b));
}

TEST(Verify, LineFit) {
    auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_DOUBLE_EQ(f.slope, 2.0);
    EXPECT_DOUBLE_EQ(f.intercept, 1.0);
    EXPECT_DOUBLE_EQ(f.r_squared, 1.0);
    EXPECT_THROW(fit_line({1, 1}, {2, 3}), precondition_error);
}

TEST(Verify, StatsRows) {
    std::vector<SplitTree> v{parse_split_tree("Z(K(Z, Z))"), parse_split_tree("Z(SC(Z, Z))"),
                             parse_split_tree("KR(Z, Z, Z, Z)")};
    auto rows = split_tree_stats(v);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].size, 3);
    EXPECT_DOUBLE_EQ(rows[0].mean_cliques, 0.5);
    EXPECT_DOUBLE_EQ(rows[0].mean_stars, 0.5);
    EXPECT_EQ(stats_csv(rows), "size,mean_cliques,mean_stars,count\n3,0.5,0.5,2\n4,1,0,1\n");
}

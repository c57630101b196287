#include "cyclept/samplers.hpp"
#include "cyclept/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cyclept;

TEST(Samplers, TreeCenter) {
    // path 0-1-2: vertex center; path 0-1-2-3: edge center
    EXPECT_EQ(tree_center({{1}, {0, 2}, {1}}), CenterResult::vertex(1));
    EXPECT_EQ(tree_center({{1}, {0, 2}, {1, 3}, {2}}), CenterResult::edge(1, 2));
    EXPECT_EQ(tree_center({{}}), CenterResult::vertex(0));
}

TEST(Samplers, DrawWeightsOfPlantedTrees) {
    TwoThreeSampler s(Real("0.3"));
    auto w = s.weights_S(1);
    EXPECT_EQ(w.size(), 6u);
    EXPECT_DOUBLE_EQ(w[0], 0.3);
    EXPECT_EQ(s.weights_S_pointed(1).size(), 12u);
    EXPECT_EQ(s.weights_T_pointed().size(), 16u);
}

TEST(Samplers, DissymmetryMeanSize) {
    TwoThreeSampler s(Real("0.1"));
    Rng rng(11);
    const int n = 10000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        auto d = s.sample_dissymmetry(rng);
        ASSERT_TRUE(d);
        ASSERT_TRUE(is_23_tree(d->structure.tree));
        sum += d->structure.size();
        sq += d->structure.size() * d->structure.size();
    }
    const double mean = sum / n, sd = std::sqrt(sq / n - mean * mean);
    EXPECT_NEAR(mean, 2.023, 3 * sd / std::sqrt(n));
}

TEST(Samplers, DissymmetryIterations) {
    TwoThreeSampler s(Real("0.5"));
    Rng rng(12);
    const int n = 10000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        auto d = s.sample_dissymmetry(rng);
        ASSERT_TRUE(d);
        sum += d->iterations;
        sq += d->iterations * d->iterations;
    }
    const double mean = sum / n, sd = std::sqrt(sq / n - mean * mean);
    EXPECT_NEAR(mean, 3.287, 3 * sd / std::sqrt(n));
}

TEST(Samplers, SmallestTreeIsAnEdge) {
    TwoThreeSampler s(Real("0.01"));
    Rng rng(13);
    auto d = s.sample_dissymmetry(rng);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->structure.size(), 2);
}

TEST(Samplers, MarkedCyclesAreAutomorphismCycles) {
    for (ClassId id : {ClassId::two_three_trees, ClassId::dh, ClassId::tlp}) {
        SamplerOptions opt;
        opt.max_size = 8;
        auto s = make_sampler(id, Real(0.9 * radius_estimate(id, 300)), opt);
        Rng rng(14);
        int seen = 0;
        while (seen < 300) {
            auto p = s->sample_pointed(rng);
            if (!p) continue;
            ++seen;
            ASSERT_TRUE(validate_structure(p->structure));
            ASSERT_FALSE(p->cycle.empty());
            ASSERT_TRUE(cycle_is_automorphic(*p)) << class_id_name(id);
        }
    }
}

TEST(Samplers, TwoThreeTreesOfSizeTenAreUniform) {
    SamplerOptions opt;
    opt.max_size = 10;
    TwoThreePointedSampler s(Real("0.45"), opt);
    Rng rng(15);
    auto u = conditioned_uniformity(s, {{10, 4}}, 10000, rng);
    EXPECT_TRUE(u.complete);
    for (const auto& [code, c] : u.counts[10]) EXPECT_NEAR(c / 10000.0, 0.25, 3 * std::sqrt(0.25 * 0.75 / 10000));
}

TEST(Samplers, PathAndTriangleEquallyLikely) {
    SamplerOptions opt;
    opt.max_size = 3;
    SplitSampler s(ClassId::dh, Real("0.12"), opt);
    Rng rng(16);
    auto u = conditioned_uniformity(s, {{3, 2}}, 4000, rng);
    ASSERT_EQ(u.counts[3].size(), 2u);
    for (const auto& [code, c] : u.counts[3]) EXPECT_NEAR(c / 4000.0, 0.5, 3 * std::sqrt(0.25 / 4000));
}

TEST(Samplers, CaseWeightsSumToPointedValue) {
    SplitSampler s(ClassId::dh, Real("0.1"));
    auto w = s.case_weights();
    double sum = 0;
    for (double x : w) sum += x;
    Oracle o = Oracle::from_series(enumerate_pointed(catalog(ClassId::dh), 200));
    EXPECT_NEAR(sum, static_cast<double>(o.evaluate(Real("0.1"))), 1e-12);
}

TEST(Samplers, SplitTreesValidate) {
    for (ClassId id : {ClassId::dh, ClassId::tlp}) {
        auto s = make_sampler(id, Real(id == ClassId::dh ? "0.13" : "0.25"));
        Rng rng(17);
        for (int i = 0; i < 500; ++i) {
            auto x = s->sample(rng);
            ASSERT_TRUE(x);
            ASSERT_TRUE(validate_structure(*x)) << print(x->split);
            if (id == ClassId::dh && x->size() <= 10) ASSERT_TRUE(is_distance_hereditary(original_graph(x->split)));
            ASSERT_TRUE(isomorphic(x->split, parse_split_tree(print(x->split))));
        }
    }
}

TEST(Samplers, RejectsZBeyondRadius) {
    EXPECT_THROW(make_sampler(ClassId::dh, Real("0.2")), domain_error);
    EXPECT_THROW(make_sampler(ClassId::two_three_trees, Real("0.6")), domain_error);
}

TEST(Samplers, MaxSizeAborts) {
    SamplerOptions opt;
    opt.max_size = 2;
    auto s = make_sampler(ClassId::tlp, Real("0.25"), opt);
    Rng rng(18);
    for (int i = 0; i < 200; ++i)
        if (auto x = s->sample(rng)) EXPECT_LE(x->size(), 2);
}

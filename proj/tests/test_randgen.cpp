#include "cyclept/randgen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace cyclept;

TEST(Randgen, SameSeedSameStream) {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Randgen, PoissonMean) {
    Rng rng(1);
    for (double lam : {0.3, 4.0, 50.0}) {
        double sum = 0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) sum += static_cast<double>(poisson(lam, rng));
        EXPECT_NEAR(sum / n, lam, 5 * std::sqrt(lam / n));
    }
}

TEST(Randgen, ConditionedPoissonRespectsBound) {
    Rng rng(2);
    for (int i = 0; i < 2000; ++i) {
        EXPECT_GE(poisson_geq(0.01, 2, rng), 2);
        EXPECT_GE(poisson_geq1(3.0, rng), 1);
    }
}

TEST(Randgen, ConditionedPoissonDistribution) {
    // P[X = 1 | X >= 1] = λ e^{-λ} / (1 - e^{-λ})
    Rng rng(3);
    const double lam = 0.7;
    const int n = 40000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += poisson_geq1(lam, rng) == 1;
    const double p = lam * std::exp(-lam) / (1 - std::exp(-lam));
    EXPECT_NEAR(static_cast<double>(ones) / n, p, 5 * std::sqrt(p * (1 - p) / n));
}

TEST(Randgen, DrawIndexNeedsPositiveWeight) {
    Rng rng(4);
    EXPECT_THROW(draw_index({0.0, 0.0}, rng), domain_error);
    EXPECT_EQ(draw_index({0.0, 1.0, 0.0}, rng), 1u);
}

TEST(Randgen, PartitionOfTwo) {
    // P[two distinct elements] = ½A(z)² / (½A(z)² + ½A(z²))
    const double s1 = 0.6, s2 = 0.2;
    CycleWeights s{0.0, s1, s2};
    auto terms = cycle_index_terms(SizeSpec::exactly(2), false, false);
    Rng rng(5);
    const int n = 40000;
    int pairs = 0;
    for (int i = 0; i < n; ++i) pairs += draw_monomial(terms, s, {}, rng).counts.at(1) == 2;
    const double p = 0.5 * s1 * s1 / (0.5 * s1 * s1 + 0.5 * s2);
    EXPECT_NEAR(static_cast<double>(pairs) / n, p, 5 * std::sqrt(p * (1 - p) / n));
}

TEST(Randgen, UnboundedSetSizes) {
    CycleWeights s{0.0, 0.5, 0.1, 0.02, 0.004};
    Rng rng(6);
    for (int m : {0, 1, 2, 3}) {
        for (int i = 0; i < 500; ++i) EXPECT_GE(draw_set(SizeSpec::at_least(m), s, rng).size(), m);
    }
}

TEST(Randgen, JointSchemeMatchesRejection) {
    CycleWeights s{0.0, 0.4, 0.1, 0.02};
    Rng a(7), b(8);
    const int n = 30000;
    std::vector<double> ja(8, 0), jb(8, 0);
    SetOptions rej;
    rej.rejection = true;
    for (int i = 0; i < n; ++i) {
        ja[std::min(7, draw_set(SizeSpec::at_least(2), s, a).size())] += 1.0 / n;
        jb[std::min(7, draw_set(SizeSpec::at_least(2), s, b, rej).size())] += 1.0 / n;
    }
    for (int k = 2; k < 8; ++k) EXPECT_NEAR(ja[k], jb[k], 0.015) << "size " << k;
}

TEST(Randgen, TailProbabilityOfEmptyAndSingleton) {
    CycleWeights s{0.0, 0.3, 0.05};
    const double lam = 0.3 + 0.05 / 2;
    EXPECT_NEAR(set_tail_probability(s, 1), 1 - std::exp(-lam), 1e-15);
    EXPECT_NEAR(set_tail_probability(s, 2), 1 - std::exp(-lam) * (1 + 0.3), 1e-15);
}

TEST(Randgen, ComposeCycles) {
    EXPECT_EQ(compose_cycles({{1, 2}, {3, 4}}), (std::vector<int>{1, 3, 2, 4}));
    EXPECT_EQ(compose_cycles({{5}}), (std::vector<int>{5}));
}

TEST(Randgen, PointedPairGivesTwoCopies) {
    auto terms = cycle_index_terms(SizeSpec::exactly(2), true, true);
    CycleWeights s{0.0, 0.5, 0.2}, t{0.0, 0.3, 0.1};
    Rng rng(9);
    int copy_calls = 0;
    auto [items, cycle] = pointed_set_sampler(
        SizeSpec::exactly(2), s, t, true, rng, [](int) { return 0; },
        [](int) { return std::make_pair(1, std::vector<int>{10}); },
        [&](int v, const std::vector<int>&) {
            ++copy_calls;
            return std::make_pair(v, std::vector<int>{20});
        });
    EXPECT_EQ(items.size(), 2u);
    EXPECT_EQ(copy_calls, 1);
    EXPECT_EQ(cycle, (std::vector<int>{10, 20}));
}

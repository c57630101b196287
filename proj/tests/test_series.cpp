#include "cyclept/series.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cyclept;

namespace {

Series random_series(std::mt19937& g, int order) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<mpq_class> c;
    for (int i = 0; i <= order; ++i) {
        mpq_class q(num(g), den(g));
        q.canonicalize();
        c.push_back(q);
    }
    return Series(order, c);
}

}  // namespace

TEST(Series, MonomialAndProduct) {
    Series a = Series::monomial(6, 2) + Series::monomial(6, 3, 2);
    Series b = a * a;
    EXPECT_EQ(b[4], 1);
    EXPECT_EQ(b[5], 4);
    EXPECT_EQ(b[6], 4);
    EXPECT_EQ(b.order(), 6);
}

TEST(Series, TruncationDropsHighTerms) {
    Series a = Series::monomial(4, 3);
    EXPECT_TRUE((a * a).is_zero());
}

TEST(Series, Plethysm) {
    Series a = Series::from_integers(10, std::vector<int>{0, 1, 2, 3});
    Series p = pleth(a, 3);
    EXPECT_EQ(p[3], 1);
    EXPECT_EQ(p[6], 2);
    EXPECT_EQ(p[9], 3);
    EXPECT_EQ(p[4], 0);
    EXPECT_EQ(pleth(pleth(a, 2), 3), pleth(a, 6));
}

TEST(Series, ExpLogRoundTrip) {
    Series a = Series::from_integers(8, std::vector<int>{0, 1, -2, 5, 0, 3});
    Series e = exp_series(a);
    EXPECT_EQ(e[0], 1);
    EXPECT_EQ(e[1], 1);
    EXPECT_EQ(log_series(e), a);
}

TEST(Series, InverseOfOneMinusZ) {
    Series a = Series::one(7) - Series::monomial(7, 1);
    Series inv = inverse(a);
    for (int n = 0; n <= 7; ++n) EXPECT_EQ(inv[n], 1);
    EXPECT_THROW(inverse(Series::monomial(7, 1)), domain_error);
}

TEST(Series, IntegrateInvertsZDerive) {
    // T°(z) = 2z² + 4z⁴ + 5z⁵ → ∫ T°(z)/z = z² + z⁴ + z⁵
    Series tp = Series::from_integers(6, std::vector<int>{0, 0, 2, 0, 4, 5});
    Series t = integrate(shift(tp, -1));
    EXPECT_EQ(t, Series::from_integers(6, std::vector<int>{0, 0, 1, 0, 1, 1}));
    EXPECT_EQ(z_derive(t), tp);
}

TEST(Series, RingAxiomsOnRandomInstances) {
    std::mt19937 g(3);
    for (int trial = 0; trial < 20; ++trial) {
        Series a = random_series(g, 8), b = random_series(g, 8), c = random_series(g, 8);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a + b - b, a);
    }
}

TEST(Series, NegativeOrderRejected) { EXPECT_THROW(Series(-1), precondition_error); }

TEST(Series, IntegersRejectFractions) {
    Series a(2);
    a[1] = mpq_class(1, 2);
    EXPECT_THROW(a.integers(), integrity_error);
}

TEST(Series, JsonAndCsv) {
    Series a = Series::from_integers(3, std::vector<int>{0, 1, 1, 2});
    EXPECT_EQ(to_json(a), "[0,1,1,2]");
    EXPECT_EQ(to_csv(a), "index,value\n0,0\n1,1\n2,1\n3,2\n");
}

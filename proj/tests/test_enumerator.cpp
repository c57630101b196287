#include "cyclept/enumerator.hpp"

#include <gtest/gtest.h>

using namespace cyclept;

namespace {

std::vector<long> first(const Series& s, int n) {
    std::vector<long> out;
    for (int i = 0; i <= n; ++i) out.push_back(s[i].get_num().get_si());
    return out;
}

}  // namespace

TEST(Enumerator, PointedTwoThreeTrees) {
    Series p = enumerate_pointed(catalog(ClassId::two_three_trees), 15);
    EXPECT_EQ(first(p, 15), (std::vector<long>{0, 0, 2, 0, 4, 5, 6, 7, 16, 18, 40, 55, 96, 156, 280, 435}));
}

TEST(Enumerator, DistanceHereditary) {
    Series p = enumerate_pointed(catalog(ClassId::dh), 10);
    EXPECT_EQ(first(p, 10), (std::vector<long>{0, 1, 2, 6, 24, 90, 438, 2156, 11872, 67428, 400100}));
    EXPECT_EQ(first(unpoint(p), 10), (std::vector<long>{0, 1, 1, 2, 6, 18, 73, 308, 1484, 7492, 40010}));
}

TEST(Enumerator, ThreeLeafPowers) {
    Series p = enumerate_pointed(catalog(ClassId::tlp), 10);
    EXPECT_EQ(first(p, 10), (std::vector<long>{0, 1, 2, 6, 20, 60, 192, 574, 1816, 5661, 18400}));
    EXPECT_EQ(first(unpoint(p), 10), (std::vector<long>{0, 1, 1, 2, 5, 12, 32, 82, 227, 629, 1840}));
}

TEST(Enumerator, DissymmetryAgreesWithCyclePointing) {
    const auto& e = catalog(ClassId::two_three_trees);
    EXPECT_EQ(enumerate_dissymmetry(e, 60), unpoint(enumerate_pointed(e, 60)));
}

TEST(Enumerator, DissymmetryNeedsRootedVariants) {
    EXPECT_THROW(enumerate_dissymmetry(catalog(ClassId::dh), 5), precondition_error);
}

TEST(Enumerator, UnpointChecksDivisibility) {
    Series bad = Series::from_integers(3, std::vector<int>{0, 1, 3});
    EXPECT_THROW(unpoint(bad), integrity_error);
}

TEST(Enumerator, CachedResultsAreTruncated) {
    const auto& e = catalog(ClassId::dh);
    auto big = enumerate_all(e, 30);
    auto small = enumerate_all(e, 12);
    EXPECT_EQ(small.at("K").order(), 12);
    EXPECT_EQ(small.at("K"), big.at("K").truncate(12));
}

TEST(Enumerator, ClassNames) {
    EXPECT_EQ(parse_class_id("3lp"), ClassId::tlp);
    EXPECT_EQ(class_id_name(parse_class_id("dh")), "dh");
    EXPECT_THROW(parse_class_id("cographs"), precondition_error);
}

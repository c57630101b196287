#include "cyclept/grammar.hpp"

#include <gtest/gtest.h>

using namespace cyclept;

namespace {

std::vector<long> coeffs(const std::vector<mpz_class>& v) {
    std::vector<long> out;
    for (const auto& c : v) out.push_back(c.get_si());
    return out;
}

// (coeff, counts) pairs as text, for compact comparison.
std::vector<std::string> terms(const SizeSpec& spec, bool symmetric, bool pointed) {
    std::vector<std::string> out;
    for (const auto& t : cycle_index_terms(spec, symmetric, pointed)) {
        std::string s = t.coeff.get_str() + ":";
        for (std::size_t i = 1; i < t.counts.size(); ++i)
            for (int j = 0; j < t.counts[i]; ++j) s += "s" + std::to_string(i);
        if (t.ell) s += "t" + std::to_string(t.ell);
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Grammar, TrivialSystem) {
    auto r = solve(ClassSystem::parse("A = Z"), 5);
    EXPECT_EQ(coeffs(r.at("A")), (std::vector<long>{0, 1, 0, 0, 0, 0}));
}

TEST(Grammar, PlantedTwoThreeTrees) {
    auto r = solve(ClassSystem::parse("S = Z + Z * Set{2,3}(S)"), 15);
    EXPECT_EQ(coeffs(r.at("S")),
              (std::vector<long>{0, 1, 0, 1, 1, 1, 2, 3, 5, 8, 14, 23, 40, 70, 122, 217}));
}

TEST(Grammar, OnlineMatchesKleene) {
    ClassSystem sys = ClassSystem::parse("K = Set{>=2}(Z + SC)\nSC = Set{>=2}(Z + K)");
    auto online = solve_online(sys, 12);
    auto kleene = solve_kleene(sys, 12);
    for (const auto& name : {"K", "SC"}) EXPECT_EQ(online.at(name), kleene.at(name).integers());
}

TEST(Grammar, CycleIndexOfSets) {
    EXPECT_EQ(terms(SizeSpec::exactly(2), false, false), (std::vector<std::string>{"1/2:s1s1", "1/2:s2"}));
    EXPECT_EQ(terms(SizeSpec::exactly(2), false, true), (std::vector<std::string>{"1:s1t1", "1:t2"}));
    EXPECT_EQ(terms(SizeSpec::exactly(3), true, true), (std::vector<std::string>{"1:s1t2", "1:t3"}));
    EXPECT_EQ(terms(SizeSpec::exactly(4), true, true),
              (std::vector<std::string>{"1/2:s1s1t2", "1/2:s2t2", "1:s1t3", "1:t4"}));
}

TEST(Grammar, TransferRuleForSetOfTwo) {
    // Set_2(A) = ½A(z)² + ½A(z²) with A = z + z²
    SeriesMap env{{"A", Series::from_integers(6, std::vector<int>{0, 1, 1})}};
    Series s = ogf_of(*ex::set(SizeSpec::exactly(2), ex::ref("A")), env, 6);
    EXPECT_EQ(s, Series::from_integers(6, std::vector<int>{0, 0, 1, 1, 1}));
}

TEST(Grammar, SymmetricPointedPairIsPointedAtSquare) {
    // SetSCp_2 ⊛ A = z² A'(z²)
    SeriesMap env{{"A", Series::from_integers(8, std::vector<int>{0, 1, 3})}};
    Series s = ogf_of(*ex::set_scp(SizeSpec::exactly(2), ex::ref("A")), env, 8);
    EXPECT_EQ(s, Series::from_integers(8, std::vector<int>{0, 0, 1, 0, 6}));
}

TEST(Grammar, PointingIsMechanical) {
    ExprPtr p = point(ex::prod({ex::atom(), ex::ref("S")}));
    EXPECT_EQ(to_string(*p), to_string(*ex::uni({ex::prod({ex::patom(), ex::ref("S")}),
                                                 ex::prod({ex::atom(), ex::ref(pointed_name("S"))})})));
}

TEST(Grammar, UnresolvedReferenceIsAnError) {
    EXPECT_THROW(ClassSystem::parse("A = Z * B").validate(), grammar_error);
}

TEST(Grammar, PlainSetOfPointedChildIsAnError) {
    EXPECT_THROW(ClassSystem::parse("pointed P = Zp\nA = Set(P)").validate(), grammar_error);
}

TEST(Grammar, SyntaxErrors) {
    EXPECT_THROW(ClassSystem::parse("A = Z +"), grammar_error);
    EXPECT_THROW(ClassSystem::parse("A = Set{2(Z)"), grammar_error);
}

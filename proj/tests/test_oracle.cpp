#include "cyclept/enumerator.hpp"
#include "cyclept/oracle.hpp"

#include <gtest/gtest.h>

using namespace cyclept;

TEST(Oracle, EvaluatesPolynomial) {
    PrecisionGuard g(30);
    Oracle o({0, 1, 2});  // z + 2z²
    EXPECT_NEAR(static_cast<double>(o.evaluate(Real("0.5"))), 1.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(o.evaluate_pointed(Real("0.5"))), 1.5, 1e-15);
    EXPECT_NEAR(static_cast<double>(o.evaluate_derivative(Real("0.5"))), 3.0, 1e-15);
}

TEST(Oracle, MonotoneInZ) {
    PrecisionGuard g(30);
    Oracle o = Oracle::from_series(enumerate_pointed(catalog(ClassId::dh), 200));
    Real prev = 0;
    for (double z = 0.01; z < 0.137; z += 0.01) {
        Real v = o.evaluate(Real(z));
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Oracle, ExpectedSizeOfTwoThreeTrees) {
    PrecisionGuard g(30);
    Series t = enumerate_dissymmetry(catalog(ClassId::two_three_trees), 200);
    Oracle o = Oracle::from_series(t);
    EXPECT_NEAR(static_cast<double>(expected_size(o, Real("0.01"))), 2.000, 0.0005);
    EXPECT_NEAR(static_cast<double>(expected_size(o, Real("0.1"))), 2.023, 0.0005);
}

TEST(Oracle, DombSykesOnLinearSequence) {
    std::vector<mpz_class> a(2001);
    for (int n = 0; n <= 2000; ++n) a[n] = n;
    EXPECT_NEAR(static_cast<double>(domb_sykes(a, 2000).rho), 0.999999999966895, 1e-9);
    EXPECT_NEAR(static_cast<double>(ratio_estimate(a, 2000).rho), 0.9995, 1e-4);
    EXPECT_NEAR(static_cast<double>(root_estimate(a, 2000).rho), 0.996207, 1e-6);
}

TEST(Oracle, RejectsNegativeZ) {
    Oracle o({0, 1});
    EXPECT_THROW(o.evaluate(Real(-0.5)), precondition_error);
}

#pragma once

#include "cyclept/series.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace cyclept {

using Real = boost::multiprecision::mpfr_float;

// Sets the default working precision (decimal digits) for the lifetime of the guard.
class PrecisionGuard {
public:
    explicit PrecisionGuard(unsigned digits) : old_(Real::default_precision()) { Real::default_precision(digits); }
    ~PrecisionGuard() { Real::default_precision(old_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned old_;
};

Real to_real(const mpz_class& z);
Real to_real(const mpq_class& q);
Real parse_real(const std::string& s);

class Oracle {
public:
    Oracle() = default;
    explicit Oracle(std::vector<mpz_class> coeffs, unsigned digits = 30);
    static Oracle from_series(const Series& s, unsigned digits = 30);

    int depth() const { return static_cast<int>(coeffs_.size()) - 1; }
    unsigned digits() const { return digits_; }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }

    Real evaluate(const Real& z) const;           // sum A_i z^i
    Real evaluate_pointed(const Real& z) const;   // z A'(z)
    Real evaluate_derivative(const Real& z) const;

private:
    void check(const Real& z) const;
    std::vector<mpz_class> coeffs_;
    std::vector<Real> rc_;   // coefficients at working precision
    std::vector<Real> rd_;   // n * A_n
    unsigned digits_ = 30;
};

// z A'(z) / A(z)
Real expected_size(const Oracle& o, const Real& z);

// (A^•(z) + A^{•-•}(z)) / A(z)
Real rejection_cost(const Oracle& vertex, const Oracle& edge, const Oracle& plain, const Real& z);

struct SingularityEstimate {
    Real rho;
    std::string method;
    int from = 0, to = 0;        // fit range
    Real intercept = 0, slope = 0, r_squared = 0;
};

// A_{N-1}/A_N
SingularityEstimate ratio_estimate(const std::vector<mpz_class>& a, int n, unsigned digits = 30);
// A_N^{-1/N}
SingularityEstimate root_estimate(const std::vector<mpz_class>& a, int n, unsigned digits = 30);
// Least-squares line through (1/n, A_{n-1}/A_n) for N/2 <= n <= N; the
// intercept at 1/n = 0 estimates rho.
SingularityEstimate domb_sykes(const std::vector<mpz_class>& a, int n, unsigned digits = 30);

}  // namespace cyclept

#include "cyclept/oracle.hpp"

namespace cyclept {

Real to_real(const mpz_class& z) {
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

Real to_real(const mpq_class& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real parse_real(const std::string& s) {
    try {
        return Real(s);
    } catch (const std::exception&) {
        throw precondition_error("not a real number: '" + s + "'");
    }
}

Oracle::Oracle(std::vector<mpz_class> coeffs, unsigned digits) : coeffs_(std::move(coeffs)), digits_(digits) {
    if (coeffs_.empty()) throw precondition_error("oracle needs at least one coefficient");
    PrecisionGuard g(digits_);
    rc_.reserve(coeffs_.size());
    rd_.reserve(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        rc_.push_back(to_real(coeffs_[i]));
        rd_.push_back(to_real(mpz_class(coeffs_[i] * static_cast<unsigned long>(i))));
    }
}

Oracle Oracle::from_series(const Series& s, unsigned digits) { return Oracle(s.integers(), digits); }

void Oracle::check(const Real& z) const {
    if (!(z >= 0 && z < 1)) throw precondition_error("oracle argument must lie in [0, 1)");
}

namespace {
Real horner(const std::vector<Real>& c, const Real& z) {
    Real r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
    return r;
}
}  // namespace

Real Oracle::evaluate(const Real& z) const {
    check(z);
    PrecisionGuard g(digits_);
    return horner(rc_, Real(z, digits_));
}

Real Oracle::evaluate_pointed(const Real& z) const {
    check(z);
    PrecisionGuard g(digits_);
    return horner(rd_, Real(z, digits_));
}

Real Oracle::evaluate_derivative(const Real& z) const {
    check(z);
    PrecisionGuard g(digits_);
    Real r = 0;
    for (std::size_t i = rd_.size(); i-- > 1;) r = r * z + rd_[i];
    return r;
}

Real expected_size(const Oracle& o, const Real& z) {
    Real a = o.evaluate(z);
    if (a == 0) throw domain_error("expected_size: A(z) = 0");
    PrecisionGuard g(o.digits());
    return o.evaluate_pointed(z) / a;
}

Real rejection_cost(const Oracle& vertex, const Oracle& edge, const Oracle& plain, const Real& z) {
    Real a = plain.evaluate(z);
    if (a == 0) throw domain_error("rejection_cost: A(z) = 0");
    PrecisionGuard g(plain.digits());
    return (vertex.evaluate(z) + edge.evaluate(z)) / a;
}

namespace {
void check_range(const std::vector<mpz_class>& a, int n, int from) {
    if (n < 2 || n >= static_cast<int>(a.size())) throw precondition_error("singularity estimate: bad depth");
    for (int i = from; i <= n; ++i)
        if (sgn(a[i]) <= 0)
            throw domain_error("singularity estimate: coefficient " + std::to_string(i) + " is not positive");
}
}  // namespace

SingularityEstimate ratio_estimate(const std::vector<mpz_class>& a, int n, unsigned digits) {
    check_range(a, n, n - 1);
    PrecisionGuard g(digits);
    SingularityEstimate e;
    e.method = "ratio";
    e.from = n - 1;
    e.to = n;
    e.rho = to_real(a[n - 1]) / to_real(a[n]);
    return e;
}

SingularityEstimate root_estimate(const std::vector<mpz_class>& a, int n, unsigned digits) {
    check_range(a, n, n);
    PrecisionGuard g(digits);
    SingularityEstimate e;
    e.method = "root";
    e.from = e.to = n;
    e.rho = pow(to_real(a[n]), Real(-1) / n);
    return e;
}

SingularityEstimate domb_sykes(const std::vector<mpz_class>& a, int n, unsigned digits) {
    const int from = std::max(2, n / 2);
    check_range(a, n, from - 1);
    PrecisionGuard g(digits);
    std::vector<Real> xs, ys;
    for (int i = from; i <= n; ++i) {
        xs.push_back(Real(1) / i);
        ys.push_back(to_real(a[i - 1]) / to_real(a[i]));
    }
    const Real m = xs.size();
    Real mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    Real sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    SingularityEstimate e;
    e.method = "domb-sykes";
    e.from = from;
    e.to = n;
    e.slope = sxy / sxx;
    e.intercept = my - e.slope * mx;
    e.r_squared = syy == 0 ? Real(1) : (sxy * sxy) / (sxx * syy);
    e.rho = e.intercept;
    return e;
}

}  // namespace cyclept

#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclept {

struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct ill_founded_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated power series sum_{n<=N} c_n z^n with exact rational coefficients.
class Series {
public:
    Series() : c_(1) {}
    explicit Series(int order) : c_(check_order(order) + 1) {}
    Series(int order, std::vector<mpq_class> coeffs);

    static Series zero(int order) { return Series(order); }
    static Series one(int order);
    static Series monomial(int order, int k, const mpq_class& a = 1);
    template <class Int>
    static Series from_integers(int order, const std::vector<Int>& v) {
        Series s(order);
        for (std::size_t i = 0; i < v.size() && i <= static_cast<std::size_t>(order); ++i)
            s.c_[i] = mpq_class(v[i]);
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const mpq_class& operator[](int n) const { return c_.at(n); }
    mpq_class& operator[](int n) { return c_.at(n); }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    bool is_zero() const;
    bool has_integer_coeffs() const;
    int valuation() const;  // order()+1 for the zero series
    std::vector<mpz_class> integers() const;  // throws integrity_error on a fraction

    Series truncate(int order) const;

    friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }

private:
    static int check_order(int order) {
        if (order < 0) throw precondition_error("series order must be >= 0");
        return order;
    }
    std::vector<mpq_class> c_;
};

Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series scale(const Series& a, const mpq_class& k);
Series mul(const Series& a, const Series& b);
Series pleth(const Series& a, int i);
Series derive(const Series& a);
Series integrate(const Series& a);
Series shift(const Series& a, int k);   // z^k * a
Series z_derive(const Series& a);      // z * a'
Series exp_series(const Series& a);
Series log_series(const Series& a);    // log(a) with a_0 == 1
Series inverse(const Series& a);       // 1/a with a_0 != 0

inline Series operator+(const Series& a, const Series& b) { return add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return sub(a, b); }
inline Series operator*(const Series& a, const Series& b) { return mul(a, b); }

using SeriesMap = std::map<std::string, Series>;
using SystemRhs = std::function<SeriesMap(const SeriesMap&)>;

struct SolveStats {
    int iterations = 0;
};

// Least fixed point by Kleene iteration from the zero series. The default
// iteration cap is (N+1)*(#classes)+1.
SeriesMap solve_system(const std::vector<std::string>& names, const SystemRhs& rhs, int order,
                       int max_iterations = -1, SolveStats* stats = nullptr);

std::string coeff_string(const mpq_class& q);
std::string to_json(const Series& s);
std::string to_csv(const Series& s);

}  // namespace cyclept

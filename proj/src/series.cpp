#include "cyclept/series.hpp"

#include <algorithm>
#include <sstream>

namespace cyclept {

namespace {

void same_order(const Series& a, const Series& b, const char* op) {
    if (a.order() != b.order())
        throw precondition_error(std::string(op) + ": order mismatch (" + std::to_string(a.order()) +
                                 " vs " + std::to_string(b.order()) + ")");
}

}  // namespace

Series::Series(int order, std::vector<mpq_class> coeffs) : c_(check_order(order) + 1) {
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = std::move(coeffs[i]);
}

Series Series::one(int order) { return monomial(order, 0, 1); }

Series Series::monomial(int order, int k, const mpq_class& a) {
    Series s(order);
    if (k >= 0 && k <= order) s.c_[k] = a;
    return s;
}

bool Series::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return sgn(q) == 0; });
}

bool Series::has_integer_coeffs() const {
    return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return q.get_den() == 1; });
}

int Series::valuation() const {
    for (int i = 0; i <= order(); ++i)
        if (sgn(c_[i]) != 0) return i;
    return order() + 1;
}

std::vector<mpz_class> Series::integers() const {
    std::vector<mpz_class> out;
    out.reserve(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].get_den() != 1)
            throw integrity_error("coefficient " + std::to_string(i) + " is not an integer: " +
                                  c_[i].get_str());
        out.push_back(c_[i].get_num());
    }
    return out;
}

Series Series::truncate(int order) const {
    Series s(order);
    for (int i = 0; i <= std::min(order, this->order()); ++i) s.c_[i] = c_[i];
    return s;
}

Series add(const Series& a, const Series& b) {
    same_order(a, b, "add");
    Series r(a.order());
    for (int i = 0; i <= a.order(); ++i) r[i] = a[i] + b[i];
    return r;
}

Series sub(const Series& a, const Series& b) {
    same_order(a, b, "sub");
    Series r(a.order());
    for (int i = 0; i <= a.order(); ++i) r[i] = a[i] - b[i];
    return r;
}

Series scale(const Series& a, const mpq_class& k) {
    Series r(a.order());
    for (int i = 0; i <= a.order(); ++i) r[i] = a[i] * k;
    return r;
}

Series mul(const Series& a, const Series& b) {
    same_order(a, b, "mul");
    const int n = a.order();
    Series r(n);
    std::vector<int> nzb;
    for (int j = 0; j <= n; ++j)
        if (sgn(b[j]) != 0) nzb.push_back(j);
    for (int i = 0; i <= n; ++i) {
        if (sgn(a[i]) == 0) continue;
        for (int j : nzb) {
            if (i + j > n) break;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

Series pleth(const Series& a, int i) {
    if (i < 1) throw precondition_error("pleth: exponent must be >= 1");
    Series r(a.order());
    for (int n = 0; n * i <= a.order(); ++n) r[n * i] = a[n];
    return r;
}

Series derive(const Series& a) {
    Series r(a.order());
    for (int n = 1; n <= a.order(); ++n) r[n - 1] = a[n] * n;
    return r;
}

Series integrate(const Series& a) {
    Series r(a.order());
    for (int n = 0; n < a.order(); ++n) r[n + 1] = a[n] / (n + 1);
    return r;
}

Series shift(const Series& a, int k) {
    Series r(a.order());
    for (int n = 0; n <= a.order(); ++n)
        if (n + k >= 0 && n + k <= a.order()) r[n + k] = a[n];
    return r;
}

Series z_derive(const Series& a) {
    Series r(a.order());
    for (int n = 1; n <= a.order(); ++n) r[n] = a[n] * n;
    return r;
}

Series exp_series(const Series& a) {
    if (sgn(a[0]) != 0) throw domain_error("exp_series: constant term must be zero");
    const int n = a.order();
    Series e(n);
    e[0] = 1;
    for (int m = 1; m <= n; ++m) {
        mpq_class acc = 0;
        for (int k = 1; k <= m; ++k)
            if (sgn(a[k]) != 0) acc += a[k] * k * e[m - k];
        e[m] = acc / m;
    }
    return e;
}

Series log_series(const Series& a) {
    if (a[0] != 1) throw domain_error("log_series: constant term must be one");
    // a * L' = a'
    const int n = a.order();
    Series d = derive(a);
    Series l(n);
    std::vector<mpq_class> lp(n + 1);
    for (int m = 0; m < n; ++m) {
        mpq_class acc = d[m];
        for (int k = 1; k <= m; ++k) acc -= a[k] * lp[m - k];
        lp[m] = acc;
        l[m + 1] = acc / (m + 1);
    }
    return l;
}

Series inverse(const Series& a) {
    if (sgn(a[0]) == 0) throw domain_error("inverse: constant term must be nonzero");
    const int n = a.order();
    Series r(n);
    r[0] = 1 / a[0];
    for (int m = 1; m <= n; ++m) {
        mpq_class acc = 0;
        for (int k = 1; k <= m; ++k) acc += a[k] * r[m - k];
        r[m] = -acc / a[0];
    }
    return r;
}

SeriesMap solve_system(const std::vector<std::string>& names, const SystemRhs& rhs, int order,
                       int max_iterations, SolveStats* stats) {
    if (max_iterations < 0) max_iterations = (order + 1) * static_cast<int>(names.size()) + 1;
    SeriesMap cur;
    for (const auto& n : names) cur.emplace(n, Series(order));
    for (int it = 1; it <= max_iterations; ++it) {
        SeriesMap next = rhs(cur);
        bool stable = true;
        for (const auto& n : names) {
            auto f = next.find(n);
            if (f == next.end()) throw precondition_error("solve_system: rhs omitted class " + n);
            if (f->second.order() != order)
                throw precondition_error("solve_system: rhs changed the order of " + n);
            if (!(f->second == cur.at(n))) stable = false;
        }
        if (stable) {
            if (stats) stats->iterations = it;
            return cur;
        }
        for (const auto& n : names) cur[n] = std::move(next.at(n));
    }
    throw ill_founded_error("solve_system: no fixed point after " + std::to_string(max_iterations) +
                            " iterations");
}

std::string coeff_string(const mpq_class& q) { return q.get_str(); }

std::string to_json(const Series& s) {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i <= s.order(); ++i) {
        if (i) os << ',';
        if (s[i].get_den() == 1)
            os << s[i].get_num().get_str();
        else
            os << '"' << s[i].get_str() << '"';
    }
    os << ']';
    return os.str();
}

std::string to_csv(const Series& s) {
    std::ostringstream os;
    os << "index,value\n";
    for (int i = 0; i <= s.order(); ++i) os << i << ',' << s[i].get_str() << '\n';
    return os.str();
}

}  // namespace cyclept

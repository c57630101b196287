#include "cyclept/randgen.hpp"

#include <cmath>
#include <numeric>

namespace cyclept {

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw precondition_error("uniform_int: empty range");
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
}

bool bernoulli(double p, Rng& rng) {
    if (!(p >= 0 && p <= 1)) throw precondition_error("bernoulli: p outside [0,1]");
    return rng.uniform() < p;
}

long poisson(double lambda, Rng& rng) {
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw precondition_error("poisson: lambda must be >= 0");
    if (lambda == 0) return 0;
    if (lambda > 30) return std::poisson_distribution<long>(lambda)(rng.engine());
    double p = std::exp(-lambda), f = p, u = rng.uniform();
    long x = 0;
    while (u >= f && p > 0) {
        ++x;
        p *= lambda / x;
        f += p;
    }
    return x;
}

long poisson_geq(double lambda, long m, Rng& rng) {
    if (m <= 0) return poisson(lambda, rng);
    if (!(lambda > 0) || !std::isfinite(lambda)) throw precondition_error("poisson_geq: lambda must be > 0");
    if (lambda > 30 && m < lambda) {
        for (;;) {
            long x = poisson(lambda, rng);
            if (x >= m) return x;
        }
    }
    // relative pmf from m: q_m = 1, q_{j+1} = q_j * lambda / (j+1)
    double tail = 0, q = 1;
    for (long j = m;; ++j) {
        tail += q;
        q *= lambda / (j + 1);
        if (q < 1e-18 * tail && j > lambda) break;
    }
    double u = rng.uniform() * tail;
    q = 1;
    long j = m;
    for (;;) {
        if (u < q) return j;
        u -= q;
        q *= lambda / (j + 1);
        ++j;
        if (q == 0) return j;
    }
}

std::size_t draw_index(const std::vector<double>& w, Rng& rng) {
    double total = 0;
    for (double x : w) {
        if (x < 0 || !std::isfinite(x)) throw precondition_error("draw_index: weights must be finite and >= 0");
        total += x;
    }
    if (!(total > 0)) throw domain_error("draw_index: all weights are zero");
    double u = rng.uniform() * total;
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0) continue;
        last = i;
        if (u < w[i]) return i;
        u -= w[i];
    }
    return last;
}

namespace {

int top(const CycleWeights& s) { return static_cast<int>(s.size()) - 1; }

// suffix[k] = sum_{i>k} s_i / i
std::vector<double> suffix_sums(const CycleWeights& s) {
    const int n = std::max(0, top(s));
    std::vector<double> r(n + 1, 0.0);
    for (int k = n - 1; k >= 0; --k) r[k] = r[k + 1] + s[k + 1] / (k + 1);
    return r;
}

// P[K = k] for k = 0..I (unnormalised relative to nothing: they sum to 1).
std::vector<double> max_index_pmf(const CycleWeights& s) {
    auto r = suffix_sums(s);
    std::vector<double> w(r.size());
    w[0] = std::exp(-r[0]);
    for (std::size_t k = 1; k < r.size(); ++k) w[k] = std::exp(-r[k]) * -std::expm1(-s[k] / static_cast<double>(k));
    return w;
}

double expm1_minus_x(double x) {
    if (std::fabs(x) < 1e-3) return x * x / 2 * (1 + x / 3 * (1 + x / 4 * (1 + x / 5)));
    return std::expm1(x) - x;
}

void fill_poissons(PartitionDraw& d, const CycleWeights& s, int k_max, long last_min, Rng& rng) {
    d.counts.assign(std::max(k_max, 0) + 1, 0);
    for (int k = 1; k < k_max; ++k) d.counts[k] = static_cast<int>(poisson(s[k] / k, rng));
    if (k_max >= 1) d.counts[k_max] = static_cast<int>(poisson_geq(s[k_max] / k_max, last_min, rng));
}

PartitionDraw draw_plain_unbounded(const CycleWeights& s, Rng& rng) {
    PartitionDraw d;
    int k = max_index(s, rng, 0);
    fill_poissons(d, s, k, 1, rng);
    return d;
}

// Set_{>=1}: K conditioned on K >= 1.
PartitionDraw draw_geq1(const CycleWeights& s, Rng& rng) {
    PartitionDraw d;
    int k = max_index(s, rng, 1);
    fill_poissons(d, s, k, 1, rng);
    return d;
}

// Set_{>=2}: joint law of (J, k_J) with the single-element outcome (J=1, k_J=1) removed.
PartitionDraw draw_geq2(const CycleWeights& s, Rng& rng) {
    if (top(s) < 1) throw domain_error("Set>=2: empty weight sequence");
    auto w = max_index_pmf(s);
    auto r = suffix_sums(s);
    w[0] = 0;
    w[1] = std::exp(-r[1]) * std::exp(-s[1]) * expm1_minus_x(s[1]);
    int k = static_cast<int>(draw_index(w, rng));
    PartitionDraw d;
    fill_poissons(d, s, k, k == 1 ? 2 : 1, rng);
    return d;
}

std::vector<double> newton_sets(const CycleWeights& s, int rmax) {
    std::vector<double> z(rmax + 1, 0.0);
    z[0] = 1;
    for (int r = 1; r <= rmax; ++r) {
        double acc = 0;
        for (int i = 1; i <= r && i <= top(s); ++i) acc += s[i] * z[r - i];
        z[r] = acc / r;
    }
    return z;
}

}  // namespace

int PartitionDraw::size() const {
    int n = ell;
    for (std::size_t i = 1; i < counts.size(); ++i) n += static_cast<int>(i) * counts[i];
    return n;
}

int max_index(const CycleWeights& s, Rng& rng, int min_k) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] >= 0) || !std::isfinite(s[i])) throw precondition_error("max_index: weights must be finite and >= 0");
    auto w = max_index_pmf(s);
    for (int k = 0; k < min_k && k < static_cast<int>(w.size()); ++k) w[k] = 0;
    return static_cast<int>(draw_index(w, rng));
}

int root_cycle_size(const CycleWeights& t, int min_ell, Rng& rng) {
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t l = std::max(min_ell, 1); l < t.size(); ++l) w[l] = t[l];
    return static_cast<int>(draw_index(w, rng));
}

double set_tail_probability(const CycleWeights& s, int j) {
    if (j <= 0) return 1;
    double lam = 0, rest = 0;
    for (int i = 1; i <= top(s); ++i) {
        lam += s[i] / i;
        if (i >= 2) rest += s[i] / i;
    }
    if (j == 1) return -std::expm1(-lam);
    if (j == 2) return std::exp(-lam) * (expm1_minus_x(lam) + rest);
    if (lam >= 1) {
        auto z = newton_sets(s, j - 1);
        double below = 0;
        for (int r = 0; r < j; ++r) below += z[r];
        return std::max(0.0, 1 - std::exp(-lam) * below);
    }
    const int rmax = std::max(4 * j, 64);
    auto z = newton_sets(s, rmax);
    double acc = 0;
    for (int r = j; r <= rmax; ++r) acc += z[r];
    return std::exp(-lam) * acc;
}

PartitionDraw draw_monomial(const std::vector<CycleTerm>& terms, const CycleWeights& s, const CycleWeights& t,
                            Rng& rng) {
    std::vector<double> w;
    w.reserve(terms.size());
    for (const auto& term : terms) {
        double x = term.coeff.get_d();
        for (std::size_t i = 1; i < term.counts.size(); ++i)
            if (term.counts[i]) x *= std::pow(static_cast<int>(i) <= top(s) ? s[i] : 0.0, term.counts[i]);
        if (term.ell) x *= term.ell <= top(t) ? t[term.ell] : 0.0;
        w.push_back(x);
    }
    const CycleTerm& pick = terms.at(draw_index(w, rng));
    PartitionDraw d;
    d.ell = pick.ell;
    d.counts = pick.counts;
    return d;
}

PartitionDraw draw_set(const SizeSpec& spec, const CycleWeights& s, Rng& rng, const SetOptions& opt) {
    if (spec.bounded()) return draw_monomial(cycle_index_terms(spec, false, false), s, {}, rng);
    const int m = spec.min_size();
    if (opt.rejection || m >= 3) {
        for (;;) {
            PartitionDraw d = m >= 3 && !opt.rejection ? draw_geq2(s, rng) : draw_plain_unbounded(s, rng);
            if (d.size() >= m) return d;
        }
    }
    if (m == 0) return draw_plain_unbounded(s, rng);
    if (m == 1) return draw_geq1(s, rng);
    return draw_geq2(s, rng);
}

PartitionDraw draw_pointed_set(const SizeSpec& spec, const CycleWeights& s, const CycleWeights& t, bool symmetric,
                               Rng& rng, const SetOptions& opt) {
    const int lmin = symmetric ? 2 : 1;
    if (spec.bounded()) return draw_monomial(cycle_index_terms(spec, symmetric, true), s, t, rng);
    const int m = spec.min_size();
    if (opt.rejection) {
        for (;;) {
            PartitionDraw d = draw_plain_unbounded(s, rng);
            d.ell = root_cycle_size(t, lmin, rng);
            if (d.size() >= m) return d;
        }
    }
    // sum_l t_l * Set_{>= m-l}: one branch per l < m, plus the aggregated l >= m branch
    std::vector<double> w;
    for (int l = lmin; l < m; ++l) w.push_back(l <= top(t) ? t[l] * set_tail_probability(s, m - l) : 0.0);
    double rest = 0;
    for (int l = std::max(m, lmin); l <= top(t); ++l) rest += t[l];
    w.push_back(rest);
    std::size_t b = draw_index(w, rng);
    if (b + 1 < w.size()) {
        const int l = lmin + static_cast<int>(b);
        PartitionDraw d = draw_set(SizeSpec::at_least(m - l), s, rng, opt);
        d.ell = l;
        return d;
    }
    PartitionDraw d = draw_plain_unbounded(s, rng);
    d.ell = root_cycle_size(t, std::max(m, lmin), rng);
    return d;
}

CycleWeights cycle_weights(const Oracle& a, const Real& z, bool pointed, int max_terms) {
    PrecisionGuard g(a.digits());
    CycleWeights w{0.0};
    Real zi = z;
    for (int i = 1; i <= max_terms; ++i) {
        double v = static_cast<double>(pointed ? a.evaluate_pointed(zi) : a.evaluate(zi));
        w.push_back(v);
        if (i >= 2 && v < 1e-30) break;
        zi *= z;
    }
    return w;
}

namespace {
PartitionDraw bounded_partition(const Oracle& a, int k, const Real& z, Rng& rng, bool pointed, bool symmetric) {
    auto terms = cycle_index_terms(SizeSpec::exactly(k), symmetric, pointed, std::max(16, k));
    CycleWeights s = cycle_weights(a, z, false, k);
    CycleWeights t = pointed ? cycle_weights(a, z, true, k) : CycleWeights{};
    return draw_monomial(terms, s, t, rng);
}
}  // namespace

PartitionDraw partition(const Oracle& a, int k, const Real& z, Rng& rng) {
    return bounded_partition(a, k, z, rng, false, false);
}
PartitionDraw marked_partition(const Oracle& a, int k, const Real& z, Rng& rng) {
    return bounded_partition(a, k, z, rng, true, false);
}
PartitionDraw marked_symm_partition(const Oracle& a, int k, const Real& z, Rng& rng) {
    return bounded_partition(a, k, z, rng, true, true);
}

std::vector<int> compose_cycles(const std::vector<std::vector<int>>& cycles) {
    std::vector<int> out;
    if (cycles.empty()) return out;
    const std::size_t len = cycles[0].size();
    for (const auto& c : cycles)
        if (c.size() != len) throw precondition_error("compose_cycles: cycles differ in length");
    for (std::size_t j = 0; j < len; ++j)
        for (const auto& c : cycles) out.push_back(c[j]);
    return out;
}

}  // namespace cyclept

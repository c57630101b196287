#pragma once

#include "cyclept/grammar.hpp"
#include "cyclept/oracle.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace cyclept {

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}
    // 53-bit uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t uniform_int(std::uint64_t n);
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

bool bernoulli(double p, Rng& rng);
long poisson(double lambda, Rng& rng);
// Poisson conditioned on being >= m, by inversion on the shifted pmf.
long poisson_geq(double lambda, long m, Rng& rng);
inline long poisson_geq1(double lambda, Rng& rng) { return poisson_geq(lambda, 1, rng); }

// Index drawn with probability w_i / sum w (weights need not be normalised).
std::size_t draw_index(const std::vector<double>& w, Rng& rng);

// Weights of an unbounded set: s[i] = A(z^i) for i >= 1 (s[0] unused), truncated
// once s_i is negligible.
using CycleWeights = std::vector<double>;

// Largest cycle length K in {0, ..., I}: P[K <= k] = prod_{i<=k} e^{s_i/i} / Z.
// K = 0 is the empty set. min_k conditions on K >= min_k.
int max_index(const CycleWeights& s, Rng& rng, int min_k = 0);

// Marked cycle length l >= min_ell with P[l] proportional to t_l.
int root_cycle_size(const CycleWeights& t, int min_ell, Rng& rng);

struct PartitionDraw {
    int ell = 0;               // marked cycle length (0 if unpointed)
    std::vector<int> counts;   // counts[i] = number of unmarked cycles of length i
    int size() const;
};

// Probability that an unbounded Pólya set with weights s has at least j elements.
double set_tail_probability(const CycleWeights& s, int j);

struct SetOptions {
    bool rejection = false;  // rejection loop instead of the joint (J, k_J) scheme
};

// Cycle type of a Pólya-Boltzmann draw from Set_spec(A) given s_i = A(z^i).
PartitionDraw draw_set(const SizeSpec& spec, const CycleWeights& s, Rng& rng, const SetOptions& opt = {});

// Cycle type of a draw from SetCp_spec ⊛ A (symmetric: SetSCp) given s_i = A(z^i)
// and t_l = z^l A'(z^l).
PartitionDraw draw_pointed_set(const SizeSpec& spec, const CycleWeights& s, const CycleWeights& t,
                               bool symmetric, Rng& rng, const SetOptions& opt = {});

// Draw among the monomials of a bounded cycle index sum.
PartitionDraw draw_monomial(const std::vector<CycleTerm>& terms, const CycleWeights& s, const CycleWeights& t,
                            Rng& rng);

// Oracle-driven forms of the bounded partition generators.
PartitionDraw partition(const Oracle& a, int k, const Real& z, Rng& rng);
PartitionDraw marked_partition(const Oracle& a, int k, const Real& z, Rng& rng);
PartitionDraw marked_symm_partition(const Oracle& a, int k, const Real& z, Rng& rng);

// s_i = A(z^i), t_l = z^l A'(z^l), truncated when negligible or past max_terms.
CycleWeights cycle_weights(const Oracle& a, const Real& z, bool pointed, int max_terms = 4096);

// Set_spec(A): draw the cycle type, then for every unmarked cycle of length i draw
// one element at z^i and add i copies of it.
template <class DrawChild>
auto set_sampler(const SizeSpec& spec, const CycleWeights& s, Rng& rng, DrawChild&& draw_child,
                 const SetOptions& opt = {}) {
    using T = decltype(draw_child(1));
    PartitionDraw d = draw_set(spec, s, rng, opt);
    std::vector<T> out;
    for (int i = 1; i < static_cast<int>(d.counts.size()); ++i)
        for (int j = 0; j < d.counts[i]; ++j) {
            T g = draw_child(i);
            for (int c = 0; c < i; ++c) out.push_back(g);
        }
    return out;
}

// Composition c_1 ∘ ... ∘ c_l of equal-length cycles: (v11, v21, ..., vl1, v12, ...).
std::vector<int> compose_cycles(const std::vector<std::vector<int>>& cycles);

// SetCp_spec ⊛ A (SetSCp when symmetric). draw_child(i) returns an element drawn at
// z^i; draw_pointed(l) returns a pointed element (value, cycle) drawn at z^l; and
// copy(value, cycle) returns an isomorphic copy with fresh atom ids.
template <class DrawChild, class DrawPointed, class Copy>
auto pointed_set_sampler(const SizeSpec& spec, const CycleWeights& s, const CycleWeights& t, bool symmetric,
                         Rng& rng, DrawChild&& draw_child, DrawPointed&& draw_pointed, Copy&& copy,
                         const SetOptions& opt = {}) {
    using T = decltype(draw_child(1));
    PartitionDraw d = draw_pointed_set(spec, s, t, symmetric, rng, opt);
    std::vector<T> out;
    for (int i = 1; i < static_cast<int>(d.counts.size()); ++i)
        for (int j = 0; j < d.counts[i]; ++j) {
            T g = draw_child(i);
            for (int c = 0; c < i; ++c) out.push_back(g);
        }
    std::vector<int> cycle;
    if (d.ell > 0) {
        auto first = draw_pointed(d.ell);
        std::vector<std::vector<int>> cycles{first.second};
        out.push_back(first.first);
        for (int c = 1; c < d.ell; ++c) {
            auto cp = copy(first.first, first.second);
            out.push_back(cp.first);
            cycles.push_back(cp.second);
        }
        cycle = compose_cycles(cycles);
    }
    return std::make_pair(std::move(out), std::move(cycle));
}

}  // namespace cyclept

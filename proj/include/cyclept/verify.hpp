#pragma once

#include "cyclept/samplers.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cyclept {

struct LineFit {
    double slope = 0, intercept = 0, r_squared = 0;
    long n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Pearson goodness of fit.
struct ChiSquared {
    std::vector<long> observed;
    std::vector<double> expected_p;
    long draws = 0;
    double statistic = 0;
    int df = 0;
    double cutoff = 0;  // 5% critical value
    bool pass() const { return statistic < cutoff; }
};

// sum (O_i - N p_i)^2 / (N p_i)
double chi_squared(const std::vector<long>& observed, const std::vector<double>& expected_p, long draws);
// 43.7 at df = 29 (the published table value); the chi-squared 0.95 quantile otherwise.
double chi_squared_cutoff(int df);
// Drops buckets with p_i = 0 (they must be empty) and sets df = buckets kept - 1.
ChiSquared chi_squared_test(const std::vector<long>& observed, const std::vector<double>& expected_p);

// P[size = n] = A°_n z^n / A°(z) for n = 1..buckets-1; the last bucket takes sizes >= buckets.
std::vector<double> size_bucket_probabilities(const Series& pointed, const Real& z, int buckets);
ChiSquared size_chi_squared(Sampler& s, const Series& pointed, long draws, int buckets, Rng& rng);

// Canonical adjacency string (minimum over orderings that respect a degree refinement).
std::string graph_canonical_form(const Graph& g);
// Connected graphs on n vertices up to isomorphism.
std::vector<Graph> connected_graphs(int n);
// Witness tree (adjacency list; vertices 0..n-1 are the graph's vertices) in which
// two vertices are adjacent iff their tree distance is at most 3.
std::optional<std::vector<std::vector<int>>> three_leaf_power_witness(const Graph& g);

// AHU code rooted at the center.
std::string tree_canonical_form(const Tree& t);
std::string structure_canonical_form(const Structure& s);
// Unlabeled trees with every degree in {1,3,4}, counted by vertices 0..nmax.
std::vector<long> count_23_trees(int nmax);
// Independent counts: nmax <= 12 for 2-3 trees, <= 7 for DH and 3LP.
std::vector<long> brute_force_count(ClassId id, int nmax);

// True if some automorphism of the graph (0-based adjacency matrix) has the
// given cycle (0-based vertices, in order) as one of its cycles. n <= 9.
bool is_automorphism_cycle(const std::vector<std::vector<bool>>& adj, const std::vector<int>& cycle);
bool cycle_is_automorphic(const PointedStructure& p);

struct StatsRow {
    int size = 0;
    double mean_cliques = 0, mean_stars = 0;
    long count = 0;
};
std::vector<StatsRow> split_tree_stats(const std::vector<SplitTree>& samples);
std::string stats_csv(const std::vector<StatsRow>& rows);

struct BenchRow {
    int size = 0;
    double seconds = 0;
};
std::vector<BenchRow> bench(Sampler& s, long count, Rng& rng);
std::string bench_csv(const std::vector<BenchRow>& rows);

// Draws until every requested size has `per_size` samples (the sampler should abort
// early through SamplerOptions::max_size) and tests that the isomorphism classes of
// each size are equally frequent; one pooled statistic over all (size, class) cells.
struct Uniformity {
    ChiSquared chi;
    std::map<int, std::map<std::string, long>> counts;
    bool complete = true;  // every isomorphism class was observed
    long attempts = 0;
};
Uniformity conditioned_uniformity(Sampler& s, const std::map<int, long>& class_counts, long per_size, Rng& rng,
                                  long max_attempts = 100000000);

}  // namespace cyclept

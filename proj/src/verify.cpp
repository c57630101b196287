#include "cyclept/verify.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace cyclept {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw precondition_error("fit_line: size mismatch");
    LineFit f;
    f.n = static_cast<long>(x.size());
    if (f.n < 2) throw precondition_error("fit_line: need at least two points");
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / f.n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / f.n;
    double sxx = 0, sxy = 0, syy = 0;
    for (long i = 0; i < f.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw precondition_error("fit_line: x is constant");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

double chi_squared(const std::vector<long>& observed, const std::vector<double>& expected_p, long draws) {
    if (observed.size() != expected_p.size()) throw precondition_error("chi_squared: size mismatch");
    double x = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = expected_p[i] * static_cast<double>(draws);
        if (e <= 0) throw precondition_error("chi_squared: bucket " + std::to_string(i) + " has zero probability");
        double d = static_cast<double>(observed[i]) - e;
        x += d * d / e;
    }
    return x;
}

double chi_squared_cutoff(int df) {
    if (df < 1) throw precondition_error("chi_squared_cutoff: df must be >= 1");
    if (df == 29) return 43.7;
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), 0.95);
}

ChiSquared chi_squared_test(const std::vector<long>& observed, const std::vector<double>& expected_p) {
    if (observed.size() != expected_p.size()) throw precondition_error("chi_squared_test: size mismatch");
    ChiSquared r;
    bool impossible = false;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        r.draws += observed[i];
        if (expected_p[i] > 0) {
            r.observed.push_back(observed[i]);
            r.expected_p.push_back(expected_p[i]);
        } else if (observed[i] > 0) {
            impossible = true;
        }
    }
    r.df = static_cast<int>(r.observed.size()) - 1;
    r.cutoff = r.df >= 1 ? chi_squared_cutoff(r.df) : std::numeric_limits<double>::infinity();
    r.statistic = impossible ? std::numeric_limits<double>::infinity() : chi_squared(r.observed, r.expected_p, r.draws);
    return r;
}

std::vector<double> size_bucket_probabilities(const Series& pointed, const Real& z, int buckets) {
    if (buckets < 2) throw precondition_error("need at least two buckets");
    Oracle o = Oracle::from_series(pointed, 40);
    PrecisionGuard guard(40);
    Real total = o.evaluate(z);
    Real rest = total;
    std::vector<double> p(buckets, 0.0);
    Real zn = 1;
    const auto& a = o.coeffs();
    for (int n = 1; n < buckets; ++n) {
        zn *= z;
        if (n >= static_cast<int>(a.size())) continue;
        Real t = to_real(a[n]) * zn;
        rest -= t;
        p[n - 1] = static_cast<double>(Real(t / total));
    }
    p[buckets - 1] = std::max(0.0, static_cast<double>(Real(rest / total)));
    return p;
}

ChiSquared size_chi_squared(Sampler& s, const Series& pointed, long draws, int buckets, Rng& rng) {
    auto p = size_bucket_probabilities(pointed, s.z(), buckets);
    std::vector<long> obs(buckets, 0);
    for (long i = 0; i < draws;) {
        auto x = s.sample_pointed(rng);
        if (!x) continue;
        int n = x->structure.size();
        ++obs[std::min(n, buckets) - 1];
        ++i;
    }
    return chi_squared_test(obs, p);
}

namespace {

std::vector<int> refined_colors(const std::vector<std::vector<bool>>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<int> color(n, 0);
    int classes = 1;
    for (;;) {
        std::vector<std::pair<std::vector<int>, int>> sig(n);
        for (int v = 0; v < n; ++v) {
            sig[v].first.push_back(color[v]);
            std::vector<int> nb;
            for (int u = 0; u < n; ++u)
                if (m[v][u]) nb.push_back(color[u]);
            std::sort(nb.begin(), nb.end());
            sig[v].first.insert(sig[v].first.end(), nb.begin(), nb.end());
            sig[v].second = v;
        }
        std::vector<std::vector<int>> keys;
        for (auto& s : sig) keys.push_back(s.first);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (int v = 0; v < n; ++v)
            color[v] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), sig[v].first) - keys.begin());
        if (static_cast<int>(keys.size()) == classes) break;
        classes = static_cast<int>(keys.size());
    }
    return color;
}

}  // namespace

std::string graph_canonical_form(const Graph& g) {
    auto m = g.matrix();
    const int n = g.n;
    auto color = refined_colors(m);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return std::tie(color[a], a) < std::tie(color[b], b); });
    std::vector<std::pair<int, int>> segments;
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && color[order[j]] == color[order[i]]) ++j;
        segments.emplace_back(i, j);
        i = j;
    }
    std::string best;
    std::string cur(static_cast<std::size_t>(n) * (n - 1) / 2, '0');
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == segments.size()) {
            std::size_t p = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) cur[p++] = m[order[i]][order[j]] ? '1' : '0';
            if (best.empty() || cur < best) best = cur;
            return;
        }
        auto [b, e] = segments[k];
        std::sort(order.begin() + b, order.begin() + e);
        do {
            rec(k + 1);
        } while (std::next_permutation(order.begin() + b, order.begin() + e));
    };
    rec(0);
    std::ostringstream out;
    out << n << ':';
    for (int v : order) out << color[v] << ',';
    out << best;
    return out.str();
}

std::vector<Graph> connected_graphs(int n) {
    if (n < 1) throw precondition_error("connected_graphs: n must be >= 1");
    std::vector<Graph> level{make_graph(1, {})};
    for (int k = 2; k <= n; ++k) {
        std::set<std::string> seen;
        std::vector<Graph> next;
        for (const Graph& g : level) {
            for (unsigned mask = 1; mask < (1u << g.n); ++mask) {
                auto edges = g.edges;
                for (int v = 0; v < g.n; ++v)
                    if (mask >> v & 1u) edges.emplace_back(v + 1, k);
                Graph h = make_graph(k, edges);
                if (seen.insert(graph_canonical_form(h)).second) next.push_back(std::move(h));
            }
        }
        level = std::move(next);
    }
    return level;
}

std::optional<std::vector<std::vector<int>>> three_leaf_power_witness(const Graph& g) {
    const int n = g.n;
    if (n < 1 || !g.connected()) return std::nullopt;
    auto m = g.matrix();
    std::vector<int> block(n, 0);
    // Restricted growth strings enumerate every set partition once.
    std::function<std::optional<std::vector<std::vector<int>>>(int, int)> rec =
        [&](int v, int used) -> std::optional<std::vector<std::vector<int>>> {
        if (v < n) {
            for (int b = 0; b <= used; ++b) {
                bool ok = true;
                for (int u = 0; u < v && ok; ++u)
                    if (block[u] == b && !m[u][v]) ok = false;
                if (!ok) continue;
                block[v] = b;
                if (auto w = rec(v + 1, std::max(used, b + 1))) return w;
            }
            return std::nullopt;
        }
        const int k = used;
        // Blocks must be modules.
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (block[u] == block[v] && u != v)
                    for (int x = 0; x < n; ++x)
                        if (block[x] != block[u] && m[u][x] != m[v][x]) return std::nullopt;
        std::set<std::pair<int, int>> qedges;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (m[u][v] && block[u] < block[v]) qedges.emplace(block[u], block[v]);
        if (static_cast<int>(qedges.size()) != k - 1) return std::nullopt;
        std::vector<std::vector<int>> tree(n + k);
        auto link = [&](int a, int b) {
            tree[a].push_back(b);
            tree[b].push_back(a);
        };
        for (int v = 0; v < n; ++v) link(v, n + block[v]);
        for (auto [a, b] : qedges) link(n + a, n + b);
        for (int s = 0; s < n; ++s) {
            std::vector<int> dist(n + k, -1);
            std::vector<int> queue{s};
            dist[s] = 0;
            for (std::size_t h = 0; h < queue.size(); ++h)
                for (int w : tree[queue[h]])
                    if (dist[w] < 0) {
                        dist[w] = dist[queue[h]] + 1;
                        queue.push_back(w);
                    }
            for (int t = 0; t < n; ++t) {
                if (t == s) continue;
                if (dist[t] < 0) return std::nullopt;
                if ((dist[t] <= 3) != static_cast<bool>(m[s][t])) return std::nullopt;
            }
        }
        return tree;
    };
    return rec(0, 0);
}

namespace {

std::string rooted_code(const std::vector<std::vector<int>>& adj, int root, int avoid) {
    std::vector<int> order{root}, parent(adj.size(), -1);
    parent[root] = avoid;
    for (std::size_t h = 0; h < order.size(); ++h)
        for (int w : adj[order[h]])
            if (w != parent[order[h]]) {
                parent[w] = order[h];
                order.push_back(w);
            }
    std::vector<std::string> code(adj.size());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::vector<std::string> kids;
        for (int w : adj[*it])
            if (w != parent[*it]) kids.push_back(std::move(code[w]));
        std::sort(kids.begin(), kids.end());
        std::string c = "(";
        for (auto& k : kids) c += k;
        code[*it] = c + ")";
    }
    return code[root];
}

}  // namespace

std::string tree_canonical_form(const Tree& t) {
    if (t.size() == 0) return "";
    auto c = tree_center(t.adj);
    if (c.kind == CenterResult::Kind::vertex) return rooted_code(t.adj, c.a, -1);
    auto x = rooted_code(t.adj, c.a, c.b), y = rooted_code(t.adj, c.b, c.a);
    if (y < x) std::swap(x, y);
    return "E" + x + y;
}

std::string structure_canonical_form(const Structure& s) {
    return s.cls == ClassId::two_three_trees ? tree_canonical_form(s.tree) : canonical_form(s.split);
}

std::vector<long> count_23_trees(int nmax) {
    if (nmax < 0) throw precondition_error("count_23_trees: nmax must be >= 0");
    // Planted subtrees: the root has 0, 2 or 3 children (degree 1, 3 or 4 once attached).
    std::vector<std::pair<int, std::string>> planted;
    auto combine = [](std::vector<std::string> kids) {
        std::sort(kids.begin(), kids.end());
        std::string c = "(";
        for (auto& k : kids) c += k;
        return c + ")";
    };
    // Choose a multiset of `want` planted trees (non-decreasing index) with sizes summing to `total`.
    std::function<void(std::size_t, int, int, std::vector<std::string>&, const std::function<void(
                                                                              const std::vector<std::string>&)>&)>
        choose = [&](std::size_t from, int want, int total, std::vector<std::string>& cur,
                     const std::function<void(const std::vector<std::string>&)>& emit) {
            if (want == 0) {
                if (total == 0) emit(cur);
                return;
            }
            for (std::size_t i = from; i < planted.size(); ++i) {
                if (planted[i].first > total) break;
                cur.push_back(planted[i].second);
                choose(i, want - 1, total - planted[i].first, cur, emit);
                cur.pop_back();
            }
        };
    for (int n = 1; n < nmax; ++n) {
        std::set<std::string> fresh;
        if (n == 1) fresh.insert("()");
        for (int k : {2, 3}) {
            std::vector<std::string> cur;
            choose(0, k, n - 1, cur, [&](const std::vector<std::string>& kids) { fresh.insert(combine(kids)); });
        }
        for (auto& c : fresh) planted.emplace_back(n, c);
    }
    std::vector<long> counts(nmax + 1, 0);
    std::set<std::string> seen;
    for (int n = 2; n <= nmax; ++n) {
        for (int k : {1, 3, 4}) {
            std::vector<std::string> cur;
            choose(0, k, n - 1, cur, [&](const std::vector<std::string>& kids) {
                std::string code = combine(kids);
                Tree t;
                std::vector<int> stack;
                for (char ch : code) {
                    if (ch == '(') {
                        int v = t.add_vertex();
                        if (!stack.empty()) t.connect(stack.back(), v);
                        stack.push_back(v);
                    } else {
                        stack.pop_back();
                    }
                }
                if (seen.insert(tree_canonical_form(t)).second) ++counts[n];
            });
        }
    }
    return counts;
}

std::vector<long> brute_force_count(ClassId id, int nmax) {
    if (id == ClassId::two_three_trees) {
        if (nmax > 12) throw precondition_error("brute force for 2-3 trees is limited to n <= 12");
        return count_23_trees(nmax);
    }
    if (nmax > 7) throw precondition_error("brute force for split classes is limited to n <= 7");
    std::vector<long> counts(nmax + 1, 0);
    for (int n = 1; n <= nmax; ++n)
        for (const Graph& g : connected_graphs(n))
            if (id == ClassId::dh ? is_distance_hereditary(g) : three_leaf_power_witness(g).has_value()) ++counts[n];
    return counts;
}

bool is_automorphism_cycle(const std::vector<std::vector<bool>>& adj, const std::vector<int>& cycle) {
    const int n = static_cast<int>(adj.size());
    if (cycle.empty()) return true;
    std::vector<int> image(n, -1);
    std::vector<bool> taken(n, false);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        int a = cycle[i], b = cycle[(i + 1) % cycle.size()];
        if (a < 0 || a >= n || image[a] >= 0 || taken[b]) return false;
        image[a] = b;
        taken[b] = true;
    }
    auto consistent = [&](int v) {
        for (int u = 0; u < n; ++u)
            if (image[u] >= 0 && adj[u][v] != adj[image[u]][image[v]]) return false;
        return true;
    };
    for (int v : cycle)
        if (!consistent(v)) return false;
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
        if (image[v] < 0) rest.push_back(v);
    std::function<bool(std::size_t)> rec = [&](std::size_t k) {
        if (k == rest.size()) return true;
        int v = rest[k];
        for (int w = 0; w < n; ++w) {
            if (taken[w]) continue;
            image[v] = w;
            taken[w] = true;
            if (consistent(v) && rec(k + 1)) return true;
            taken[w] = false;
        }
        image[v] = -1;
        return false;
    };
    return rec(0);
}

bool cycle_is_automorphic(const PointedStructure& p) {
    const Structure& s = p.structure;
    if (s.cls == ClassId::two_three_trees) {
        const int n = s.tree.size();
        std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
        for (int v = 0; v < n; ++v)
            for (int w : s.tree.adj[v]) m[v][w] = true;
        return is_automorphism_cycle(m, p.cycle);
    }
    auto leaves = leaf_order(s.split);
    std::map<int, int> vertex;
    for (std::size_t i = 0; i < leaves.size(); ++i) vertex[leaves[i]] = static_cast<int>(i);
    std::vector<int> cyc;
    for (int leaf : p.cycle) {
        auto it = vertex.find(leaf);
        if (it == vertex.end()) return false;
        cyc.push_back(it->second);
    }
    return is_automorphism_cycle(original_graph(s.split).matrix(), cyc);
}

std::vector<StatsRow> split_tree_stats(const std::vector<SplitTree>& samples) {
    std::map<int, StatsRow> rows;
    for (const auto& t : samples) {
        auto& r = rows[t.leaf_count()];
        r.size = t.leaf_count();
        r.mean_cliques += t.clique_count();
        r.mean_stars += t.star_count();
        ++r.count;
    }
    std::vector<StatsRow> out;
    for (auto& [n, r] : rows) {
        r.mean_cliques /= static_cast<double>(r.count);
        r.mean_stars /= static_cast<double>(r.count);
        out.push_back(r);
    }
    return out;
}

std::string stats_csv(const std::vector<StatsRow>& rows) {
    std::ostringstream out;
    out << "size,mean_cliques,mean_stars,count\n";
    for (const auto& r : rows) out << r.size << ',' << r.mean_cliques << ',' << r.mean_stars << ',' << r.count << '\n';
    return out.str();
}

std::vector<BenchRow> bench(Sampler& s, long count, Rng& rng) {
    std::vector<BenchRow> rows;
    rows.reserve(count);
    while (static_cast<long>(rows.size()) < count) {
        auto t0 = std::chrono::steady_clock::now();
        auto x = s.sample_pointed(rng);
        auto t1 = std::chrono::steady_clock::now();
        if (!x) continue;
        rows.push_back({x->structure.size(), std::chrono::duration<double>(t1 - t0).count()});
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "size,seconds\n";
    for (const auto& r : rows) out << r.size << ',' << r.seconds << '\n';
    return out.str();
}

Uniformity conditioned_uniformity(Sampler& s, const std::map<int, long>& class_counts, long per_size, Rng& rng,
                                  long max_attempts) {
    Uniformity u;
    std::map<int, long> have;
    std::size_t done = 0;
    while (done < class_counts.size()) {
        if (++u.attempts > max_attempts) throw std::runtime_error("conditioned_uniformity: too many attempts");
        auto x = s.sample(rng);
        if (!x) continue;
        int n = x->size();
        if (!class_counts.count(n) || have[n] >= per_size) continue;
        ++u.counts[n][structure_canonical_form(*x)];
        if (++have[n] == per_size) ++done;
    }
    double stat = 0;
    int df = 0;
    for (auto& [n, classes] : class_counts) {
        const auto& seen = u.counts[n];
        if (static_cast<long>(seen.size()) != classes) u.complete = false;
        double e = static_cast<double>(per_size) / static_cast<double>(classes);
        for (auto& [code, c] : seen) {
            u.chi.observed.push_back(c);
            u.chi.expected_p.push_back(1.0 / static_cast<double>(classes));
            stat += (c - e) * (c - e) / e;
        }
        for (long k = static_cast<long>(seen.size()); k < classes; ++k) {
            u.chi.observed.push_back(0);
            u.chi.expected_p.push_back(1.0 / static_cast<double>(classes));
            stat += e;
        }
        df += static_cast<int>(classes - 1);
        u.chi.draws += per_size;
    }
    u.chi.statistic = stat;
    u.chi.df = df;
    u.chi.cutoff = df >= 1 ? chi_squared_cutoff(df) : std::numeric_limits<double>::infinity();
    return u;
}

}  // namespace cyclept

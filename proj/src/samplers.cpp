#include "cyclept/samplers.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <set>

namespace cyclept {

// ------------------------------------------------------------------ trees

CenterResult tree_center(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) throw precondition_error("tree_center: empty tree");
    if (n == 1) return CenterResult::vertex(0);
    std::vector<int> deg(n);
    std::deque<int> q;
    for (int v = 0; v < n; ++v) {
        deg[v] = static_cast<int>(adj[v].size());
        if (deg[v] <= 1) q.push_back(v);
    }
    int remaining = n;
    while (remaining > 2) {
        const std::size_t layer = q.size();
        remaining -= static_cast<int>(layer);
        for (std::size_t i = 0; i < layer; ++i) {
            int v = q.front();
            q.pop_front();
            for (int w : adj[v])
                if (--deg[w] == 1) q.push_back(w);
        }
    }
    if (q.size() == 1) return CenterResult::vertex(q.front());
    return CenterResult::edge(q[0], q[1]);
}

int Tree::add_vertex() {
    adj.emplace_back();
    return size() - 1;
}

void Tree::connect(int a, int b) {
    adj.at(a).push_back(b);
    adj.at(b).push_back(a);
}

bool is_23_tree(const Tree& t) {
    const int n = t.size();
    if (n < 2) return false;
    long deg_sum = 0;
    for (const auto& a : t.adj) {
        const auto d = a.size();
        if (d != 1 && d != 3 && d != 4) return false;
        deg_sum += static_cast<long>(d);
    }
    if (deg_sum != 2L * (n - 1)) return false;
    std::vector<bool> seen(n, false);
    std::vector<int> st{0};
    seen[0] = true;
    int count = 1;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int w : t.adj[v])
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                st.push_back(w);
            }
    }
    return count == n;
}

bool validate_structure(const Structure& s) {
    switch (s.cls) {
    case ClassId::two_three_trees: return is_23_tree(s.tree);
    case ClassId::dh: return static_cast<bool>(validate_dh(s.split));
    case ClassId::tlp: return static_cast<bool>(validate_3lp(s.split));
    }
    return false;
}

// ------------------------------------------------------------------ z range and oracle depth

namespace {

std::mutex g_radius_mutex;

void check_z(ClassId id, const Real& z) {
    const double zd = static_cast<double>(z);
    if (!(zd > 0)) throw domain_error("z must be positive");
    const double r = radius_estimate(id, 300);
    if (zd > r * 1.001)
        throw domain_error("z = " + std::to_string(zd) + " lies beyond the radius of convergence (about " +
                           std::to_string(r) + ")");
}

std::vector<mpz_class> unpointed_coeffs(ClassId id, int depth) {
    Series t = unpoint(enumerate_pointed(catalog(id), depth));
    return t.integers();
}

}  // namespace

double radius_estimate(ClassId id, int depth) {
    static std::map<std::pair<int, int>, double> cache;
    const auto key = std::make_pair(static_cast<int>(id), depth);
    {
        std::lock_guard<std::mutex> lock(g_radius_mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double r = static_cast<double>(domb_sykes(unpointed_coeffs(id, depth), depth).rho);
    std::lock_guard<std::mutex> lock(g_radius_mutex);
    cache[key] = r;
    return r;
}

double singular_z(ClassId id) { return radius_estimate(id, 2000); }

int sampling_order(ClassId id, const Real& z, unsigned digits) {
    const double zd = static_cast<double>(z);
    const double r = radius_estimate(id, 300);
    if (zd >= 0.95 * r) return 2000;
    const double n = (digits + 5) * std::log(10.0) / -std::log(zd / r) + 30;
    return static_cast<int>(std::clamp(std::ceil(n), 40.0, 2000.0));
}

// ------------------------------------------------------------------ 2-3 trees

TwoThreeSampler::TwoThreeSampler(const Real& z, const SamplerOptions& opt)
    : z_(z), digits_(opt.digits), max_size_(opt.max_size) {
    check_z(ClassId::two_three_trees, z);
    order_ = opt.order > 0 ? opt.order : sampling_order(ClassId::two_three_trees, z, opt.digits);
    SeriesMap all = enumerate_all(catalog(ClassId::two_three_trees), order_);
    s_ = Oracle::from_series(all.at("S"), digits_);
    PrecisionGuard g(digits_);
    tv_ = static_cast<double>(Oracle::from_series(all.at("T_v"), digits_).evaluate(z_));
    te_ = static_cast<double>(Oracle::from_series(all.at("T_e"), digits_).evaluate(z_));
}

double TwoThreeSampler::S(int j) {
    if (auto it = s_cache_.find(j); it != s_cache_.end()) return it->second;
    PrecisionGuard g(digits_);
    Real zj = pow(z_, j);
    return s_cache_[j] = static_cast<double>(s_.evaluate(zj));
}

double TwoThreeSampler::Sp(int j) {
    if (auto it = sp_cache_.find(j); it != sp_cache_.end()) return it->second;
    PrecisionGuard g(digits_);
    Real zj = pow(z_, j);
    return sp_cache_[j] = static_cast<double>(s_.evaluate_pointed(zj));
}

std::array<double, 6> TwoThreeSampler::weights_S(int j) {
    const double zj = std::pow(static_cast<double>(z_), j);
    const double s1 = S(j), s2 = S(2 * j), s3 = S(3 * j);
    return {zj, zj * s1 * s1 / 2, zj * s2 / 2, zj * s1 * s1 * s1 / 6, zj * s1 * s2 / 2, zj * s3 / 3};
}

std::array<double, 12> TwoThreeSampler::weights_S_pointed(int j) {
    const double zj = std::pow(static_cast<double>(z_), j);
    const double s1 = S(j), s2 = S(2 * j);
    const double p1 = Sp(j), p2 = Sp(2 * j), p3 = Sp(3 * j);
    auto w = weights_S(j);
    return {w[0], w[1], w[2], w[3], w[4], w[5],
            zj * p1 * s1, zj * p2, zj * p1 * s1 * s1 / 2, zj * p1 * s2 / 2, zj * p2 * s1, zj * p3};
}

std::array<double, 16> TwoThreeSampler::weights_T_pointed() {
    const double z = static_cast<double>(z_);
    const double s1 = S(1), s2 = S(2), s3 = S(3), s4 = S(4);
    const double p2 = Sp(2), p3 = Sp(3), p4 = Sp(4);
    return {z * s1,
            z * s1 * s1 * s1 / 6,
            z * s1 * s2 / 2,
            z * s3 / 3,
            z * s1 * s1 * s1 * s1 / 24,
            z * s1 * s1 * s2 / 4,
            z * s2 * s2 / 8,
            z * s1 * s3 / 3,
            z * s4 / 4,
            z * p2 * s1,
            z * p3,
            z * p2 * s1 * s1 / 2,
            z * p2 * s2 / 2,
            z * p3 * s1,
            z * p4,
            p2};
}

int TwoThreeSampler::new_vertex(Tree& t, std::vector<int>& parent, int p) {
    int v = t.add_vertex();
    parent.push_back(p);
    if (p >= 0) t.connect(p, v);
    if (max_size_ > 0 && t.size() > max_size_) throw Abort{};
    return v;
}

std::vector<int> TwoThreeSampler::copy_subtree(Tree& t, std::vector<int>& parent, int src, int p) {
    // returns (original, copy) pairs in breadth-first order, starting with src
    std::vector<int> olds{src};
    for (std::size_t i = 0; i < olds.size(); ++i)
        for (int w : t.adj[olds[i]])
            if (w != parent[olds[i]]) olds.push_back(w);
    std::unordered_map<int, int> fresh;
    std::vector<int> out;
    out.reserve(olds.size() * 2);
    for (int o : olds) {
        int np = o == src ? p : fresh.at(parent[o]);
        int v = new_vertex(t, parent, np);
        fresh[o] = v;
        out.push_back(o);
        out.push_back(v);
    }
    return out;
}

void TwoThreeSampler::grow_S(Tree& t, std::vector<int>& parent, int v, int j, Rng& rng) {
    struct Task {
        int v, j, copies;
        int src;
    };
    std::vector<Task> st{{v, j, 0, -1}};
    while (!st.empty()) {
        Task k = st.back();
        st.pop_back();
        if (k.src >= 0) {
            for (int c = 0; c < k.copies; ++c) copy_subtree(t, parent, k.src, k.v);
            continue;
        }
        auto w = weights_S(k.j);
        const int jj = k.j;
        auto child = [&](int e) { st.push_back({new_vertex(t, parent, k.v), e, 0, -1}); };
        auto twins = [&](int e, int copies) {
            int c = new_vertex(t, parent, k.v);
            st.push_back({k.v, e, copies, c});
            st.push_back({c, e, 0, -1});
        };
        switch (draw_index(std::vector<double>(w.begin(), w.end()), rng)) {
        case 0: break;
        case 1: child(jj); child(jj); break;
        case 2: twins(2 * jj, 1); break;
        case 3: child(jj); child(jj); child(jj); break;
        case 4: child(jj); twins(2 * jj, 1); break;
        case 5: twins(3 * jj, 2); break;
        }
    }
}

void TwoThreeSampler::grow_children(Tree& t, std::vector<int>& parent, int v, const PartitionDraw& d, int j,
                                    Rng& rng) {
    for (int i = 1; i < static_cast<int>(d.counts.size()); ++i)
        for (int c = 0; c < d.counts[i]; ++c) {
            int r = new_vertex(t, parent, v);
            grow_S(t, parent, r, i * j, rng);
            for (int k = 1; k < i; ++k) copy_subtree(t, parent, r, v);
        }
}

void TwoThreeSampler::attach_copies(Tree& t, std::vector<int>& parent, int v, int root, int ell,
                                    std::vector<int>& cycle) {
    if (ell <= 1) return;
    std::vector<std::vector<int>> cycles{cycle};
    for (int c = 1; c < ell; ++c) {
        auto pairs = copy_subtree(t, parent, root, v);
        std::unordered_map<int, int> m;
        for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) m[pairs[i]] = pairs[i + 1];
        std::vector<int> mapped;
        for (int a : cycle) mapped.push_back(m.at(a));
        cycles.push_back(std::move(mapped));
    }
    cycle = compose_cycles(cycles);
}

std::pair<int, std::vector<int>> TwoThreeSampler::grow_S_pointed(Tree& t, std::vector<int>& parent, int p, int j,
                                                                 Rng& rng) {
    struct Frame {
        int v, ell, child;
    };
    std::vector<Frame> frames;
    std::vector<int> cycle;
    int top = -1;
    int cur_p = p, cur_j = j;
    auto add_S = [&](int v, int e) { grow_S(t, parent, new_vertex(t, parent, v), e, rng); };
    auto add_twins = [&](int v, int e, int copies) {
        int r = new_vertex(t, parent, v);
        grow_S(t, parent, r, e, rng);
        for (int c = 0; c < copies; ++c) copy_subtree(t, parent, r, v);
    };
    for (;;) {
        auto w = weights_S_pointed(cur_j);
        const int i = static_cast<int>(draw_index(std::vector<double>(w.begin(), w.end()), rng));
        const int v = new_vertex(t, parent, cur_p);
        if (top < 0) top = v;
        if (!frames.empty()) frames.back().child = v;
        if (i < 6) {
            switch (i) {
            case 1: add_S(v, cur_j); add_S(v, cur_j); break;
            case 2: add_twins(v, 2 * cur_j, 1); break;
            case 3: add_S(v, cur_j); add_S(v, cur_j); add_S(v, cur_j); break;
            case 4: add_S(v, cur_j); add_twins(v, 2 * cur_j, 1); break;
            case 5: add_twins(v, 3 * cur_j, 2); break;
            default: break;
            }
            cycle = {v};
            break;
        }
        int ell = 1;
        switch (i) {
        case 6: add_S(v, cur_j); break;
        case 7: ell = 2; break;
        case 8: add_S(v, cur_j); add_S(v, cur_j); break;
        case 9: add_twins(v, 2 * cur_j, 1); break;
        case 10: add_S(v, cur_j); ell = 2; break;
        case 11: ell = 3; break;
        }
        frames.push_back({v, ell, -1});
        cur_p = v;
        cur_j *= ell;
    }
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) attach_copies(t, parent, it->v, it->child, it->ell, cycle);
    return {top, std::move(cycle)};
}

std::optional<Tree> TwoThreeSampler::sample_S(Rng& rng) {
    try {
        Tree t;
        std::vector<int> parent;
        int r = new_vertex(t, parent, -1);
        grow_S(t, parent, r, 1, rng);
        return t;
    } catch (const Abort&) {
        return std::nullopt;
    }
}

std::optional<PointedStructure> TwoThreeSampler::sample_S_pointed(Rng& rng) {
    try {
        PointedStructure out;
        out.structure.cls = ClassId::two_three_trees;
        std::vector<int> parent;
        out.cycle = grow_S_pointed(out.structure.tree, parent, -1, 1, rng).second;
        return out;
    } catch (const Abort&) {
        return std::nullopt;
    }
}

std::optional<PointedStructure> TwoThreeSampler::sample_pointed(Rng& rng) {
    try {
        PointedStructure out;
        Structure& s = out.structure;
        s.cls = ClassId::two_three_trees;
        Tree& t = s.tree;
        std::vector<int> parent;
        auto w = weights_T_pointed();
        const int i = static_cast<int>(draw_index(std::vector<double>(w.begin(), w.end()), rng));
        s.case_index = i + 1;
        auto add_S = [&](int v, int e) { grow_S(t, parent, new_vertex(t, parent, v), e, rng); };
        auto add_twins = [&](int v, int e, int copies) {
            int r = new_vertex(t, parent, v);
            grow_S(t, parent, r, e, rng);
            for (int c = 0; c < copies; ++c) copy_subtree(t, parent, r, v);
        };
        auto add_pointed = [&](int v, int ell) {
            auto [r, cyc] = grow_S_pointed(t, parent, v, ell, rng);
            attach_copies(t, parent, v, r, ell, cyc);
            out.cycle = std::move(cyc);
        };
        if (i == 15) {
            auto [a, cyc] = grow_S_pointed(t, parent, -1, 2, rng);
            auto pairs = copy_subtree(t, parent, a, -1);
            std::unordered_map<int, int> m;
            for (std::size_t k = 0; k + 1 < pairs.size(); k += 2) m[pairs[k]] = pairs[k + 1];
            t.connect(a, m.at(a));
            std::vector<int> mapped;
            for (int x : cyc) mapped.push_back(m.at(x));
            out.cycle = compose_cycles({cyc, mapped});
            return out;
        }
        const int r = new_vertex(t, parent, -1);
        switch (i) {
        case 0: add_S(r, 1); break;
        case 1: add_S(r, 1); add_S(r, 1); add_S(r, 1); break;
        case 2: add_S(r, 1); add_twins(r, 2, 1); break;
        case 3: add_twins(r, 3, 2); break;
        case 4: for (int c = 0; c < 4; ++c) add_S(r, 1); break;
        case 5: add_S(r, 1); add_S(r, 1); add_twins(r, 2, 1); break;
        case 6: add_twins(r, 2, 1); add_twins(r, 2, 1); break;
        case 7: add_S(r, 1); add_twins(r, 3, 2); break;
        case 8: add_twins(r, 4, 3); break;
        case 9: add_pointed(r, 2); add_S(r, 1); break;
        case 10: add_pointed(r, 3); break;
        case 11: add_pointed(r, 2); add_S(r, 1); add_S(r, 1); break;
        case 12: add_pointed(r, 2); add_twins(r, 2, 1); break;
        case 13: add_pointed(r, 3); add_S(r, 1); break;
        case 14: add_pointed(r, 4); break;
        }
        if (i < 9) out.cycle = {r};
        return out;
    } catch (const Abort&) {
        return std::nullopt;
    }
}

std::optional<TwoThreeSampler::DissymmetryDraw> TwoThreeSampler::sample_dissymmetry(Rng& rng) {
    const double p_vertex = tv_ / (tv_ + te_);
    const CycleWeights s{0.0, S(1), S(2), S(3), S(4)};
    static const SizeSpec vertex_spec = SizeSpec::finite({1, 3, 4});
    static const SizeSpec edge_spec = SizeSpec::exactly(2);
    try {
        for (int it = 1;; ++it) {
            Tree t;
            std::vector<int> parent;
            CenterResult root;
            if (rng.uniform() < p_vertex) {
                int r = new_vertex(t, parent, -1);
                grow_children(t, parent, r, draw_set(vertex_spec, s, rng), 1, rng);
                root = CenterResult::vertex(r);
            } else {
                PartitionDraw d = draw_set(edge_spec, s, rng);
                int a = new_vertex(t, parent, -1), b;
                if (d.counts.size() > 2 && d.counts[2] == 1) {
                    grow_S(t, parent, a, 2, rng);
                    b = copy_subtree(t, parent, a, -1)[1];
                } else {
                    grow_S(t, parent, a, 1, rng);
                    b = new_vertex(t, parent, -1);
                    grow_S(t, parent, b, 1, rng);
                }
                t.connect(a, b);
                root = CenterResult::edge(a, b);
            }
            if (tree_center(t.adj) == root) {
                DissymmetryDraw out;
                out.structure.cls = ClassId::two_three_trees;
                out.structure.tree = std::move(t);
                out.iterations = it;
                return out;
            }
        }
    } catch (const Abort&) {
        return std::nullopt;
    }
}

// ------------------------------------------------------------------ grammar engine

std::vector<int> Derivation::cycle() const {
    if (root < 0) return {};
    auto is_pointed = [&](int x) {
        const Node& n = nodes[x];
        return n.expr->op == Op::patom || n.pointed_kid >= 0 || n.mark_count > 0;
    };
    if (!is_pointed(root)) return {};
    std::vector<int> order{root};
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Node& n = nodes[order[i]];
        if (n.mark_count > 0)
            for (int c = 0; c < n.mark_count; ++c) order.push_back(n.kids[n.mark_first + c]);
        else if (n.pointed_kid >= 0)
            order.push_back(n.kids[n.pointed_kid]);
    }
    std::unordered_map<int, std::vector<int>> res;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Node& n = nodes[*it];
        std::vector<int> c;
        if (n.expr->op == Op::patom) {
            c = {n.atom};
        } else if (n.mark_count > 0) {
            std::vector<std::vector<int>> parts;
            for (int k = 0; k < n.mark_count; ++k) parts.push_back(std::move(res.at(n.kids[n.mark_first + k])));
            c = compose_cycles(parts);
        } else {
            c = std::move(res.at(n.kids[n.pointed_kid]));
        }
        res[*it] = std::move(c);
    }
    return res.at(root);
}

std::vector<int> Derivation::items(int node) const {
    int start = nodes[node].expr->op == Op::ref ? nodes[node].kids.at(0) : node;
    std::vector<int> out, st{start};
    while (!st.empty()) {
        int x = st.back();
        st.pop_back();
        const Node& n = nodes[x];
        const Op op = n.expr->op;
        if (op == Op::atom || op == Op::patom || op == Op::ref) {
            out.push_back(x);
            continue;
        }
        for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it) st.push_back(*it);
    }
    return out;
}

GrammarSampler::GrammarSampler(const ClassSystem& sys, const SeriesMap& series, const Real& z, unsigned digits)
    : sys_(sys.point_closure()), z_(z), digits_(digits) {
    for (const auto& [name, s] : series) oracles_.emplace(name, Oracle::from_series(s, digits));
}

const Real& GrammarSampler::zpow(int j) {
    auto it = zpow_.find(j);
    if (it != zpow_.end()) return it->second;
    PrecisionGuard g(digits_);
    return zpow_.emplace(j, pow(z_, j)).first->second;
}

double GrammarSampler::value(const std::string& cls, int j) {
    PrecisionGuard g(digits_);
    if (auto it = oracles_.find(cls); it != oracles_.end()) return static_cast<double>(it->second.evaluate(zpow(j)));
    if (is_pointed_name(cls))
        if (auto it = oracles_.find(base_name(cls)); it != oracles_.end())
            return static_cast<double>(it->second.evaluate_pointed(zpow(j)));
    throw precondition_error("no series for class " + cls);
}

bool GrammarSampler::pointed(const Expr& e) {
    auto it = pointed_.find(&e);
    if (it != pointed_.end()) return it->second;
    return pointed_[&e] = sys_.is_pointed(e);
}

const Expr& GrammarSampler::pointed_child(const Expr& e) {
    auto it = pointed_child_.find(&e);
    if (it == pointed_child_.end()) it = pointed_child_.emplace(&e, point(e.kids.at(0))).first;
    return *it->second;
}

const GrammarSampler::Tables& GrammarSampler::tables(const Expr& e, int j) {
    const auto key = std::make_pair(&e, j);
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    Tables tb;
    const bool marked = e.op != Op::set;
    const bool bounded = e.spec.bounded();
    const int cap = bounded ? e.spec.max_size() : 4096;
    auto fill = [&](CycleWeights& w, const Expr& c) {
        w.assign(1, 0.0);
        for (int i = 1; i <= cap; ++i) {
            const double v = value(c, i * j);
            w.push_back(v);
            if (!bounded && i >= 2 && v < 1e-25) break;
        }
    };
    fill(tb.s, e.child());
    if (marked) fill(tb.t, pointed_child(e));
    if (bounded) tb.terms = cycle_index_terms(e.spec, e.op == Op::set_scp, marked, std::max(16, e.spec.max_size()));
    return tables_.emplace(key, std::move(tb)).first->second;
}

double GrammarSampler::set_value(const Expr& e, int j) {
    const Tables& tb = tables(e, j);
    const auto& s = tb.s;
    if (e.spec.bounded()) {
        double sum = 0;
        for (const auto& term : tb.terms) {
            double x = term.coeff.get_d();
            for (std::size_t i = 1; i < term.counts.size(); ++i)
                if (term.counts[i]) x *= std::pow(s[i], term.counts[i]);
            if (term.ell) x *= tb.t[term.ell];
            sum += x;
        }
        return sum;
    }
    double lam = 0;
    for (std::size_t i = 1; i < s.size(); ++i) lam += s[i] / static_cast<double>(i);
    const int m = e.spec.min_size();
    if (e.op == Op::set) return std::exp(lam) * set_tail_probability(s, m);
    const int lmin = e.op == Op::set_scp ? 2 : 1;
    double sum = 0;
    for (int l = lmin; l < static_cast<int>(tb.t.size()); ++l)
        sum += tb.t[l] * (l >= m ? 1.0 : set_tail_probability(s, m - l));
    return std::exp(lam) * sum;
}

double GrammarSampler::value(const Expr& e, int j) {
    const auto key = std::make_pair(&e, j);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    double v = 0;
    switch (e.op) {
    case Op::eps: v = 1; break;
    case Op::atom:
    case Op::patom: {
        PrecisionGuard g(digits_);
        v = static_cast<double>(zpow(j));
        break;
    }
    case Op::uni:
        for (const auto& k : e.kids) v += value(*k, j);
        break;
    case Op::prod:
        v = 1;
        for (const auto& k : e.kids) v *= value(*k, j);
        break;
    case Op::ref: v = value(e.ref, j); break;
    case Op::set:
    case Op::set_cp:
    case Op::set_scp: v = set_value(e, j); break;
    case Op::seq:
    case Op::cyc: throw precondition_error("the sampler does not handle Seq/Cyc");
    }
    values_[key] = v;
    return v;
}

std::optional<Derivation> GrammarSampler::sample(const std::string& cls, Rng& rng, long max_atoms,
                                                 const SetOptions& opt) {
    struct Abort {};
    const ClassDef& top = sys_.def(cls);
    Derivation d;
    auto add = [&](const Expr* e, int j) {
        Derivation::Node n;
        n.expr = e;
        n.exponent = j;
        d.nodes.push_back(std::move(n));
        return static_cast<int>(d.nodes.size()) - 1;
    };
    auto new_atom = [&] {
        if (max_atoms > 0 && d.atoms >= max_atoms) throw Abort{};
        return d.atoms++;
    };
    struct Task {
        int node;
        int src, first, count;
    };
    std::vector<Task> st;

    auto deep_copy = [&](int src) {
        Derivation::Node root = d.nodes[src];
        if (root.atom >= 0) root.atom = new_atom();
        d.nodes.push_back(std::move(root));
        const int r = static_cast<int>(d.nodes.size()) - 1;
        std::vector<int> todo{r};
        while (!todo.empty()) {
            int x = todo.back();
            todo.pop_back();
            for (std::size_t k = 0; k < d.nodes[x].kids.size(); ++k) {
                Derivation::Node c = d.nodes[d.nodes[x].kids[k]];
                if (c.atom >= 0) c.atom = new_atom();
                d.nodes.push_back(std::move(c));
                const int id = static_cast<int>(d.nodes.size()) - 1;
                d.nodes[x].kids[k] = id;
                todo.push_back(id);
            }
        }
        return r;
    };
    // i copies of one draw at exponent i*j for every cycle of length i
    auto add_groups = [&](int n, const std::vector<int>& counts, const Expr* child, int j) {
        for (int i = 1; i < static_cast<int>(counts.size()); ++i)
            for (int c = 0; c < counts[i]; ++c) {
                const int first = static_cast<int>(d.nodes[n].kids.size());
                const int k = add(child, i * j);
                d.nodes[n].kids.push_back(k);
                d.nodes[n].kids.resize(first + i, -1);
                if (i > 1) st.push_back({n, k, first + 1, i - 1});
                st.push_back({k, -1, 0, 0});
            }
    };

    try {
        auto rr = root_refs_.find(cls);
        if (rr == root_refs_.end()) rr = root_refs_.emplace(cls, ex::ref(cls)).first;
        d.root = add(rr->second.get(), 1);
        const int body = add(top.expr.get(), 1);
        d.nodes[d.root].kids.push_back(body);
        if (top.pointed) d.nodes[d.root].pointed_kid = 0;
        st.push_back({d.nodes[d.root].kids[0], -1, 0, 0});
        while (!st.empty()) {
            Task task = st.back();
            st.pop_back();
            const int n = task.node;
            if (task.src >= 0) {
                for (int c = 0; c < task.count; ++c) {
                    int copy = deep_copy(task.src);
                    d.nodes[n].kids[task.first + c] = copy;
                }
                continue;
            }
            const Expr& e = *d.nodes[n].expr;
            const int j = d.nodes[n].exponent;
            switch (e.op) {
            case Op::eps: break;
            case Op::atom:
            case Op::patom: d.nodes[n].atom = new_atom(); break;
            case Op::uni: {
                std::vector<double> w;
                for (const auto& k : e.kids) w.push_back(value(*k, j));
                const int c = static_cast<int>(draw_index(w, rng));
                const int k = add(e.kids[c].get(), j);
                d.nodes[n].choice = c;
                d.nodes[n].kids = {k};
                if (pointed(e)) d.nodes[n].pointed_kid = 0;
                st.push_back({k, -1, 0, 0});
                break;
            }
            case Op::prod:
                for (std::size_t i = 0; i < e.kids.size(); ++i) {
                    const int k = add(e.kids[i].get(), j);
                    d.nodes[n].kids.push_back(k);
                    if (pointed(*e.kids[i])) d.nodes[n].pointed_kid = static_cast<int>(i);
                }
                for (auto it = d.nodes[n].kids.rbegin(); it != d.nodes[n].kids.rend(); ++it)
                    st.push_back({*it, -1, 0, 0});
                break;
            case Op::ref: {
                const int k = add(sys_.def(e.ref).expr.get(), j);
                d.nodes[n].kids = {k};
                if (pointed(e)) d.nodes[n].pointed_kid = 0;
                st.push_back({k, -1, 0, 0});
                break;
            }
            case Op::set: {
                const Tables& tb = tables(e, j);
                PartitionDraw pd = e.spec.bounded() ? draw_monomial(tb.terms, tb.s, {}, rng)
                                                    : draw_set(e.spec, tb.s, rng, opt);
                add_groups(n, pd.counts, e.kids[0].get(), j);
                break;
            }
            case Op::set_cp:
            case Op::set_scp: {
                const Tables& tb = tables(e, j);
                PartitionDraw pd = e.spec.bounded()
                                       ? draw_monomial(tb.terms, tb.s, tb.t, rng)
                                       : draw_pointed_set(e.spec, tb.s, tb.t, e.op == Op::set_scp, rng, opt);
                add_groups(n, pd.counts, e.kids[0].get(), j);
                const int first = static_cast<int>(d.nodes[n].kids.size());
                const int k = add(&pointed_child(e), pd.ell * j);
                d.nodes[n].kids.push_back(k);
                d.nodes[n].kids.resize(first + pd.ell, -1);
                d.nodes[n].mark_first = first;
                d.nodes[n].mark_count = pd.ell;
                if (pd.ell > 1) st.push_back({n, k, first + 1, pd.ell - 1});
                st.push_back({k, -1, 0, 0});
                break;
            }
            case Op::seq:
            case Op::cyc: throw precondition_error("the sampler does not handle Seq/Cyc");
            }
        }
    } catch (const Abort&) {
        return std::nullopt;
    }
    return d;
}

// ------------------------------------------------------------------ split trees

namespace {

class SplitBuilder {
public:
    SplitBuilder(ClassId id, const Derivation& d) : id_(id), d_(d), atom_leaf_(d.atoms, -1) {}

    // Creates the tree node(s) of a derivation item, linked to `parent` (if any);
    // `center` marks the item as the center of the parent star.
    int build(int item, int parent, bool center) {
        int v = make(item, parent, center);
        run();
        return v;
    }

    SplitTree& tree() { return t_; }
    int leaf_of(int atom) const { return atom_leaf_.at(atom); }

private:
    struct Task {
        int item, parent;
        bool center;
    };

    void link(int parent, int child, bool center) {
        if (parent < 0) return;
        t_.connect(parent, child);
        if (center) t_.set_center(parent, child);
    }

    int make(int item, int parent, bool center) {
        const auto& n = d_.nodes[item];
        const Op op = n.expr->op;
        if (op == Op::atom || op == Op::patom) {
            int leaf = t_.add_leaf();
            atom_leaf_.at(n.atom) = leaf;
            link(parent, leaf, center);
            return leaf;
        }
        if (op != Op::ref) throw integrity_error("split tree assembly: unexpected derivation item");
        const std::string cls = base_name(n.expr->ref);
        std::vector<int> sub = d_.items(item);
        if (cls == "A") {
            if (sub.size() == 1) return make(sub[0], parent, center);
            int k = t_.add_clique();
            link(parent, k, center);
            for (int s : sub) todo_.push_back({s, k, false});
            return k;
        }
        if (cls == "K") {
            int k = t_.add_clique();
            link(parent, k, center);
            for (int s : sub) todo_.push_back({s, k, false});
            return k;
        }
        if (cls == "SC") {
            int s = t_.add_star();
            link(parent, s, center);
            if (parent >= 0) t_.set_center(s, parent);
            for (int x : sub) todo_.push_back({x, s, false});
            return s;
        }
        if (cls == "SX") {
            int s = t_.add_star();
            link(parent, s, center);
            for (std::size_t i = 0; i < sub.size(); ++i) todo_.push_back({sub[i], s, i == 0});
            return s;
        }
        throw integrity_error("split tree assembly: unknown class " + cls);
    }

    void run() {
        while (!todo_.empty()) {
            Task k = todo_.back();
            todo_.pop_back();
            make(k.item, k.parent, k.center);
        }
    }

    ClassId id_;
    const Derivation& d_;
    SplitTree t_;
    std::vector<int> atom_leaf_;
    std::vector<Task> todo_;
};

bool is_ref(const Derivation& d, int item, const char* cls) {
    const auto& e = *d.nodes[item].expr;
    return e.op == Op::ref && base_name(e.ref) == cls;
}

bool is_atom(const Derivation& d, int item) {
    const Op op = d.nodes[item].expr->op;
    return op == Op::atom || op == Op::patom;
}

}  // namespace

PointedStructure derivation_to_split_tree(ClassId id, const Derivation& d) {
    if (id == ClassId::two_three_trees) throw precondition_error("2-3 trees are not split trees");
    const int top_uni = d.nodes.at(d.root).kids.at(0);
    const int c = d.nodes[top_uni].choice;
    const int branch = d.nodes[top_uni].kids.at(0);
    std::vector<int> items = d.items(branch);
    SplitBuilder b(id, d);
    SplitTree& t = b.tree();

    auto edge_root = [&] {
        int x = b.build(items.at(0), -1, false);
        int y = b.build(items.at(1), x, false);
        if (is_ref(d, items[0], "SC")) t.set_center(x, y);
        t.set_root_edge(x, y);
    };
    auto clique_root = [&](const std::vector<int>& its) {
        int k = t.add_clique();
        for (int x : its) b.build(x, k, false);
        t.set_root_node(k);
    };
    auto leaf_root = [&] {
        int p = b.build(items.at(0), -1, false);
        t.set_root_node(p);
        return p;
    };

    switch (c) {
    case 0: leaf_root(); break;
    case 1: {
        int p = leaf_root();
        b.build(items.at(1), p, false);
        break;
    }
    case 2: {
        int p = leaf_root();
        std::vector<int> rest(items.begin() + 1, items.end());
        if (rest.size() == 1 && !is_atom(d, rest[0])) {
            b.build(rest[0], p, false);
        } else {
            int k = t.add_clique();
            t.connect(p, k);
            for (int x : rest)
                if (is_ref(d, x, "A"))
                    for (int a : d.items(x)) b.build(a, k, false);
                else
                    b.build(x, k, false);
        }
        break;
    }
    default:
        if (id == ClassId::dh) {
            if (c == 3 || c == 4) {
                edge_root();
            } else if (c == 5) {
                clique_root(items);
            } else {
                int s = t.add_star();
                for (std::size_t i = 0; i < items.size(); ++i) b.build(items[i], s, i == 0);
                t.set_root_node(s);
            }
        } else {
            if (c == 3) {
                edge_root();
            } else if (c == 4) {
                int s = t.add_star();
                for (std::size_t i = 0; i < items.size(); ++i) b.build(items[i], s, i == 0);
                t.set_root_node(s);
            } else {
                clique_root(items);
            }
        }
    }

    PointedStructure out;
    out.structure.cls = id;
    out.structure.case_index = c + 1;
    for (int a : d.cycle()) out.cycle.push_back(b.leaf_of(a));
    out.structure.split = std::move(t);
    return out;
}

void GrammarSampler::prepare(const std::string& cls) {
    std::set<std::pair<const Expr*, int>> seen;
    std::vector<std::pair<const Expr*, int>> todo{{sys_.def(cls).expr.get(), 1}};
    while (!todo.empty()) {
        auto [e, j] = todo.back();
        todo.pop_back();
        if (!seen.insert({e, j}).second) continue;
        value(*e, j);
        pointed(*e);
        switch (e->op) {
        case Op::uni:
        case Op::prod:
            for (const auto& k : e->kids) todo.emplace_back(k.get(), j);
            break;
        case Op::ref: todo.emplace_back(sys_.def(e->ref).expr.get(), j); break;
        case Op::set:
        case Op::set_cp:
        case Op::set_scp: {
            const Tables& tb = tables(*e, j);
            for (std::size_t i = 1; i < tb.s.size(); ++i)
                if (tb.s[i] > 0) todo.emplace_back(&e->child(), static_cast<int>(i) * j);
            if (e->op != Op::set)
                for (std::size_t i = 1; i < tb.t.size(); ++i)
                    if (tb.t[i] > 0) todo.emplace_back(&pointed_child(*e), static_cast<int>(i) * j);
            break;
        }
        default: break;
        }
    }
}

SplitSampler::SplitSampler(ClassId id, const Real& z, const SamplerOptions& opt) : id_(id), opt_(opt) {
    if (id == ClassId::two_three_trees) throw precondition_error("SplitSampler handles dh and tlp only");
    check_z(id, z);
    const int order = opt.order > 0 ? opt.order : sampling_order(id, z, opt.digits);
    const CatalogEntry& e = catalog(id);
    engine_ = std::make_unique<GrammarSampler>(e.system, enumerate_all(e, order), z, opt.digits);
    engine_->prepare(e.top);
}

std::optional<PointedStructure> SplitSampler::sample_pointed(Rng& rng) {
    auto d = engine_->sample(catalog(id_).top, rng, opt_.max_size, opt_.set);
    if (!d) return std::nullopt;
    return derivation_to_split_tree(id_, *d);
}

std::array<double, 7> SplitSampler::case_weights() {
    const Expr& top = *engine_->system().def(catalog(id_).top).expr;
    std::array<double, 7> w{};
    for (std::size_t i = 0; i < 7 && i < top.kids.size(); ++i) w[i] = engine_->value(*top.kids[i], 1);
    return w;
}

std::optional<Structure> Sampler::sample(Rng& rng) {
    auto p = sample_pointed(rng);
    if (!p) return std::nullopt;
    return unpoint_sample(*p);
}

std::unique_ptr<Sampler> make_sampler(ClassId id, const Real& z, const SamplerOptions& opt) {
    if (id == ClassId::two_three_trees) return std::make_unique<TwoThreePointedSampler>(z, opt);
    return std::make_unique<SplitSampler>(id, z, opt);
}

}  // namespace cyclept

#include "cyclept/grammar.hpp"

#include <algorithm>
#include <unordered_map>

namespace cyclept {

namespace {

// Series-valued DAG evaluated one coefficient at a time. Every node's n-th
// coefficient is an "inner" part that depends only on finished coefficients
// below n, plus boundary terms that are linear in the n-th coefficients of its
// children. Rounds at a fixed n repeat until the class coefficients settle.
struct Node {
    enum Kind { konst, zero, ref, add, sub, mul, pleth, divexact, exp, tsum, derive, seq } kind;
    int a = -1, b = -1;
    int param = 0;
    std::vector<mpz_class> v{};     // coefficients
    std::vector<mpz_class> aux{};   // exp: P_k = sum_{d|k} d c_d
    mpz_class inner{};
};

class Dag {
public:
    Dag(const ClassSystem& sys, int order) : sys_(sys), n_(order) {
        class_nodes_.assign(sys.defs().size(), -1);
        for (const auto& d : sys.defs()) {
            int id = build(*d.expr);
            class_nodes_[sys.index(d.name)] = id;
        }
        guess_.assign(sys.defs().size(), std::vector<mpz_class>(n_ + 1));
    }

    int derived_node(const std::string& name) { return node_of_ref(name); }

    void run() {
        const int classes = static_cast<int>(guess_.size());
        for (int n = 0; n <= n_; ++n) {
            for (auto& nd : nodes_) prepare(nd, n);
            int round = 0;
            for (;; ++round) {
                if (round > classes + 1)
                    throw ill_founded_error("coefficient " + std::to_string(n) + " does not stabilise");
                inexact_ = false;
                for (auto& nd : nodes_) compute(nd, n);
                bool stable = true;
                for (int c = 0; c < classes; ++c) {
                    const mpz_class& nv = nodes_[class_nodes_[c]].v[n];
                    if (nv != guess_[c][n]) {
                        stable = false;
                        guess_[c][n] = nv;
                    }
                }
                if (stable) break;
            }
            if (inexact_) throw integrity_error("non-integral coefficient at index " + std::to_string(n));
            for (auto& nd : nodes_) finalize(nd, n);
        }
    }

    const std::vector<mpz_class>& class_coeffs(int c) const { return guess_[c]; }
    const std::vector<mpz_class>& node_coeffs(int id) const { return nodes_[id].v; }

private:
    int add_node(Node nd) {
        std::string key = std::to_string(nd.kind) + ":" + std::to_string(nd.a) + ":" + std::to_string(nd.b) +
                          ":" + std::to_string(nd.param);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        nd.v.assign(n_ + 1, 0);
        if (nd.kind == Node::exp) nd.aux.assign(n_ + 1, 0);
        nodes_.push_back(std::move(nd));
        int id = static_cast<int>(nodes_.size()) - 1;
        memo_[key] = id;
        return id;
    }
    int konst(int k) { return add_node({Node::konst, -1, -1, k}); }
    int zero() { return add_node({Node::zero}); }
    int one() { return konst(0); }
    int plus(int a, int b) {
        if (nodes_[a].kind == Node::zero) return b;
        if (nodes_[b].kind == Node::zero) return a;
        return add_node({Node::add, std::min(a, b), std::max(a, b)});
    }
    int minus(int a, int b) {
        if (nodes_[b].kind == Node::zero) return a;
        return add_node({Node::sub, a, b});
    }
    int times(int a, int b) {
        if (nodes_[a].kind == Node::zero || nodes_[b].kind == Node::zero) return zero();
        if (nodes_[a].kind == Node::konst && nodes_[a].param == 0) return b;
        if (nodes_[b].kind == Node::konst && nodes_[b].param == 0) return a;
        return add_node({Node::mul, std::min(a, b), std::max(a, b)});
    }
    int pl(int a, int i) {
        if (i == 1 || nodes_[a].kind == Node::zero) return a;
        return add_node({Node::pleth, a, -1, i});
    }
    int divx(int a, int m) { return m == 1 ? a : add_node({Node::divexact, a, -1, m}); }

    int node_of_ref(const std::string& name) {
        if (sys_.has(name)) return add_node({Node::ref, -1, -1, sys_.index(name)});
        if (is_pointed_name(name) && sys_.has(base_name(name)))
            return add_node({Node::derive, node_of_ref(base_name(name))});
        throw grammar_error("unresolved reference '" + name + "'");
    }

    // Z_0..Z_kmax for child c
    std::vector<int> exact_sets(int c, int kmax) {
        std::vector<int> z{one()};
        for (int m = 1; m <= kmax; ++m) {
            int acc = zero();
            for (int i = 1; i <= m; ++i) acc = plus(acc, times(pl(c, i), z[m - i]));
            z.push_back(divx(acc, m));
        }
        return z;
    }

    std::vector<int> exact_pointed_sets(int c, int cp, int kmax, int lmin) {
        std::vector<int> z = exact_sets(c, kmax);
        std::vector<int> out;
        for (int m = 0; m <= kmax; ++m) {
            int acc = zero();
            for (int l = lmin; l <= m; ++l) acc = plus(acc, times(pl(cp, l), z[m - l]));
            out.push_back(acc);
        }
        return out;
    }

    int build(const Expr& e) {
        switch (e.op) {
        case Op::eps: return one();
        case Op::atom:
        case Op::patom: return konst(1);
        case Op::ref: return node_of_ref(e.ref);
        case Op::uni: {
            std::vector<int> ids;
            for (const auto& k : e.kids) ids.push_back(build(*k));
            std::sort(ids.begin(), ids.end());
            int r = zero();
            for (int id : ids) r = plus(r, id);
            return r;
        }
        case Op::prod: {
            int r = one();
            for (const auto& k : e.kids) r = times(r, build(*k));
            return r;
        }
        case Op::seq: return add_node({Node::seq, build(e.child())});
        case Op::cyc: throw grammar_error("the coefficient solver does not handle Cyc");
        case Op::set: {
            int c = build(e.child());
            if (e.spec.kind == SizeSpec::Kind::at_least) {
                int r = add_node({Node::exp, c});
                auto z = exact_sets(c, e.spec.values[0]);
                for (int m = 0; m < e.spec.values[0]; ++m) r = minus(r, z[m]);
                return r;
            }
            auto z = exact_sets(c, e.spec.max_size());
            int r = zero();
            for (int k : e.spec.values) r = plus(r, z[k]);
            return r;
        }
        case Op::set_cp:
        case Op::set_scp: {
            const int lmin = e.op == Op::set_cp ? 1 : 2;
            int c = build(e.child());
            int cp = build(*point(e.kids[0]));
            if (e.spec.kind == SizeSpec::Kind::at_least) {
                int r = times(add_node({Node::tsum, cp, -1, lmin}), add_node({Node::exp, c}));
                auto zp = exact_pointed_sets(c, cp, e.spec.values[0], lmin);
                for (int m = 0; m < e.spec.values[0]; ++m) r = minus(r, zp[m]);
                return r;
            }
            auto zp = exact_pointed_sets(c, cp, e.spec.max_size(), lmin);
            int r = zero();
            for (int k : e.spec.values) r = plus(r, zp[k]);
            return r;
        }
        }
        return zero();
    }

    const std::vector<mpz_class>& val(int id) const { return nodes_[id].v; }

    void prepare(Node& nd, int n) {
        nd.inner = 0;
        switch (nd.kind) {
        case Node::mul: {
            const auto& a = val(nd.a);
            const auto& b = val(nd.b);
            mpz_class acc = 0;
            for (int k = 1; k < n; ++k)
                if (sgn(a[k]) != 0 && sgn(b[n - k]) != 0) mpz_addmul(acc.get_mpz_t(), a[k].get_mpz_t(), b[n - k].get_mpz_t());
            nd.inner = std::move(acc);
            break;
        }
        case Node::seq: {
            const auto& a = val(nd.a);
            mpz_class acc = 0;
            for (int k = 1; k < n; ++k)
                if (sgn(a[k]) != 0) mpz_addmul(acc.get_mpz_t(), a[k].get_mpz_t(), nd.v[n - k].get_mpz_t());
            nd.inner = std::move(acc);
            break;
        }
        case Node::exp: {
            if (n == 0) break;
            mpz_class acc = 0;
            for (int k = 1; k < n; ++k)
                if (sgn(nd.aux[k]) != 0) mpz_addmul(acc.get_mpz_t(), nd.aux[k].get_mpz_t(), nd.v[n - k].get_mpz_t());
            // divisors d < n of n contribute to P_n without touching c_n
            const auto& c = val(nd.a);
            for (int d = 1; d * 2 <= n; ++d)
                if (n % d == 0) acc += c[d] * d;
            nd.inner = std::move(acc);
            break;
        }
        case Node::pleth:
            if (n > 0 && n % nd.param == 0) nd.inner = val(nd.a)[n / nd.param];
            break;
        case Node::tsum: {
            const auto& c = val(nd.a);
            mpz_class acc = 0;
            for (int l = std::max(2, nd.param); l <= n; ++l)
                if (n % l == 0) acc += c[n / l];
            nd.inner = std::move(acc);
            break;
        }
        default: break;
        }
    }

    void compute(Node& nd, int n) {
        mpz_class& out = nd.v[n];
        switch (nd.kind) {
        case Node::konst: out = (n == nd.param) ? 1 : 0; break;
        case Node::zero: out = 0; break;
        case Node::ref: out = guess_[nd.param][n]; break;
        case Node::add: out = val(nd.a)[n] + val(nd.b)[n]; break;
        case Node::sub: out = val(nd.a)[n] - val(nd.b)[n]; break;
        case Node::mul: {
            const auto& a = val(nd.a);
            const auto& b = val(nd.b);
            out = nd.inner;
            if (n == 0)
                out = a[0] * b[0];
            else {
                if (sgn(a[0])) out += a[0] * b[n];
                if (sgn(b[0])) out += a[n] * b[0];
            }
            break;
        }
        case Node::pleth: out = n == 0 ? val(nd.a)[0] : nd.inner; break;
        case Node::divexact: {
            const mpz_class& a = val(nd.a)[n];
            if (!mpz_divisible_ui_p(a.get_mpz_t(), nd.param)) inexact_ = true;
            mpz_fdiv_q_ui(out.get_mpz_t(), a.get_mpz_t(), nd.param);
            break;
        }
        case Node::exp: {
            const auto& c = val(nd.a);
            if (n == 0) {
                if (sgn(c[0]) != 0) throw domain_error("set constructor applied to a class containing the empty object");
                out = 1;
                break;
            }
            // n E_n = inner + n c_n
            if (!mpz_divisible_ui_p(nd.inner.get_mpz_t(), n)) inexact_ = true;
            mpz_fdiv_q_ui(out.get_mpz_t(), nd.inner.get_mpz_t(), n);
            out += c[n];
            break;
        }
        case Node::tsum: {
            const auto& c = val(nd.a);
            if (n == 0) {
                if (sgn(c[0]) != 0) throw domain_error("pointed set argument has a constant term");
                out = 0;
                break;
            }
            out = nd.inner;
            if (nd.param <= 1) out += c[n];
            break;
        }
        case Node::derive: out = val(nd.a)[n] * n; break;
        case Node::seq: {
            const auto& c = val(nd.a);
            if (n == 0) {
                if (sgn(c[0]) != 0) throw domain_error("Seq applied to a class containing the empty object");
                out = 1;
                break;
            }
            out = nd.inner + c[n];
            break;
        }
        }
    }

    void finalize(Node& nd, int n) {
        if (nd.kind == Node::exp && n > 0) {
            const auto& c = val(nd.a);
            mpz_class p = 0;
            for (int d = 1; d <= n; ++d)
                if (n % d == 0) p += c[d] * d;
            nd.aux[n] = std::move(p);
        }
    }

    const ClassSystem& sys_;
    int n_;
    bool inexact_ = false;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> memo_;
    std::vector<int> class_nodes_;
    std::vector<std::vector<mpz_class>> guess_;
};

bool uses_cyc(const Expr& e) {
    if (e.op == Op::cyc) return true;
    for (const auto& k : e.kids)
        if (uses_cyc(*k)) return true;
    return false;
}

}  // namespace

std::map<std::string, std::vector<mpz_class>> solve_online(const ClassSystem& sys, int order,
                                                           const std::vector<std::string>& extra) {
    if (order < 0) throw precondition_error("order must be >= 0");
    sys.validate();
    Dag dag(sys, order);
    std::vector<std::pair<std::string, int>> extras;
    for (const auto& e : extra)
        if (!sys.has(e)) extras.emplace_back(e, dag.derived_node(e));
    dag.run();
    std::map<std::string, std::vector<mpz_class>> out;
    for (const auto& d : sys.defs()) out[d.name] = dag.class_coeffs(sys.index(d.name));
    for (const auto& [name, id] : extras) out[name] = dag.node_coeffs(id);
    return out;
}

std::map<std::string, std::vector<mpz_class>> solve(const ClassSystem& sys, int order) {
    bool cyc = false;
    for (const auto& d : sys.defs()) cyc = cyc || uses_cyc(*d.expr);
    if (!cyc) return solve_online(sys, order);
    std::map<std::string, std::vector<mpz_class>> out;
    for (auto& [name, s] : solve_kleene(sys, order)) out[name] = s.integers();
    return out;
}

}  // namespace cyclept

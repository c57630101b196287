#include "cyclept/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace cyclept {

SizeSpec SizeSpec::exactly(int k) {
    if (k < 0) throw grammar_error("size must be >= 0");
    return {Kind::exactly, {k}};
}

SizeSpec SizeSpec::at_least(int k) {
    if (k < 0) throw grammar_error("size must be >= 0");
    return {Kind::at_least, {k}};
}

SizeSpec SizeSpec::finite(std::vector<int> ks) {
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (ks.empty() || ks.front() < 0) throw grammar_error("finite size set must be nonempty and >= 0");
    if (ks.size() == 1) return exactly(ks[0]);
    return {Kind::finite, std::move(ks)};
}

bool SizeSpec::contains(int k) const {
    if (kind == Kind::at_least) return k >= values[0];
    return std::binary_search(values.begin(), values.end(), k);
}

std::string SizeSpec::str() const {
    if (kind == Kind::at_least) return values[0] == 0 ? "" : "{>=" + std::to_string(values[0]) + "}";
    std::string s = "{";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
    return s + "}";
}

namespace ex {
namespace {
ExprPtr mk(Op op, std::vector<ExprPtr> kids = {}, SizeSpec spec = SizeSpec::any(), std::string ref = {}) {
    return std::make_shared<const Expr>(Expr{op, std::move(kids), std::move(spec), std::move(ref)});
}
}  // namespace
ExprPtr eps() { return mk(Op::eps); }
ExprPtr zero() { return mk(Op::uni); }
ExprPtr atom() { return mk(Op::atom); }
ExprPtr patom() { return mk(Op::patom); }
ExprPtr ref(std::string name) { return mk(Op::ref, {}, SizeSpec::any(), std::move(name)); }
ExprPtr uni(std::vector<ExprPtr> kids) {
    if (kids.size() == 1) return kids[0];
    return mk(Op::uni, std::move(kids));
}
ExprPtr prod(std::vector<ExprPtr> kids) {
    if (kids.size() == 1) return kids[0];
    if (kids.empty()) return eps();
    return mk(Op::prod, std::move(kids));
}
ExprPtr set(SizeSpec spec, ExprPtr child) { return mk(Op::set, {std::move(child)}, std::move(spec)); }
ExprPtr set_cp(SizeSpec spec, ExprPtr child) { return mk(Op::set_cp, {std::move(child)}, std::move(spec)); }
ExprPtr set_scp(SizeSpec spec, ExprPtr child) { return mk(Op::set_scp, {std::move(child)}, std::move(spec)); }
ExprPtr seq(ExprPtr child) { return mk(Op::seq, {std::move(child)}); }
ExprPtr cyc(ExprPtr child) { return mk(Op::cyc, {std::move(child)}); }
}  // namespace ex

namespace {

bool is_zero_expr(const Expr& e) { return e.op == Op::uni && e.kids.empty(); }

void print(const Expr& e, std::ostream& os, int prec) {
    switch (e.op) {
    case Op::eps: os << "1"; return;
    case Op::atom: os << "Z"; return;
    case Op::patom: os << "Zp"; return;
    case Op::ref: os << e.ref; return;
    case Op::uni:
        if (e.kids.empty()) {
            os << "0";
            return;
        }
        if (prec > 0) os << '(';
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            if (i) os << " + ";
            print(*e.kids[i], os, 0);
        }
        if (prec > 0) os << ')';
        return;
    case Op::prod:
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            if (i) os << " * ";
            print(*e.kids[i], os, 1);
        }
        return;
    case Op::set: os << "Set"; break;
    case Op::set_cp: os << "SetCp"; break;
    case Op::set_scp: os << "SetSCp"; break;
    case Op::seq: os << "Seq"; break;
    case Op::cyc: os << "Cyc"; break;
    }
    os << e.spec.str() << '(';
    print(e.child(), os, 0);
    os << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(e, os, 0);
    return os.str();
}

std::string pointed_name(const std::string& plain) { return plain + ".cp"; }
bool is_pointed_name(const std::string& name) {
    return name.size() > 3 && name.compare(name.size() - 3, 3, ".cp") == 0;
}
std::string base_name(const std::string& name) {
    return is_pointed_name(name) ? name.substr(0, name.size() - 3) : name;
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
public:
    Parser(std::string_view src, int line) : s_(src), line_(line) {}

    ExprPtr parse_all() {
        ExprPtr e = expr();
        skip();
        if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw grammar_error("line " + std::to_string(line_) + ", column " + std::to_string(p_ + 1) +
                            ": " + msg);
    }
    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }
    bool eat(char c) {
        skip();
        if (p_ < s_.size() && s_[p_] == c) {
            ++p_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }
    std::string ident() {
        skip();
        std::size_t b = p_;
        while (p_ < s_.size() && ident_char(s_[p_])) ++p_;
        return std::string(s_.substr(b, p_ - b));
    }
    int integer() {
        skip();
        std::size_t b = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        if (b == p_) fail("expected integer");
        return std::stoi(std::string(s_.substr(b, p_ - b)));
    }

    ExprPtr expr() {
        std::vector<ExprPtr> terms{term()};
        while (eat('+')) terms.push_back(term());
        return ex::uni(std::move(terms));
    }
    ExprPtr term() {
        std::vector<ExprPtr> fs{factor()};
        while (eat('*')) fs.push_back(factor());
        return ex::prod(std::move(fs));
    }
    SizeSpec spec() {
        skip();
        if (!eat('{')) return SizeSpec::any();
        SizeSpec out;
        skip();
        if (p_ + 1 < s_.size() && s_[p_] == '>' && s_[p_ + 1] == '=') {
            p_ += 2;
            out = SizeSpec::at_least(integer());
        } else {
            std::vector<int> ks{integer()};
            while (eat(',')) ks.push_back(integer());
            out = SizeSpec::finite(std::move(ks));
        }
        expect('}');
        return out;
    }
    ExprPtr factor() {
        skip();
        if (eat('(')) {
            ExprPtr e = expr();
            expect(')');
            return e;
        }
        if (p_ < s_.size() && (s_[p_] == '0' || s_[p_] == '1') &&
            (p_ + 1 == s_.size() || !ident_char(s_[p_ + 1]))) {
            return s_[p_++] == '0' ? ex::zero() : ex::eps();
        }
        const std::size_t at = p_;
        std::string id = ident();
        if (id.empty()) fail("expected a term");
        if (id == "Z") return ex::atom();
        if (id == "Zp") return ex::patom();
        if (id == "Set" || id == "SetCp" || id == "SetSCp" || id == "Seq" || id == "Cyc") {
            SizeSpec sp = spec();
            if ((id == "Seq" || id == "Cyc") && !(sp == SizeSpec::any())) fail(id + " takes no size spec");
            expect('(');
            ExprPtr c = expr();
            expect(')');
            if (id == "Set") return ex::set(sp, c);
            if (id == "SetCp") return ex::set_cp(sp, c);
            if (id == "SetSCp") return ex::set_scp(sp, c);
            if (id == "Seq") return ex::seq(c);
            return ex::cyc(c);
        }
        if (std::isdigit(static_cast<unsigned char>(id[0]))) {
            p_ = at;
            fail("unexpected number");
        }
        return ex::ref(id);
    }

    std::string_view s_;
    int line_;
    std::size_t p_ = 0;
};

}  // namespace

ClassSystem ClassSystem::parse(std::string_view text) {
    ClassSystem sys;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) continue;
        line = line.substr(b);
        bool pointed = false;
        if (line.rfind("pointed", 0) == 0 && line.size() > 7 && std::isspace(static_cast<unsigned char>(line[7]))) {
            pointed = true;
            line = line.substr(8);
        }
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw grammar_error("line " + std::to_string(lineno) + ": expected 'Name = expression'");
        std::string name(line.substr(0, eq));
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.erase(name.begin());
        if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            }) || std::isdigit(static_cast<unsigned char>(name[0])) || name == "Z" || name == "Zp")
            throw grammar_error("line " + std::to_string(lineno) + ": bad class name '" + name + "'");
        Parser p(line.substr(eq + 1), lineno);
        sys.define(name, p.parse_all(), pointed);
    }
    sys.validate();
    return sys;
}

void ClassSystem::define(const std::string& name, ExprPtr expr, bool pointed) {
    if (has(name)) throw grammar_error("class '" + name + "' defined twice");
    index_[name] = static_cast<int>(defs_.size());
    defs_.push_back({name, std::move(expr), pointed, false});
}

const ClassDef& ClassSystem::def(const std::string& name) const { return defs_.at(index(name)); }

int ClassSystem::index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw grammar_error("unknown class '" + name + "'");
    return it->second;
}

std::vector<std::string> ClassSystem::names() const {
    std::vector<std::string> out;
    for (const auto& d : defs_) out.push_back(d.name);
    return out;
}

namespace {

// 0 plain, 1 pointed, 2 zero (compatible with both)
int pointedness(const Expr& e, const ClassSystem& sys) {
    switch (e.op) {
    case Op::eps:
    case Op::atom: return 0;
    case Op::patom: return 1;
    case Op::ref:
        if (sys.has(e.ref)) return sys.def(e.ref).pointed ? 1 : 0;
        if (is_pointed_name(e.ref) && sys.has(base_name(e.ref)) && !sys.def(base_name(e.ref)).pointed) return 1;
        throw grammar_error("unresolved reference '" + e.ref + "'");
    case Op::uni: {
        int r = 2;
        for (const auto& k : e.kids) {
            int p = pointedness(*k, sys);
            if (p == 2) continue;
            if (r != 2 && r != p) throw grammar_error("union mixes pointed and plain terms: " + to_string(e));
            r = p;
        }
        return r;
    }
    case Op::prod: {
        int n = 0;
        for (const auto& k : e.kids) {
            int p = pointedness(*k, sys);
            if (p == 2) return 2;
            n += p;
        }
        if (n > 1) throw grammar_error("product with more than one pointed factor: " + to_string(e));
        return n;
    }
    case Op::set:
    case Op::seq:
    case Op::cyc:
    case Op::set_cp:
    case Op::set_scp: {
        int p = pointedness(e.child(), sys);
        if (p == 1) throw grammar_error("pointed argument under a set constructor: " + to_string(e));
        if (e.op == Op::set_cp || e.op == Op::set_scp) return 1;
        return 0;
    }
    }
    return 0;
}

}  // namespace

bool ClassSystem::is_pointed(const Expr& e) const { return pointedness(e, *this) == 1; }

void ClassSystem::validate() const {
    for (const auto& d : defs_) {
        int p = pointedness(*d.expr, *this);
        if (p != 2 && (p == 1) != d.pointed)
            throw grammar_error("class '" + d.name + "' is declared " + (d.pointed ? "pointed" : "plain") +
                                " but its definition is " + (p ? "pointed" : "plain"));
    }
}

ExprPtr point(const ExprPtr& e) {
    switch (e->op) {
    case Op::eps: return ex::zero();
    case Op::atom: return ex::patom();
    case Op::ref:
        if (is_pointed_name(e->ref)) throw grammar_error("cannot point the pointed class " + e->ref);
        return ex::ref(pointed_name(e->ref));
    case Op::uni: {
        std::vector<ExprPtr> ks;
        for (const auto& k : e->kids) {
            ExprPtr p = point(k);
            if (!is_zero_expr(*p)) ks.push_back(p);
        }
        return ks.empty() ? ex::zero() : ex::uni(std::move(ks));
    }
    case Op::prod: {
        std::vector<ExprPtr> terms;
        for (std::size_t i = 0; i < e->kids.size(); ++i) {
            ExprPtr p = point(e->kids[i]);
            if (is_zero_expr(*p)) continue;
            std::vector<ExprPtr> fs = e->kids;
            fs[i] = p;
            terms.push_back(ex::prod(std::move(fs)));
        }
        return terms.empty() ? ex::zero() : ex::uni(std::move(terms));
    }
    case Op::set:
        if (e->spec.kind == SizeSpec::Kind::exactly && e->spec.values[0] == 0) return ex::zero();
        return ex::set_cp(e->spec, e->kids[0]);
    case Op::seq:
    case Op::cyc: throw grammar_error("pointing is not defined for Seq/Cyc: " + to_string(*e));
    case Op::patom:
    case Op::set_cp:
    case Op::set_scp: throw grammar_error("expression is already pointed: " + to_string(*e));
    }
    return ex::zero();
}

namespace {

void collect_refs(const Expr& e, std::set<std::string>& out, bool through_pointing) {
    if (e.op == Op::ref) {
        out.insert(e.ref);
        return;
    }
    if (through_pointing && (e.op == Op::set_cp || e.op == Op::set_scp)) {
        collect_refs(*point(e.kids[0]), out, true);
    }
    for (const auto& k : e.kids) collect_refs(*k, out, through_pointing);
}

}  // namespace

std::vector<std::string> pointed_refs(const Expr& e) {
    std::set<std::string> refs;
    collect_refs(e, refs, true);
    std::vector<std::string> out;
    for (const auto& r : refs)
        if (is_pointed_name(r)) out.push_back(r);
    return out;
}

ClassSystem ClassSystem::point_closure() const {
    ClassSystem out = *this;
    std::vector<std::string> todo;
    for (const auto& d : defs_)
        for (auto& r : pointed_refs(*d.expr)) todo.push_back(r);
    while (!todo.empty()) {
        std::string n = todo.back();
        todo.pop_back();
        if (out.has(n)) continue;
        const std::string b = base_name(n);
        if (!out.has(b) || out.def(b).pointed) throw grammar_error("cannot derive pointed class " + n);
        ExprPtr pe = point(out.def(b).expr);
        out.index_[n] = static_cast<int>(out.defs_.size());
        out.defs_.push_back({n, pe, true, true});
        std::set<std::string> refs;
        collect_refs(*pe, refs, true);
        for (const auto& r : refs)
            if (is_pointed_name(r) && !out.has(r)) todo.push_back(r);
    }
    out.validate();
    return out;
}

std::string ClassSystem::str() const {
    std::string s;
    for (const auto& d : defs_) s += (d.pointed ? "pointed " : "") + d.name + " = " + to_string(*d.expr) + "\n";
    return s;
}

// ------------------------------------------------------------ cycle index

namespace {

void partitions(int rest, int maxpart, std::vector<int>& counts, const std::function<void()>& emit) {
    if (rest == 0) {
        emit();
        return;
    }
    for (int i = std::min(rest, maxpart); i >= 1; --i) {
        ++counts[i];
        partitions(rest - i, i, counts, emit);
        --counts[i];
    }
}

mpq_class symmetry_weight(const std::vector<int>& counts) {
    mpz_class den = 1;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        for (int j = 0; j < counts[i]; ++j) den *= static_cast<unsigned long>(i);
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), counts[i]);
        den *= f;
    }
    return mpq_class(1, den);
}

}  // namespace

std::vector<CycleTerm> cycle_index_terms(const SizeSpec& spec, bool symmetric, bool pointed, int k_max) {
    if (!spec.bounded()) throw grammar_error("cycle_index_terms needs a bounded size spec");
    if (spec.max_size() > k_max)
        throw grammar_error("set size " + std::to_string(spec.max_size()) + " exceeds k_max " + std::to_string(k_max));
    std::vector<CycleTerm> out;
    for (int k : spec.values) {
        const int lmin = !pointed ? 0 : (symmetric ? 2 : 1);
        const int lmax = pointed ? k : 0;
        for (int ell = lmin; ell <= lmax; ++ell) {
            std::vector<int> counts(k + 1, 0);
            partitions(k - ell, k - ell, counts, [&] {
                CycleTerm t;
                t.k = k;
                t.coeff = symmetry_weight(counts);
                t.counts = counts;
                t.ell = ell;
                out.push_back(std::move(t));
            });
        }
    }
    return out;
}

// ----------------------------------------------------------- transfer rules

namespace {

Series exp_of_sum(const Series& c) {
    const int n = c.order();
    Series sum(n);
    for (int i = 1; i <= n; ++i) sum = sum + scale(pleth(c, i), mpq_class(1, i));
    return exp_series(sum);
}

// Z_0..Z_kmax evaluated at s_i = c(z^i), by m Z_m = sum_i s_i Z_{m-i}.
std::vector<Series> exact_sets(const Series& c, int kmax) {
    const int n = c.order();
    std::vector<Series> z{Series::one(n)};
    for (int m = 1; m <= kmax; ++m) {
        Series acc(n);
        for (int i = 1; i <= m; ++i) acc = acc + pleth(c, i) * z[m - i];
        z.push_back(scale(acc, mpq_class(1, m)));
    }
    return z;
}

// Z_{SetCp_m} = sum_{l>=lmin} t_l Z_{Set_{m-l}}
std::vector<Series> exact_pointed_sets(const Series& c, const Series& cp, int kmax, int lmin) {
    const int n = c.order();
    std::vector<Series> z = exact_sets(c, kmax);
    std::vector<Series> out;
    for (int m = 0; m <= kmax; ++m) {
        Series acc(n);
        for (int l = lmin; l <= m; ++l) acc = acc + pleth(cp, l) * z[m - l];
        out.push_back(std::move(acc));
    }
    return out;
}

void require_no_constant(const Series& c, const Expr& e) {
    if (sgn(c[0]) != 0) throw domain_error("argument of " + to_string(e) + " contains the empty object");
}

}  // namespace

Series ogf_of(const Expr& e, const SeriesMap& env, int order) {
    const int n = order;
    switch (e.op) {
    case Op::eps: return Series::one(n);
    case Op::atom:
    case Op::patom: return Series::monomial(n, 1);
    case Op::ref: {
        if (auto it = env.find(e.ref); it != env.end()) return it->second.truncate(n);
        if (is_pointed_name(e.ref)) {
            if (auto it = env.find(base_name(e.ref)); it != env.end()) return z_derive(it->second.truncate(n));
        }
        throw grammar_error("unresolved reference '" + e.ref + "'");
    }
    case Op::uni: {
        Series r(n);
        for (const auto& k : e.kids) r = r + ogf_of(*k, env, n);
        return r;
    }
    case Op::prod: {
        Series r = Series::one(n);
        for (const auto& k : e.kids) r = r * ogf_of(*k, env, n);
        return r;
    }
    case Op::seq: {
        Series c = ogf_of(e.child(), env, n);
        require_no_constant(c, e);
        return inverse(Series::one(n) - c);
    }
    case Op::cyc: {
        Series c = ogf_of(e.child(), env, n);
        require_no_constant(c, e);
        Series r(n);
        for (int k = 1; k <= n; ++k) {
            long phi = 0;
            for (int j = 1; j <= k; ++j)
                if (std::gcd(j, k) == 1) ++phi;
            Series lg = log_series(inverse(Series::one(n) - pleth(c, k)));
            r = r + scale(lg, mpq_class(phi, k));
        }
        return r;
    }
    case Op::set: {
        Series c = ogf_of(e.child(), env, n);
        require_no_constant(c, e);
        const SizeSpec& sp = e.spec;
        if (sp.kind == SizeSpec::Kind::at_least) {
            Series r = exp_of_sum(c);
            std::vector<Series> z = exact_sets(c, sp.values[0]);
            for (int m = 0; m < sp.values[0]; ++m) r = r - z[m];
            return r;
        }
        std::vector<Series> z = exact_sets(c, sp.max_size());
        Series r(n);
        for (int k : sp.values) r = r + z[k];
        return r;
    }
    case Op::set_cp:
    case Op::set_scp: {
        const int lmin = e.op == Op::set_cp ? 1 : 2;
        Series c = ogf_of(e.child(), env, n);
        require_no_constant(c, e);
        Series cp = ogf_of(*point(e.kids[0]), env, n);
        const SizeSpec& sp = e.spec;
        if (sp.kind == SizeSpec::Kind::at_least) {
            Series tsum(n);
            for (int l = lmin; l <= n; ++l) tsum = tsum + pleth(cp, l);
            Series r = tsum * exp_of_sum(c);
            std::vector<Series> zp = exact_pointed_sets(c, cp, sp.values[0], lmin);
            for (int m = 0; m < sp.values[0]; ++m) r = r - zp[m];
            return r;
        }
        std::vector<Series> zp = exact_pointed_sets(c, cp, sp.max_size(), lmin);
        Series r(n);
        for (int k : sp.values) r = r + zp[k];
        return r;
    }
    }
    return Series(n);
}

SeriesMap solve_kleene(const ClassSystem& sys, int order, SolveStats* stats) {
    sys.validate();
    std::vector<std::string> names = sys.names();
    return solve_system(
        names,
        [&](const SeriesMap& env) {
            SeriesMap out;
            for (const auto& d : sys.defs()) out.emplace(d.name, ogf_of(*d.expr, env, order));
            return out;
        },
        order, -1, stats);
}

}  // namespace cyclept

#pragma once

#include "cyclept/series.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cyclept {

struct grammar_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeSpec {
    enum class Kind { exactly, at_least, finite };
    Kind kind = Kind::at_least;
    std::vector<int> values{0};  // single value for exactly / at_least

    static SizeSpec any() { return {Kind::at_least, {0}}; }
    static SizeSpec exactly(int k);
    static SizeSpec at_least(int k);
    static SizeSpec finite(std::vector<int> ks);

    bool bounded() const { return kind != Kind::at_least; }
    int min_size() const { return values.front(); }
    int max_size() const { return values.back(); }  // meaningful only when bounded
    bool contains(int k) const;
    std::string str() const;  // "", "{3}", "{>=2}", "{1,3,4}"

    friend bool operator==(const SizeSpec&, const SizeSpec&) = default;
};

enum class Op { eps, atom, patom, uni, prod, set, set_cp, set_scp, seq, cyc, ref };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    Op op;
    std::vector<ExprPtr> kids;
    SizeSpec spec;
    std::string ref;

    const Expr& child() const { return *kids.at(0); }
};

namespace ex {
ExprPtr eps();
ExprPtr zero();  // empty union
ExprPtr atom();
ExprPtr patom();
ExprPtr ref(std::string name);
ExprPtr uni(std::vector<ExprPtr> kids);
ExprPtr prod(std::vector<ExprPtr> kids);
ExprPtr set(SizeSpec spec, ExprPtr child);
ExprPtr set_cp(SizeSpec spec, ExprPtr child);
ExprPtr set_scp(SizeSpec spec, ExprPtr child);
ExprPtr seq(ExprPtr child);
ExprPtr cyc(ExprPtr child);
}  // namespace ex

std::string to_string(const Expr& e);

// Name of the class X° obtained by pointing the plain class X.
std::string pointed_name(const std::string& plain);
bool is_pointed_name(const std::string& name);
std::string base_name(const std::string& name);

struct ClassDef {
    std::string name;
    ExprPtr expr;
    bool pointed = false;
    bool derived = false;  // introduced by point_closure
};

class ClassSystem {
public:
    // One definition per line: `[pointed] Name = expr`; '#' starts a comment.
    static ClassSystem parse(std::string_view text);

    void define(const std::string& name, ExprPtr expr, bool pointed = false);

    bool has(const std::string& name) const { return index_.count(name) != 0; }
    const ClassDef& def(const std::string& name) const;
    int index(const std::string& name) const;
    const std::vector<ClassDef>& defs() const { return defs_; }
    std::vector<std::string> names() const;

    // Reference resolution and pointedness consistency; throws grammar_error.
    void validate() const;

    // Pointedness of an expression in this system; throws grammar_error when a
    // product has two pointed factors, a union mixes pointed and plain branches,
    // or a plain set constructor is applied to a pointed child.
    bool is_pointed(const Expr& e) const;

    // Adds X° := point(def X) for every class X reached through pointing.
    ClassSystem point_closure() const;

    std::string str() const;

private:
    std::vector<ClassDef> defs_;
    std::map<std::string, int> index_;
};

// Mechanical pointing: (A+B)° = A°+B°, (A×B)° = A°×B + A×B°,
// Set_spec(C)° = SetCp_spec ⊛ C, Z° = Zp, X° = ref(pointed_name(X)).
ExprPtr point(const ExprPtr& e);

// Pointed classes referenced by point(e) (transitively through definitions).
std::vector<std::string> pointed_refs(const Expr& e);

struct CycleTerm {
    int k = 0;                 // total size
    mpq_class coeff;           // 1 / prod(i^{n_i} n_i!)
    std::vector<int> counts;   // counts[i] = n_i, i in 1..k (index 0 unused)
    int ell = 0;               // marked cycle length, 0 when unpointed
};

std::vector<CycleTerm> cycle_index_terms(const SizeSpec& spec, bool symmetric, bool pointed,
                                         int k_max = 16);

// Closed transfer-rule evaluation. Refs to X° absent from env evaluate to z·X'(z).
Series ogf_of(const Expr& e, const SeriesMap& env, int order);

// Kleene iteration over ogf_of.
SeriesMap solve_kleene(const ClassSystem& sys, int order, SolveStats* stats = nullptr);

// Coefficient-by-coefficient solver with integer arithmetic. Handles every
// constructor except Cyc; pointed classes X° that are not defined in the system
// are computed as n·X_n.
std::map<std::string, std::vector<mpz_class>> solve_online(const ClassSystem& sys, int order,
                                                           const std::vector<std::string>& extra = {});

// solve_online when possible, Kleene otherwise; integer-valued result.
std::map<std::string, std::vector<mpz_class>> solve(const ClassSystem& sys, int order);

}  // namespace cyclept

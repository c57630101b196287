#pragma once

#include "cyclept/enumerator.hpp"
#include "cyclept/oracle.hpp"
#include "cyclept/randgen.hpp"
#include "cyclept/splittree.hpp"

#include <array>
#include <memory>
#include <optional>
#include <unordered_map>

namespace cyclept {

struct CenterResult {
    enum class Kind { vertex, edge };
    Kind kind = Kind::vertex;
    int a = -1, b = -1;  // the vertex, or the edge with a < b

    static CenterResult vertex(int v) { return {Kind::vertex, v, -1}; }
    static CenterResult edge(int u, int v) { return {Kind::edge, std::min(u, v), std::max(u, v)}; }
    friend bool operator==(const CenterResult&, const CenterResult&) = default;
};

// Repeated leaf peeling with a FIFO queue.
CenterResult tree_center(const std::vector<std::vector<int>>& adj);

struct Tree {
    std::vector<std::vector<int>> adj;

    int size() const { return static_cast<int>(adj.size()); }
    int add_vertex();
    void connect(int a, int b);
};

// Connected, acyclic, every degree in {1,3,4} (the single edge has two leaves).
bool is_23_tree(const Tree& t);

struct Structure {
    ClassId cls = ClassId::two_three_trees;
    Tree tree;        // 2-3 trees
    SplitTree split;  // DH and 3LP
    int case_index = 0;

    int size() const { return cls == ClassId::two_three_trees ? tree.size() : split.leaf_count(); }
};

// The marked cycle lists vertex ids (2-3 trees) or leaf node ids (split trees).
struct PointedStructure {
    Structure structure;
    std::vector<int> cycle;
};

inline Structure unpoint_sample(const PointedStructure& p) { return p.structure; }

bool validate_structure(const Structure& s);

struct SamplerOptions {
    int order = 0;        // oracle depth; 0 picks one from z
    unsigned digits = 30;
    long max_size = 0;    // give up on a draw once it exceeds this size (0: never)
    SetOptions set;
};

// Boltzmann samplers for 2-3 trees, following the DRAW tables case by case.
class TwoThreeSampler {
public:
    TwoThreeSampler(const Real& z, const SamplerOptions& opt = {});

    const Real& z() const { return z_; }
    int order() const { return order_; }

    std::array<double, 6> weights_S(int j);
    std::array<double, 12> weights_S_pointed(int j);
    std::array<double, 16> weights_T_pointed();

    std::optional<Tree> sample_S(Rng& rng);
    std::optional<PointedStructure> sample_S_pointed(Rng& rng);
    std::optional<PointedStructure> sample_pointed(Rng& rng);

    struct DissymmetryDraw {
        Structure structure;
        int iterations = 0;
    };
    std::optional<DissymmetryDraw> sample_dissymmetry(Rng& rng);

    // Value of T^• and T^{•-•} at z.
    double vertex_rooted_value() const { return tv_; }
    double edge_rooted_value() const { return te_; }

private:
    struct Abort {};
    double S(int j);
    double Sp(int j);  // z^j S'(z^j)
    int new_vertex(Tree& t, std::vector<int>& parent, int p);
    void grow_S(Tree& t, std::vector<int>& parent, int v, int j, Rng& rng);
    void grow_children(Tree& t, std::vector<int>& parent, int v, const PartitionDraw& d, int j, Rng& rng);
    std::vector<int> copy_subtree(Tree& t, std::vector<int>& parent, int src, int p);
    std::pair<int, std::vector<int>> grow_S_pointed(Tree& t, std::vector<int>& parent, int p, int j, Rng& rng);
    void attach_copies(Tree& t, std::vector<int>& parent, int v, int root, int ell, std::vector<int>& cycle);

    Real z_;
    int order_;
    unsigned digits_;
    long max_size_;
    Oracle s_;
    double tv_ = 0, te_ = 0;
    std::unordered_map<int, double> s_cache_, sp_cache_;
};

// Derivation tree of a grammar-driven draw.
struct Derivation {
    struct Node {
        const Expr* expr = nullptr;
        int exponent = 1;
        int atom = -1;
        int choice = -1;       // union: chosen branch
        int pointed_kid = -1;  // union / product / ref: the kid carrying the marked cycle
        int mark_first = -1;   // pointed sets: kids[mark_first, mark_first + mark_count) are marked copies
        int mark_count = 0;
        std::vector<int> kids;
    };
    std::vector<Node> nodes;
    int root = -1;
    int atoms = 0;

    std::vector<int> cycle() const;
    // Atoms and references reached without crossing a reference, in order.
    std::vector<int> items(int node) const;
};

// Pólya-Boltzmann sampler for any class of a (pointing-closed) system, driven by
// oracle values of the class series at powers of z. Derivations point into the
// sampler's expressions and must not outlive it.
class GrammarSampler {
public:
    GrammarSampler(const ClassSystem& sys, const SeriesMap& series, const Real& z, unsigned digits = 30);

    std::optional<Derivation> sample(const std::string& cls, Rng& rng, long max_atoms = 0,
                                     const SetOptions& opt = {});

    // Builds every table a draw of `cls` can reach.
    void prepare(const std::string& cls);
    double value(const Expr& e, int j);
    double value(const std::string& cls, int j);
    const ClassSystem& system() const { return sys_; }
    const Real& z() const { return z_; }

private:
    struct Tables {
        CycleWeights s, t;
        std::vector<CycleTerm> terms;
    };
    struct KeyHash {
        std::size_t operator()(const std::pair<const Expr*, int>& k) const {
            return std::hash<const void*>()(k.first) * 31 + static_cast<std::size_t>(k.second);
        }
    };
    const Tables& tables(const Expr& e, int j);
    const Expr& pointed_child(const Expr& e);
    bool pointed(const Expr& e);
    double set_value(const Expr& e, int j);
    const Real& zpow(int j);

    ClassSystem sys_;
    Real z_;
    unsigned digits_;
    std::map<std::string, Oracle> oracles_;
    std::map<int, Real> zpow_;
    std::unordered_map<std::pair<const Expr*, int>, double, KeyHash> values_;
    std::unordered_map<std::pair<const Expr*, int>, Tables, KeyHash> tables_;
    std::unordered_map<const Expr*, ExprPtr> pointed_child_;
    std::unordered_map<const Expr*, bool> pointed_;
    std::map<std::string, ExprPtr> root_refs_;
};

// Common face of the class samplers.
class Sampler {
public:
    virtual ~Sampler() = default;
    virtual ClassId cls() const = 0;
    virtual const Real& z() const = 0;
    virtual std::optional<PointedStructure> sample_pointed(Rng& rng) = 0;
    std::optional<Structure> sample(Rng& rng);
};

// DH or 3LP: grammar draw of the seven-case pointed class, assembled into a split tree.
class SplitSampler : public Sampler {
public:
    SplitSampler(ClassId id, const Real& z, const SamplerOptions& opt = {});
    ClassId cls() const override { return id_; }
    const Real& z() const override { return engine_->z(); }
    std::optional<PointedStructure> sample_pointed(Rng& rng) override;
    // Probability weights of the seven cases at z.
    std::array<double, 7> case_weights();
    GrammarSampler& engine() { return *engine_; }

private:
    ClassId id_;
    SamplerOptions opt_;
    std::unique_ptr<GrammarSampler> engine_;
};

class TwoThreePointedSampler : public Sampler {
public:
    TwoThreePointedSampler(const Real& z, const SamplerOptions& opt = {}) : s_(z, opt) {}
    ClassId cls() const override { return ClassId::two_three_trees; }
    const Real& z() const override { return s_.z(); }
    std::optional<PointedStructure> sample_pointed(Rng& rng) override { return s_.sample_pointed(rng); }
    TwoThreeSampler& inner() { return s_; }

private:
    TwoThreeSampler s_;
};

// Split tree of a derivation of DH_cp / TLP_cp (the top class of the catalog entry).
PointedStructure derivation_to_split_tree(ClassId id, const Derivation& d);

// Estimate of the radius of convergence (Domb-Sykes on the unpointed series).
double radius_estimate(ClassId id, int depth);
// z for singular sampling: the depth-2000 estimate.
double singular_z(ClassId id);
// Oracle depth used when SamplerOptions::order is 0.
int sampling_order(ClassId id, const Real& z, unsigned digits = 30);

std::unique_ptr<Sampler> make_sampler(ClassId id, const Real& z, const SamplerOptions& opt = {});

}  // namespace cyclept

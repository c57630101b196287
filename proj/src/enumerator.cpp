#include "cyclept/enumerator.hpp"

#include <mutex>
#include <tuple>

namespace cyclept {

namespace {

const std::string kTwoThree = R"(# 2-3 trees: vertex degrees in {1,3,4}
S = Z + Z * Set{2,3}(S)
pointed T_cp = Zp * Set{1,3,4}(S) + Z * SetSCp{3,4}(S) + SetSCp{2}(S)
T_v = Z * Set{1,3,4}(S)
T_e = Set{2}(S)
T_d = S * S
)";

// Terms of DH_cp in order: cases 1..7.
const std::string kDH = R"(# distance-hereditary split trees
K = Set{>=2}(Z + SC + SX)
SC = Set{>=2}(Z + K + SX)
SX = (Z + K + SC) * Set{>=1}(Z + K + SX)
pointed DH_cp = Zp + SetCp{2}(Z) + Zp * (SX + SC + K) + SetSCp{2}(SX) + SetSCp{2}(SC) + SetSCp{>=3}(Z + SX + SC) + (Z + K + SC) * SetSCp(Z + K + SX)
)";

const std::string kTLP = R"(# three-leaf power split trees
A = Set{>=1}(Z)
SX = A * Set{>=1}(A + SX)
SC = Set{>=2}(A + SX)
pointed TLP_cp = Zp + SetCp{2}(Z) + Zp * (SX + SC + A * (SX + SC) + Set{>=2}(Z)) + SetSCp{2}(SX) + A * SetSCp(SX + A) + SetSCp{>=3}(Z) + (SX + SC) * SetSCp(Z)
)";

CatalogEntry make(ClassId id) {
    CatalogEntry e{id, class_id_name(id), {}, ClassSystem::parse(catalog_grammar(id)), {}, std::nullopt};
    switch (id) {
    case ClassId::two_three_trees:
        e.top = "T_cp";
        e.aux = {"S"};
        e.rooted = std::map<std::string, std::string>{{"vertex", "T_v"}, {"edge", "T_e"}, {"directed_edge", "T_d"}};
        break;
    case ClassId::dh:
        e.top = "DH_cp";
        e.aux = {"SX", "SC", "K"};
        break;
    case ClassId::tlp:
        e.top = "TLP_cp";
        e.aux = {"SX", "SC", "A"};
        break;
    }
    return e;
}

}  // namespace

ClassId parse_class_id(const std::string& s) {
    if (s == "23t") return ClassId::two_three_trees;
    if (s == "dh") return ClassId::dh;
    if (s == "tlp" || s == "3lp") return ClassId::tlp;
    throw precondition_error("unknown class '" + s + "' (expected 23t, dh or tlp)");
}

std::string class_id_name(ClassId id) {
    switch (id) {
    case ClassId::two_three_trees: return "23t";
    case ClassId::dh: return "dh";
    case ClassId::tlp: return "tlp";
    }
    return "?";
}

const std::string& catalog_grammar(ClassId id) {
    switch (id) {
    case ClassId::two_three_trees: return kTwoThree;
    case ClassId::dh: return kDH;
    default: return kTLP;
    }
}

const CatalogEntry& catalog(ClassId id) {
    static const CatalogEntry t = make(ClassId::two_three_trees);
    static const CatalogEntry d = make(ClassId::dh);
    static const CatalogEntry l = make(ClassId::tlp);
    switch (id) {
    case ClassId::two_three_trees: return t;
    case ClassId::dh: return d;
    default: return l;
    }
}

SeriesMap enumerate_all(const CatalogEntry& entry, int order, const std::vector<std::string>& extra) {
    if (order < 1) throw precondition_error("order must be >= 1");
    using Key = std::pair<std::string, std::vector<std::string>>;
    static std::mutex mu;
    static std::map<Key, SeriesMap> cache;
    Key key{entry.system.str(), extra};
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end() && it->second.begin()->second.order() >= order) {
            SeriesMap out;
            for (auto& [name, s] : it->second) out.emplace(name, s.truncate(order));
            return out;
        }
    }
    SeriesMap out;
    for (auto& [name, v] : solve_online(entry.system, order, extra)) out.emplace(name, Series::from_integers(order, v));
    std::lock_guard lock(mu);
    auto& slot = cache[key];
    if (slot.empty() || slot.begin()->second.order() < order) slot = out;
    return out;
}

Series enumerate_pointed(const CatalogEntry& entry, int order) { return enumerate_all(entry, order).at(entry.top); }

Series unpoint(const Series& pointed) {
    Series r(pointed.order());
    for (int n = 1; n <= pointed.order(); ++n) {
        const mpq_class& a = pointed[n];
        if (a.get_den() != 1 || !mpz_divisible_ui_p(a.get_num().get_mpz_t(), n))
            throw integrity_error("pointed coefficient " + a.get_str() + " at n=" + std::to_string(n) +
                                  " is not divisible by n");
        r[n] = a / n;
    }
    return r;
}

Series enumerate_dissymmetry(const CatalogEntry& entry, int order) {
    if (!entry.rooted) throw precondition_error("catalog entry " + entry.name + " has no rooted variants");
    SeriesMap all = enumerate_all(entry, order);
    const auto& r = *entry.rooted;
    return all.at(r.at("vertex")) + all.at(r.at("edge")) - all.at(r.at("directed_edge"));
}

}  // namespace cyclept

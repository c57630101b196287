#pragma once

#include "cyclept/grammar.hpp"

#include <optional>

namespace cyclept {

enum class ClassId { two_three_trees, dh, tlp };

ClassId parse_class_id(const std::string& s);  // "23t" | "dh" | "tlp"
std::string class_id_name(ClassId id);

struct CatalogEntry {
    ClassId id;
    std::string name;
    std::string top;          // pointed top class
    ClassSystem system;       // auxiliary plain classes + pointed top class
    std::vector<std::string> aux;  // plain auxiliary classes, paper order
    // Rooted variants for the dissymmetry theorem (2-3 trees only).
    std::optional<std::map<std::string, std::string>> rooted;  // vertex|edge|directed_edge -> class
};

const std::string& catalog_grammar(ClassId id);
const CatalogEntry& catalog(ClassId id);

// OGF of the cycle-pointed class to order N.
Series enumerate_pointed(const CatalogEntry& entry, int order);

// A_n = A°_n / n
Series unpoint(const Series& pointed);

// T^• + T^{•-•} − T^{•→•}
Series enumerate_dissymmetry(const CatalogEntry& entry, int order);

// Series of every class in the catalog system (plus requested derived pointed classes).
SeriesMap enumerate_all(const CatalogEntry& entry, int order, const std::vector<std::string>& extra = {});

}  // namespace cyclept

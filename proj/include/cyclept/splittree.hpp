#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cyclept {

struct split_syntax_error : std::runtime_error {
    split_syntax_error(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

enum class NodeKind { leaf, clique, star };

struct SplitNode {
    NodeKind kind = NodeKind::leaf;
    std::vector<int> adj;  // neighbouring tree nodes, one per marker vertex
    int center = -1;       // star only: the neighbour bound to the center marker
};

class SplitTree {
public:
    struct Root {
        enum class Kind { none, node, edge };
        Kind kind = Kind::none;
        int a = -1, b = -1;
    };

    int add_leaf() { return add(NodeKind::leaf); }
    int add_clique() { return add(NodeKind::clique); }
    int add_star() { return add(NodeKind::star); }
    void connect(int a, int b);
    void set_center(int star, int neighbour);
    void set_root_node(int v) { root_ = {Root::Kind::node, v, -1}; }
    void set_root_edge(int a, int b) { root_ = {Root::Kind::edge, a, b}; }

    const std::vector<SplitNode>& nodes() const { return nodes_; }
    const SplitNode& node(int v) const { return nodes_.at(v); }
    const Root& root() const { return root_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int leaf_count() const;
    int clique_count() const;
    int star_count() const;
    bool empty() const { return nodes_.empty(); }

    // Star marker adjacency: two markers of a star are adjacent iff one is the center.
    bool passes(int v, int from, int to) const;

private:
    int add(NodeKind k);
    std::vector<SplitNode> nodes_;
    Root root_;
};

// Split-tree strings: Z, KR(..), SR(center, ..), K(..), SX(center, ..), SC(..), e(A, B).
SplitTree parse_split_tree(std::string_view s);
std::string print(const SplitTree& t);

// Leaf node ids in the order the printer emits them; vertex i+1 of the original graph.
std::vector<int> leaf_order(const SplitTree& t);

// Isomorphism invariant (rooted at the tree center, children sorted).
std::string canonical_form(const SplitTree& t);
inline bool isomorphic(const SplitTree& a, const SplitTree& b) { return canonical_form(a) == canonical_form(b); }

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // 1-based, u < v, sorted

    std::vector<std::vector<bool>> matrix() const;  // 0-based
    std::vector<std::vector<int>> adjacency() const;
    bool connected() const;
};

Graph make_graph(int n, std::vector<std::pair<int, int>> edges);
Graph original_graph(const SplitTree& t);

std::string graph_json(const Graph& g);
std::string graph_dot(const Graph& g);
std::string split_tree_dot(const SplitTree& t);

struct Validation {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

Validation validate_dh(const SplitTree& t);
Validation validate_3lp(const SplitTree& t);

// Every connected induced subgraph preserves distances (exhaustive, n <= max_n).
bool is_distance_hereditary(const Graph& g, int max_n = 10);

}  // namespace cyclept

#include "cyclept/splittree.hpp"

#include "cyclept/samplers.hpp"
#include "cyclept/series.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace cyclept {

int SplitTree::add(NodeKind k) {
    nodes_.push_back(SplitNode{k, {}, -1});
    return static_cast<int>(nodes_.size()) - 1;
}

void SplitTree::connect(int a, int b) {
    if (a == b) throw precondition_error("split tree: self loop");
    nodes_.at(a).adj.push_back(b);
    nodes_.at(b).adj.push_back(a);
}

void SplitTree::set_center(int star, int neighbour) {
    auto& s = nodes_.at(star);
    if (s.kind != NodeKind::star) throw precondition_error("split tree: center of a non-star node");
    s.center = neighbour;
}

int SplitTree::leaf_count() const {
    return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                          [](const SplitNode& n) { return n.kind == NodeKind::leaf; }));
}
int SplitTree::clique_count() const {
    return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                          [](const SplitNode& n) { return n.kind == NodeKind::clique; }));
}
int SplitTree::star_count() const {
    return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                          [](const SplitNode& n) { return n.kind == NodeKind::star; }));
}

bool SplitTree::passes(int v, int from, int to) const {
    const auto& n = nodes_[v];
    if (n.kind == NodeKind::clique) return true;
    if (n.kind == NodeKind::star) return from == n.center || to == n.center;
    return false;
}

// ------------------------------------------------------------------ parser

namespace {

enum class Tok { Z, K, KR, SR, SX, SC, E };

struct Frame {
    Tok tok;
    int node;
    std::size_t pos;
    std::vector<std::pair<int, Tok>> kids;
};

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    SplitTree run() {
        bool want_item = true;
        for (;;) {
            skip();
            if (want_item) {
                const std::size_t at = p_;
                Tok tok = ident();
                check_context(tok, at);
                int node = make_node(tok);
                skip();
                if (p_ < s_.size() && s_[p_] == '(') {
                    if (tok == Tok::Z && !stack_.empty())
                        throw split_syntax_error("only the root leaf has a neighbour list", at);
                    ++p_;
                    stack_.push_back(Frame{tok, node, at, {}});
                    continue;
                }
                if (tok != Tok::Z) throw split_syntax_error("expected '(' after node label", p_);
                if (stack_.empty()) t_.set_root_node(node);
                if (complete(node, tok)) break;
                want_item = false;
                continue;
            }
            if (stack_.empty()) break;
            if (p_ >= s_.size()) throw split_syntax_error("unexpected end of input", p_);
            const char c = s_[p_++];
            if (c == ',') {
                want_item = true;
            } else if (c == ')') {
                Frame f = std::move(stack_.back());
                stack_.pop_back();
                finish(f);
                if (complete(f.node, f.tok)) break;
            } else {
                throw split_syntax_error(std::string("unexpected '") + c + "'", p_ - 1);
            }
        }
        skip();
        if (p_ != s_.size()) throw split_syntax_error("trailing input", p_);
        if (t_.empty()) throw split_syntax_error("empty split tree", 0);
        return std::move(t_);
    }

private:
    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }

    Tok ident() {
        std::size_t b = p_;
        while (p_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[p_]))) ++p_;
        std::string_view w = s_.substr(b, p_ - b);
        if (w == "Z") return Tok::Z;
        if (w == "K") return Tok::K;
        if (w == "KR") return Tok::KR;
        if (w == "SR") return Tok::SR;
        if (w == "SX") return Tok::SX;
        if (w == "SC") return Tok::SC;
        if (w == "e") return Tok::E;
        if (w.empty()) throw split_syntax_error("expected a node label", b);
        throw split_syntax_error("unknown token '" + std::string(w) + "'", b);
    }

    void check_context(Tok tok, std::size_t at) {
        const bool top = stack_.empty();
        if ((tok == Tok::KR || tok == Tok::SR || tok == Tok::E) && !top)
            throw split_syntax_error("root label inside the tree", at);
        if (top && (tok == Tok::K || tok == Tok::SX || tok == Tok::SC))
            throw split_syntax_error("entered node label at the root", at);
    }

    int make_node(Tok tok) {
        switch (tok) {
        case Tok::Z: return t_.add_leaf();
        case Tok::K:
        case Tok::KR: return t_.add_clique();
        case Tok::SR:
        case Tok::SX:
        case Tok::SC: return t_.add_star();
        case Tok::E: return -1;
        }
        return -1;
    }

    // Hands a finished item to its parent frame; true when it was the whole tree.
    bool complete(int node, Tok tok) {
        if (stack_.empty()) return true;
        Frame& f = stack_.back();
        if (f.tok == Tok::Z && !f.kids.empty()) throw split_syntax_error("a leaf has at most one neighbour", p_);
        f.kids.emplace_back(node, tok);
        return false;
    }

    void need(const Frame& f, std::size_t lo, std::size_t hi, const char* what) {
        if (f.kids.size() < lo || f.kids.size() > hi)
            throw split_syntax_error(std::string(what) + " has " + std::to_string(f.kids.size()) +
                                         " neighbours listed (degree below 3 or wrong arity)",
                                     f.pos);
    }

    void attach(int parent, int child, Tok child_tok) {
        t_.connect(parent, child);
        if (child_tok == Tok::SC) t_.set_center(child, parent);
    }

    void finish(const Frame& f) {
        switch (f.tok) {
        case Tok::Z:
            need(f, 1, 1, "Z");
            attach(f.node, f.kids[0].first, f.kids[0].second);
            t_.set_root_node(f.node);
            break;
        case Tok::K:
        case Tok::SC:
        case Tok::SX:
            need(f, 2, SIZE_MAX, f.tok == Tok::K ? "K" : f.tok == Tok::SC ? "SC" : "SX");
            for (auto [k, kt] : f.kids) attach(f.node, k, kt);
            if (f.tok == Tok::SX) t_.set_center(f.node, f.kids[0].first);
            break;
        case Tok::KR:
        case Tok::SR:
            need(f, 3, SIZE_MAX, f.tok == Tok::KR ? "KR" : "SR");
            for (auto [k, kt] : f.kids) attach(f.node, k, kt);
            if (f.tok == Tok::SR) t_.set_center(f.node, f.kids[0].first);
            t_.set_root_node(f.node);
            break;
        case Tok::E: {
            need(f, 2, 2, "e");
            auto [a, at] = f.kids[0];
            auto [b, bt] = f.kids[1];
            t_.connect(a, b);
            if (at == Tok::SC) t_.set_center(a, b);
            if (bt == Tok::SC) t_.set_center(b, a);
            t_.set_root_edge(a, b);
            break;
        }
        }
    }

    std::string_view s_;
    std::size_t p_ = 0;
    std::vector<Frame> stack_;
    SplitTree t_;
};

// Children of v when entered from `from` (-1 at the root), center first for SX/SR.
std::vector<int> children(const SplitTree& t, int v, int from) {
    const auto& n = t.node(v);
    std::vector<int> out;
    if (n.kind == NodeKind::star && from != n.center) out.push_back(n.center);
    for (int w : n.adj)
        if (w != from && !(n.kind == NodeKind::star && from != n.center && w == n.center)) out.push_back(w);
    return out;
}

const char* label(const SplitTree& t, int v, int from) {
    const auto& n = t.node(v);
    switch (n.kind) {
    case NodeKind::leaf: return "Z";
    case NodeKind::clique: return from < 0 ? "KR" : "K";
    case NodeKind::star: return from < 0 ? "SR" : from == n.center ? "SC" : "SX";
    }
    return "?";
}

int default_root(const SplitTree& t) {
    for (int v = 0; v < t.node_count(); ++v)
        if (t.node(v).kind == NodeKind::leaf) return v;
    return 0;
}

// Pre-order walk of the printed form; visit(v, from) is called on entry, close() after children.
template <class Enter, class Sep, class Close>
void walk(const SplitTree& t, int v, int from, Enter&& enter, Sep&& sep, Close&& close) {
    struct Item {
        int v, from;
        std::vector<int> kids;
        std::size_t i;
    };
    std::vector<Item> st;
    st.push_back({v, from, children(t, v, from), 0});
    enter(v, from, !st.back().kids.empty());
    while (!st.empty()) {
        Item& it = st.back();
        if (it.i == it.kids.size()) {
            if (!it.kids.empty()) close();
            st.pop_back();
            continue;
        }
        if (it.i > 0) sep();
        int w = it.kids[it.i++];
        int f = it.v;
        st.push_back({w, f, children(t, w, f), 0});
        enter(w, f, !st.back().kids.empty());
    }
}

}  // namespace

SplitTree parse_split_tree(std::string_view s) { return Parser(s).run(); }

std::string print(const SplitTree& t) {
    if (t.empty()) return "";
    std::string out;
    auto enter = [&](int v, int from, bool has_kids) {
        out += label(t, v, from);
        if (has_kids) out += '(';
    };
    auto sep = [&] { out += ", "; };
    auto close = [&] { out += ')'; };
    const auto& r = t.root();
    if (r.kind == SplitTree::Root::Kind::edge) {
        out += "e(";
        walk(t, r.a, r.b, enter, sep, close);
        out += ", ";
        walk(t, r.b, r.a, enter, sep, close);
        out += ')';
        return out;
    }
    walk(t, r.kind == SplitTree::Root::Kind::node ? r.a : default_root(t), -1, enter, sep, close);
    return out;
}

std::vector<int> leaf_order(const SplitTree& t) {
    std::vector<int> out;
    if (t.empty()) return out;
    auto enter = [&](int v, int, bool) {
        if (t.node(v).kind == NodeKind::leaf) out.push_back(v);
    };
    auto nop = [] {};
    const auto& r = t.root();
    if (r.kind == SplitTree::Root::Kind::edge) {
        walk(t, r.a, r.b, enter, nop, nop);
        walk(t, r.b, r.a, enter, nop, nop);
    } else {
        walk(t, r.kind == SplitTree::Root::Kind::node ? r.a : default_root(t), -1, enter, nop, nop);
    }
    return out;
}

std::string canonical_form(const SplitTree& t) {
    if (t.empty()) return "";
    std::vector<std::vector<int>> adj;
    for (const auto& n : t.nodes()) adj.push_back(n.adj);
    CenterResult c = tree_center(adj);

    auto rooted = [&](int root, int parent) {
        std::vector<int> order{root}, par(t.node_count(), -2);
        par[root] = parent;
        for (std::size_t i = 0; i < order.size(); ++i)
            for (int w : adj[order[i]])
                if (w != par[order[i]] && par[w] == -2) {
                    par[w] = order[i];
                    order.push_back(w);
                }
        std::vector<std::string> code(t.node_count());
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int v = *it;
            const auto& n = t.node(v);
            std::vector<std::string> ks;
            std::string ctr;
            for (int w : n.adj) {
                if (w == par[v]) continue;
                if (n.kind == NodeKind::star && w == n.center)
                    ctr = code[w];
                else
                    ks.push_back(code[w]);
            }
            std::sort(ks.begin(), ks.end());
            std::string s;
            switch (n.kind) {
            case NodeKind::leaf: s = "Z"; break;
            case NodeKind::clique: s = "K"; break;
            case NodeKind::star: s = n.center == par[v] ? "C" : "X[" + ctr + "]"; break;
            }
            if (!ks.empty()) {
                s += '(';
                for (std::size_t i = 0; i < ks.size(); ++i) s += (i ? "," : "") + ks[i];
                s += ')';
            }
            code[v] = std::move(s);
        }
        return code[root];
    };
    if (c.kind == CenterResult::Kind::vertex) return rooted(c.a, -1);
    std::string x = rooted(c.a, c.b), y = rooted(c.b, c.a);
    if (y < x) std::swap(x, y);
    return "E(" + x + "|" + y + ")";
}

// ------------------------------------------------------------------ graphs

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    for (auto& [u, v] : edges) {
        if (u < 1 || v < 1 || u > n || v > n || u == v) throw precondition_error("graph: bad edge");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph{n, std::move(edges)};
}

std::vector<std::vector<bool>> Graph::matrix() const {
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (auto [u, v] : edges) m[u - 1][v - 1] = m[v - 1][u - 1] = true;
    return m;
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> a(n);
    for (auto [u, v] : edges) {
        a[u - 1].push_back(v - 1);
        a[v - 1].push_back(u - 1);
    }
    return a;
}

bool Graph::connected() const {
    if (n == 0) return false;
    auto a = adjacency();
    std::vector<bool> seen(n, false);
    std::vector<int> st{0};
    seen[0] = true;
    int count = 1;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int w : a[v])
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                st.push_back(w);
            }
    }
    return count == n;
}

Graph original_graph(const SplitTree& t) {
    std::vector<int> order = leaf_order(t);
    std::vector<int> num(t.node_count(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) num[order[i]] = static_cast<int>(i) + 1;
    std::vector<std::pair<int, int>> edges;
    for (int leaf : order) {
        std::vector<std::pair<int, int>> st;
        for (int w : t.node(leaf).adj) st.emplace_back(w, leaf);
        while (!st.empty()) {
            auto [v, from] = st.back();
            st.pop_back();
            if (t.node(v).kind == NodeKind::leaf) {
                if (num[v] > num[leaf]) edges.emplace_back(num[leaf], num[v]);
                continue;
            }
            for (int w : t.node(v).adj)
                if (w != from && t.passes(v, from, w)) st.emplace_back(w, v);
        }
    }
    return make_graph(static_cast<int>(order.size()), std::move(edges));
}

std::string graph_json(const Graph& g) {
    nlohmann::ordered_json j;
    j["n"] = g.n;
    j["edges"] = nlohmann::ordered_json::array();
    for (auto [u, v] : g.edges) j["edges"].push_back({u, v});
    return j.dump();
}

std::string graph_dot(const Graph& g) {
    std::ostringstream os;
    os << "graph G {\n  node [shape=circle];\n";
    for (int v = 1; v <= g.n; ++v) os << "  " << v << ";\n";
    for (auto [u, v] : g.edges) os << "  " << u << " -- " << v << ";\n";
    os << "}\n";
    return os.str();
}

std::string split_tree_dot(const SplitTree& t) {
    std::vector<int> order = leaf_order(t);
    std::vector<int> num(t.node_count(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) num[order[i]] = static_cast<int>(i) + 1;
    std::ostringstream os;
    os << "graph T {\n  node [shape=circle];\n";
    for (int v = 0; v < t.node_count(); ++v) {
        const auto& n = t.node(v);
        os << "  n" << v << " [label=\"";
        if (n.kind == NodeKind::leaf) os << num[v];
        else os << (n.kind == NodeKind::clique ? "K" : "S");
        os << "\"];\n";
    }
    for (int v = 0; v < t.node_count(); ++v)
        for (int w : t.node(v).adj) {
            if (w < v) continue;
            os << "  n" << v << " -- n" << w;
            const bool cv = t.node(v).kind == NodeKind::star && t.node(v).center == w;
            const bool cw = t.node(w).kind == NodeKind::star && t.node(w).center == v;
            if (cv || cw) {
                os << " [";
                if (cv) os << "taillabel=\"c\"";
                if (cv && cw) os << ", ";
                if (cw) os << "headlabel=\"c\"";
                os << "]";
            }
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

// ------------------------------------------------------------------ validators

namespace {

Validation fail(std::string why) { return {false, std::move(why)}; }

Validation check_tree(const SplitTree& t) {
    const int n = t.node_count();
    if (n == 0) return fail("empty tree");
    long deg_sum = 0;
    for (int v = 0; v < n; ++v) {
        const auto& a = t.node(v).adj;
        deg_sum += static_cast<long>(a.size());
        std::vector<int> s = a;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) return fail("parallel tree edges");
        for (int w : a) {
            if (w < 0 || w >= n || w == v) return fail("bad tree edge");
            const auto& b = t.node(w).adj;
            if (std::find(b.begin(), b.end(), v) == b.end()) return fail("asymmetric adjacency");
        }
    }
    if (deg_sum != 2L * (n - 1)) return fail("not a tree (edge count)");
    std::vector<bool> seen(n, false);
    std::vector<int> st{0};
    seen[0] = true;
    int count = 1;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int w : t.node(v).adj)
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                st.push_back(w);
            }
    }
    if (count != n) return fail("not connected");
    return {};
}

}  // namespace

Validation validate_dh(const SplitTree& t) {
    if (Validation v = check_tree(t); !v) return v;
    for (int v = 0; v < t.node_count(); ++v) {
        const auto& n = t.node(v);
        const std::string id = "node " + std::to_string(v);
        if (n.kind == NodeKind::leaf) {
            if (n.adj.size() > 1) return fail(id + ": leaf of degree " + std::to_string(n.adj.size()));
            if (n.adj.empty() && t.node_count() > 1) return fail(id + ": isolated leaf");
            continue;
        }
        if (n.adj.size() < 3) return fail(id + ": internal degree " + std::to_string(n.adj.size()) + " < 3");
        if (n.kind == NodeKind::star && std::find(n.adj.begin(), n.adj.end(), n.center) == n.adj.end())
            return fail(id + ": star without a center");
        for (int w : n.adj) {
            const auto& m = t.node(w);
            if (n.kind == NodeKind::clique && m.kind == NodeKind::clique) return fail(id + ": adjacent clique nodes");
            if (n.kind == NodeKind::star && m.kind == NodeKind::star && (n.center == w) != (m.center == v))
                return fail(id + ": star center joined to a star extremity");
        }
    }
    return {};
}

Validation validate_3lp(const SplitTree& t) {
    if (Validation v = validate_dh(t); !v) return v;
    const int n = t.node_count();
    int stars = 0, first_star = -1;
    for (int v = 0; v < n; ++v) {
        const auto& x = t.node(v);
        if (x.kind == NodeKind::star) {
            ++stars;
            if (first_star < 0) first_star = v;
            if (t.node(x.center).kind == NodeKind::star)
                return fail("node " + std::to_string(v) + ": star center not adjacent to a clique or leaf");
        }
        if (x.kind == NodeKind::clique) {
            int internal = 0;
            for (int w : x.adj) internal += t.node(w).kind != NodeKind::leaf;
            if (internal > 1) return fail("node " + std::to_string(v) + ": clique node is not a meta-leaf");
        }
    }
    if (stars > 0) {
        std::vector<bool> seen(n, false);
        std::vector<int> st{first_star};
        seen[first_star] = true;
        int count = 1;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : t.node(v).adj)
                if (!seen[w] && t.node(w).kind == NodeKind::star) {
                    seen[w] = true;
                    ++count;
                    st.push_back(w);
                }
        }
        if (count != stars) return fail("star nodes do not form a subtree");
    }
    return {};
}

bool is_distance_hereditary(const Graph& g, int max_n) {
    if (g.n > max_n) throw precondition_error("is_distance_hereditary: n = " + std::to_string(g.n) + " exceeds " +
                                              std::to_string(max_n));
    if (!g.connected()) return false;
    const int n = g.n;
    auto m = g.matrix();
    constexpr int inf = 1 << 20;
    auto distances = [&](unsigned mask) {
        std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
        for (int s = 0; s < n; ++s) {
            if (!(mask >> s & 1u)) continue;
            std::deque<int> q{s};
            d[s][s] = 0;
            while (!q.empty()) {
                int v = q.front();
                q.pop_front();
                for (int w = 0; w < n; ++w)
                    if ((mask >> w & 1u) && m[v][w] && d[s][w] == inf) {
                        d[s][w] = d[s][v] + 1;
                        q.push_back(w);
                    }
            }
        }
        return d;
    };
    const unsigned full = (1u << n) - 1;
    auto dg = distances(full);
    for (unsigned mask = 1; mask < full; ++mask) {
        if (__builtin_popcount(mask) < 3) continue;
        auto dh = distances(mask);
        bool connected = true;
        for (int u = 0; u < n && connected; ++u)
            for (int v = 0; v < n; ++v)
                if ((mask >> u & 1u) && (mask >> v & 1u) && dh[u][v] == inf) {
                    connected = false;
                    break;
                }
        if (!connected) continue;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if ((mask >> u & 1u) && (mask >> v & 1u) && dh[u][v] != dg[u][v]) return false;
    }
    return true;
}

}  // namespace cyclept

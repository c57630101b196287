#include "cyclept/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace cyclept;
using json = nlohmann::ordered_json;

namespace {

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

unsigned default_digits() {
    if (const char* s = std::getenv("CYCLEPT_DIGITS")) {
        try {
            int d = std::stoi(s);
            if (d >= 10 && d <= 1000) return static_cast<unsigned>(d);
        } catch (const std::exception&) {
        }
        throw usage_error(std::string("CYCLEPT_DIGITS must be an integer in [10, 1000], got '") + s + "'");
    }
    return 30;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Catalog entry, or one built from a grammar file whose first pointed class is the top.
CatalogEntry load_entry(const std::string& cls, const std::string& grammar) {
    if (grammar.empty()) return catalog(parse_class_id(cls));
    ClassSystem sys = ClassSystem::parse(read_file(grammar));
    sys.validate();
    CatalogEntry e{ClassId::two_three_trees, grammar, {}, sys, {}, std::nullopt};
    for (const auto& d : sys.defs()) {
        if (d.pointed && e.top.empty()) e.top = d.name;
        if (!d.pointed) e.aux.push_back(d.name);
    }
    if (e.top.empty()) throw usage_error("grammar file defines no pointed class");
    if (sys.has("T_v") && sys.has("T_e") && sys.has("T_d"))
        e.rooted = std::map<std::string, std::string>{{"vertex", "T_v"}, {"edge", "T_e"}, {"directed_edge", "T_d"}};
    return e;
}

Real resolve_z(ClassId id, const std::string& z) {
    if (z == "sing") return Real(singular_z(id));
    try {
        return parse_real(z);
    } catch (const std::exception&) {
        throw usage_error("--z expects a real number or 'sing', got '" + z + "'");
    }
}

std::uint64_t draw_seed(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

// Vertex 0 is the root; vertices are renumbered 1.. in order of appearance.
std::string tree_string(const Tree& t, std::vector<int>& number) {
    number.assign(t.size(), 0);
    if (t.size() == 0) return "";
    struct Frame {
        int v, parent;
        std::size_t i;
        int emitted;
    };
    int next = 0;
    std::string out = "Z";
    number[0] = ++next;
    std::vector<Frame> st{{0, -1, 0, 0}};
    while (!st.empty()) {
        Frame& f = st.back();
        const auto& adj = t.adj[f.v];
        while (f.i < adj.size() && adj[f.i] == f.parent) ++f.i;
        if (f.i == adj.size()) {
            if (f.emitted) out += ")";
            st.pop_back();
            continue;
        }
        const int w = adj[f.i++];
        out += f.emitted++ ? ", Z" : "(Z";
        number[w] = ++next;
        st.push_back({w, f.v, 0, 0});
    }
    return out;
}

struct Rendered {
    std::string text;
    std::vector<int> cycle;  // 1-based vertex numbers
};

Rendered render(const PointedStructure& p, const std::string& format) {
    const Structure& s = p.structure;
    Rendered r;
    std::vector<int> number;
    if (s.cls == ClassId::two_three_trees) {
        std::string text = tree_string(s.tree, number);
        for (int v : p.cycle) r.cycle.push_back(number.at(v));
        std::vector<std::pair<int, int>> edges;
        for (int v = 0; v < s.tree.size(); ++v)
            for (int w : s.tree.adj[v])
                if (number[v] < number[w]) edges.emplace_back(number[v], number[w]);
        Graph g = make_graph(s.tree.size(), edges);
        if (format == "splitstring") r.text = text;
        else if (format == "dot") r.text = graph_dot(g);
        else {
            json j = {{"class", "23t"}, {"size", s.size()}, {"tree", text}, {"graph", json::parse(graph_json(g))}};
            r.text = j.dump();
        }
        return r;
    }
    auto leaves = leaf_order(s.split);
    std::map<int, int> vertex;
    for (std::size_t i = 0; i < leaves.size(); ++i) vertex[leaves[i]] = static_cast<int>(i) + 1;
    for (int leaf : p.cycle) r.cycle.push_back(vertex.at(leaf));
    if (format == "splitstring") r.text = print(s.split);
    else if (format == "dot") r.text = split_tree_dot(s.split);
    else {
        json j = {{"class", class_id_name(s.cls)},
                  {"size", s.size()},
                  {"tree", print(s.split)},
                  {"case", s.case_index},
                  {"graph", json::parse(graph_json(original_graph(s.split)))}};
        r.text = j.dump();
    }
    return r;
}

int cmd_enumerate(const std::string& cls, const std::string& grammar, int order, const std::string& method,
                  bool pointed, const std::string& format) {
    CatalogEntry e = load_entry(cls, grammar);
    Series s;
    if (method == "dissym") {
        if (pointed) throw usage_error("--pointed does not apply to --method dissym");
        if (!e.rooted) throw usage_error("--method dissym needs the rooted variants of 2-3 trees");
        s = enumerate_dissymmetry(e, order);
    } else {
        s = enumerate_pointed(e, order);
        if (!pointed) s = unpoint(s);
    }
    std::cout << (format == "csv" ? to_csv(s) : to_json(s) + "\n");
    return 0;
}

int cmd_sample(const std::string& cls, const std::string& zs, long count, std::uint64_t seed,
               const std::string& format, bool keep_cycle, long max_size, int jobs, unsigned digits) {
    const ClassId id = parse_class_id(cls);
    const Real z = resolve_z(id, zs);
    SamplerOptions opt;
    opt.digits = digits;
    opt.max_size = max_size;
    if (count < 0) throw usage_error("--count must be >= 0");
    std::vector<Rendered> out(static_cast<std::size_t>(count));
    auto work = [&](int t) {
        auto sampler = make_sampler(id, z, opt);
        for (long i = t; i < count; i += jobs) {
            Rng rng(draw_seed(seed, static_cast<std::uint64_t>(i)));
            std::optional<PointedStructure> p;
            while (!(p = sampler->sample_pointed(rng))) {
            }
            if (!validate_structure(p->structure)) throw integrity_error("sampler produced an invalid structure");
            out[i] = render(*p, format);
        }
    };
    if (jobs <= 1) {
        jobs = 1;
        work(0);
    } else {
        std::vector<std::thread> threads;
        std::exception_ptr error;
        std::mutex mu;
        for (int t = 0; t < jobs; ++t)
            threads.emplace_back([&, t] {
                try {
                    work(t);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!error) error = std::current_exception();
                }
            });
        for (auto& th : threads) th.join();
        if (error) std::rethrow_exception(error);
    }
    for (const auto& r : out) {
        if (format == "json") {
            json j = json::parse(r.text);
            if (keep_cycle) j["cycle"] = r.cycle;
            std::cout << j.dump() << '\n';
            continue;
        }
        std::cout << r.text;
        if (keep_cycle) {
            if (format == "dot") {
                std::cout << "// cycle:";
                for (int v : r.cycle) std::cout << ' ' << v;
            } else {
                std::cout << " cyc:";
                for (std::size_t k = 0; k < r.cycle.size(); ++k) std::cout << (k ? "," : "") << r.cycle[k];
            }
        }
        if (format != "dot" || keep_cycle) std::cout << '\n';
    }
    return 0;
}

int cmd_singularity(const std::string& cls, const std::string& grammar, int depth, const std::string& method,
                    unsigned digits) {
    CatalogEntry e = load_entry(cls, grammar);
    auto a = unpoint(enumerate_pointed(e, depth)).integers();
    SingularityEstimate r = method == "ratio"  ? ratio_estimate(a, depth, digits)
                            : method == "root" ? root_estimate(a, depth, digits)
                                               : domb_sykes(a, depth, digits);
    auto str = [&](const Real& x) { return x.str(static_cast<std::streamsize>(digits)); };
    json j = {{"class", grammar.empty() ? cls : e.name}, {"method", r.method}, {"depth", depth},
              {"rho", std::stod(str(r.rho))},          {"rho_text", str(r.rho)}};
    if (r.method == "domb-sykes") {
        j["fit"] = {{"from", r.from},
                    {"to", r.to},
                    {"intercept", std::stod(str(r.intercept))},
                    {"slope", std::stod(str(r.slope))},
                    {"r_squared", std::stod(str(r.r_squared))}};
    }
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_verify(const std::string& cls, int nmax) {
    const ClassId id = parse_class_id(cls);
    auto brute = brute_force_count(id, nmax);
    auto series = unpoint(enumerate_pointed(catalog(id), nmax)).integers();
    std::vector<long> enumerated;
    for (const auto& c : series) enumerated.push_back(c.get_si());
    const bool match = brute == enumerated;
    json j = {{"class", cls}, {"nmax", nmax}, {"brute_force", brute}, {"enumerated", enumerated}, {"match", match}};
    std::cout << j.dump() << '\n';
    return match ? 0 : 1;
}

int cmd_chi2(const std::string& cls, const std::string& zs, long draws, int buckets, std::uint64_t seed,
             unsigned digits) {
    const ClassId id = parse_class_id(cls);
    const Real z = resolve_z(id, zs);
    SamplerOptions opt;
    opt.digits = digits;
    auto sampler = make_sampler(id, z, opt);
    Series pointed = enumerate_pointed(catalog(id), sampling_order(id, z, digits));
    Rng rng(seed);
    ChiSquared c = size_chi_squared(*sampler, pointed, draws, buckets, rng);
    json j = {{"class", cls},       {"z", static_cast<double>(z)}, {"draws", c.draws},      {"buckets", buckets},
              {"df", c.df},         {"statistic", c.statistic},    {"cutoff", c.cutoff},    {"pass", c.pass()},
              {"observed", c.observed}, {"expected_p", c.expected_p}};
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_stats(const std::string& cls, const std::string& zs, long count, std::uint64_t seed,
              const std::string& format, unsigned digits) {
    const ClassId id = parse_class_id(cls);
    if (id == ClassId::two_three_trees) throw usage_error("stats applies to dh and tlp");
    const Real z = resolve_z(id, zs);
    SamplerOptions opt;
    opt.digits = digits;
    auto sampler = make_sampler(id, z, opt);
    Rng rng(seed);
    std::vector<SplitTree> trees;
    std::vector<double> n, cliques, stars;
    while (static_cast<long>(trees.size()) < count) {
        auto s = sampler->sample(rng);
        if (!s) continue;
        n.push_back(s->size());
        cliques.push_back(s->split.clique_count());
        stars.push_back(s->split.star_count());
        trees.push_back(std::move(s->split));
    }
    auto rows = split_tree_stats(trees);
    if (format == "csv") {
        std::cout << stats_csv(rows);
        return 0;
    }
    json j = {{"class", cls}, {"z", static_cast<double>(z)}, {"count", count}};
    for (const auto& r : rows)
        j["rows"].push_back({{"size", r.size}, {"mean_cliques", r.mean_cliques}, {"mean_stars", r.mean_stars},
                             {"count", r.count}});
    if (count >= 2) {
        LineFit c = fit_line(n, cliques), s = fit_line(n, stars);
        j["clique_fit"] = {{"slope", c.slope}, {"intercept", c.intercept}, {"r_squared", c.r_squared}};
        j["star_fit"] = {{"slope", s.slope}, {"intercept", s.intercept}, {"r_squared", s.r_squared}};
    }
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_bench(const std::string& cls, const std::string& zs, long count, std::uint64_t seed,
              const std::string& format, unsigned digits) {
    const ClassId id = parse_class_id(cls);
    const Real z = resolve_z(id, zs);
    SamplerOptions opt;
    opt.digits = digits;
    auto sampler = make_sampler(id, z, opt);
    Rng rng(seed);
    auto rows = bench(*sampler, count, rng);
    if (format == "csv") {
        std::cout << bench_csv(rows);
        return 0;
    }
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back(r.size);
        y.push_back(r.seconds);
    }
    json j = {{"class", cls}, {"z", static_cast<double>(z)}, {"count", count}};
    if (count >= 2) {
        LineFit f = fit_line(x, y);
        j["fit"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
    }
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_graph(const std::string& in, const std::string& format) {
    SplitTree t = parse_split_tree(in);
    if (format == "json") std::cout << graph_json(original_graph(t)) << '\n';
    else if (format == "dot") std::cout << graph_dot(original_graph(t));
    else std::cout << split_tree_dot(t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Enumeration and uniform sampling of unlabeled 2-3 trees, distance-hereditary and 3-leaf power "
                 "split trees"};
    app.require_subcommand(1);

    std::string cls, grammar, method = "cp", format, zs, in;
    int order = 10, depth = 300, nmax = 7, buckets = 30, jobs = 1;
    long count = 1, draws = 1000, max_size = 0;
    std::uint64_t seed = 1;
    bool pointed = false, keep_cycle = false;
    const std::vector<std::string> classes{"23t", "dh", "tlp", "3lp"};

    auto* en = app.add_subcommand("enumerate", "Exact series coefficients");
    en->add_option("--class", cls, "23t | dh | tlp")->check(CLI::IsMember(classes));
    en->add_option("--grammar", grammar, "Grammar file (overrides --class)")->check(CLI::ExistingFile);
    en->add_option("--order", order, "Truncation order")->required()->check(CLI::Range(1, 100000));
    en->add_option("--method", method, "cp | dissym")->check(CLI::IsMember({"cp", "dissym"}));
    en->add_flag("--pointed", pointed, "Print the cycle-pointed series");
    en->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    auto* sa = app.add_subcommand("sample", "Uniform random structures");
    sa->add_option("--class", cls)->required()->check(CLI::IsMember(classes));
    sa->add_option("--z", zs, "Boltzmann parameter or 'sing'")->required();
    sa->add_option("--count", count)->check(CLI::NonNegativeNumber);
    sa->add_option("--seed", seed);
    sa->add_option("--format", format, "splitstring | json | dot")
        ->check(CLI::IsMember({"splitstring", "json", "dot"}));
    sa->add_flag("--keep-cycle", keep_cycle, "Also print the marked cycle (1-based vertices)");
    sa->add_option("--max-size", max_size, "Reject draws larger than this")->check(CLI::NonNegativeNumber);
    sa->add_option("--jobs", jobs, "Worker threads (output does not depend on it)")->check(CLI::Range(1, 256));

    auto* si = app.add_subcommand("singularity", "Radius of convergence estimate");
    si->add_option("--class", cls)->check(CLI::IsMember(classes));
    si->add_option("--grammar", grammar)->check(CLI::ExistingFile);
    si->add_option("--depth", depth)->required()->check(CLI::Range(4, 100000));
    si->add_option("--method", method, "ratio | root | domb-sykes")
        ->required()
        ->check(CLI::IsMember({"ratio", "root", "domb-sykes"}));

    auto* ve = app.add_subcommand("verify", "Brute force against the enumerator");
    ve->add_option("--class", cls)->required()->check(CLI::IsMember(classes));
    ve->add_option("--nmax", nmax)->required()->check(CLI::Range(1, 12));

    auto* ch = app.add_subcommand("chi2", "Size-distribution goodness of fit");
    ch->add_option("--class", cls)->required()->check(CLI::IsMember(classes));
    ch->add_option("--z", zs)->required();
    ch->add_option("--draws", draws)->check(CLI::PositiveNumber);
    ch->add_option("--buckets", buckets)->check(CLI::Range(2, 10000));
    ch->add_option("--seed", seed);

    auto* st = app.add_subcommand("stats", "Clique and star counts by size");
    st->add_option("--class", cls)->required()->check(CLI::IsMember({"dh", "tlp", "3lp"}));
    st->add_option("--z", zs)->required();
    st->add_option("--count", count)->check(CLI::PositiveNumber);
    st->add_option("--seed", seed);
    st->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    auto* be = app.add_subcommand("bench", "Per-draw timing");
    be->add_option("--class", cls)->required()->check(CLI::IsMember(classes));
    be->add_option("--z", zs)->required();
    be->add_option("--count", count)->check(CLI::PositiveNumber);
    be->add_option("--seed", seed);
    be->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    auto* gr = app.add_subcommand("graph", "Original graph of a split tree string");
    gr->add_option("--in", in, "Split tree string")->required();
    gr->add_option("--format", format, "json | dot | splitdot")->check(CLI::IsMember({"json", "dot", "splitdot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const unsigned digits = default_digits();
        auto need_class = [&] {
            if (cls.empty() && grammar.empty()) throw usage_error("--class or --grammar is required");
            if (cls.empty()) cls = "23t";
        };
        if (*en) {
            need_class();
            return cmd_enumerate(cls, grammar, order, method, pointed, format.empty() ? "json" : format);
        }
        if (*sa) return cmd_sample(cls, zs, count, seed, format.empty() ? "splitstring" : format, keep_cycle,
                                   max_size, jobs, digits);
        if (*si) {
            need_class();
            return cmd_singularity(cls, grammar, depth, method, digits);
        }
        if (*ve) return cmd_verify(cls, nmax);
        if (*ch) return cmd_chi2(cls, zs, draws, buckets, seed, digits);
        if (*st) return cmd_stats(cls, zs, count, seed, format.empty() ? "csv" : format, digits);
        if (*be) return cmd_bench(cls, zs, count, seed, format.empty() ? "json" : format, digits);
        if (*gr) return cmd_graph(in, format.empty() ? "json" : format);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

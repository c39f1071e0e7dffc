// pugkit command-line front end.
//   exit 0 success, 2 family-contract violation, 3 format error, 1 anything else

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pugkit/bipartite.hpp"
#include "pugkit/communication.hpp"
#include "pugkit/geometric.hpp"
#include "pugkit/product.hpp"
#include "pugkit/sketch.hpp"
#include "pugkit/twinwidth.hpp"

using namespace pugkit;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to the file, or to stdout for "" and "-".
template <class F>
void emit(const std::string& path, F&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    body(out);
}

// Size reports go to stdout when the payload went to a file, else to stderr.
std::ostream& report(const std::string& out_path) { return out_path.empty() || out_path == "-" ? std::cerr : std::cout; }

Graph as_graph(const GraphDoc& d) { return d.bipartite ? d.bg.to_graph() : d.g; }

BiGraph as_bigraph(const GraphDoc& d) {
    if (d.bipartite) return d.bg;
    auto side = two_coloring(d.g);
    if (side.empty() && d.g.n() > 0) throw FamilyViolation("graph is not bipartite");
    BiGraph b = to_bigraph(d.g, side);
    b.name = d.g.name;
    return b;
}

// Adjacency in the id space the schemes use: to_graph() ids for bipartite input.
Graph adjacency_graph(const GraphDoc& d, const std::string& scheme) {
    static const std::vector<std::string> bip{"bip-equivalence", "chain",  "tp-free",  "fpp",
                                              "fstar",           "p7",     "twinwidth"};
    if (std::find(bip.begin(), bip.end(), scheme) != bip.end()) return as_bigraph(d).to_graph();
    if (scheme == "diagonal") return bip_transform(as_graph(d)).to_graph();
    return as_graph(d);
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw FormatError("bad integer '" + tok + "'");
        }
    }
    return out;
}

// ---- equality labeling schemes ----

struct SchemeOpts {
    std::string scheme = "forest";
    int k = 2, p = 3, q = 2, c = 2;
    std::string realization, cert, protocol;
};

void add_scheme_opts(CLI::App* cmd, SchemeOpts& o, const std::string& flag = "--scheme") {
    cmd->add_option(flag, o.scheme,
                    "forest | equivalence | bip-equivalence | chain | tp-free | fpp | fstar | p7 | interval | "
                    "permutation | twinwidth | diagonal");
    cmd->add_option("--k", o.k, "chain bound k (chain, interval, permutation; distance bound for product)");
    cmd->add_option("--p", o.p, "forbidden pattern size p (tp-free, fpp, fstar)");
    cmd->add_option("--q", o.q, "structure bound q (tp-free, fpp, fstar)");
    cmd->add_option("--c", o.c, "chain-number bound (p7)");
    cmd->add_option("--realization", o.realization, "interval or point file (interval, permutation)");
    cmd->add_option("--cert", o.cert, "certificate tree file (twinwidth)");
    cmd->add_option("--protocol", o.protocol, "protocol file (diagonal)");
}

struct Built {
    EqualityScheme sch;
    std::vector<std::string> notes;  // predicted sizes
};

Built build_labels(const GraphDoc& doc, const SchemeOpts& o) {
    Built b;
    const std::string& s = o.scheme;
    if (s == "forest") {
        Graph g = as_graph(doc);
        b.sch = forest_labels(g);
        int a = std::max(1, degeneracy(g));
        b.notes.push_back("predicted s=0 k<=" + std::to_string(a + 1) + " (degeneracy " + std::to_string(a) + ")");
    } else if (s == "equivalence") {
        b.sch = equivalence_labels(as_graph(doc));
        b.notes.push_back("predicted s=0 k=1");
    } else if (s == "bip-equivalence") {
        b.sch = bipartite_equivalence_labels(as_bigraph(doc));
    } else if (s == "chain") {
        b.sch = chain_graph_labels(as_bigraph(doc), o.k);
        b.notes.push_back("predicted s=" + std::to_string(1 + bits_for(o.k + 1)) + " k=0");
    } else if (s == "tp-free") {
        b.sch = tp_free_labels(as_bigraph(doc), o.p, o.q);
    } else if (s == "fpp") {
        DecompositionTree t;
        b.sch = fpp_labels(as_bigraph(doc), o.p, o.q, &t);
        b.notes.push_back("tree depth " + std::to_string(t.depth()) + " (bound " + std::to_string(2 * o.q) + ")");
    } else if (s == "fstar") {
        b.sch = fstar_labels(as_bigraph(doc), o.p, o.q);
    } else if (s == "p7") {
        DecompositionTree t;
        b.sch = p7_labels(as_bigraph(doc), o.c, &t);
        b.notes.push_back("tree depth " + std::to_string(t.depth()));
    } else if (s == "interval") {
        if (o.realization.empty()) throw std::invalid_argument("interval scheme needs --realization");
        std::ifstream in(o.realization);
        if (!in) throw FormatError("cannot open " + o.realization);
        auto r = read_intervals(in);
        Graph g = as_graph(doc);
        validate_realization(g, r);
        int clique = 0;
        b.sch = interval_scheme(g, r, o.k, &clique);
        b.notes.push_back("twin-quotient clique " + std::to_string(clique) + " (bound " +
                          std::to_string(4 * (o.k + 1) * (o.k + 1)) + ")");
    } else if (s == "permutation") {
        if (o.realization.empty()) throw std::invalid_argument("permutation scheme needs --realization");
        std::ifstream in(o.realization);
        if (!in) throw FormatError("cannot open " + o.realization);
        auto r = read_points(in);
        validate_realization(as_graph(doc), r);
        PermutationTreeStats st;
        b.sch = permutation_labels(r, o.k, &st);
        b.notes.push_back("tree nodes " + std::to_string(st.nodes) + " depth " + std::to_string(st.depth) +
                          " (bound " + std::to_string(2 * (2 * o.k + 1)) + "), code bound 5*nodes = " +
                          std::to_string(5 * st.nodes));
    } else if (s == "twinwidth") {
        if (o.cert.empty()) throw std::invalid_argument("twinwidth scheme needs --cert");
        auto t = TwCertTree::parse(slurp(o.cert));
        b.sch = tw_labels(as_bigraph(doc), t);
        b.notes.push_back("certificate depth " + std::to_string(t.depth()));
    } else if (s == "diagonal") {
        if (o.protocol.empty()) throw std::invalid_argument("diagonal scheme needs --protocol");
        auto t = EqProtocolTree::parse(slurp(o.protocol));
        b.sch = protocol_to_diagonal_labels(t, as_graph(doc));
        b.notes.push_back("protocol depth " + std::to_string(t.depth()) + ", codes per label " +
                          std::to_string(b.sch.k()) + " (bound 2^d = " + std::to_string(1 << t.depth()) + ")");
    } else {
        throw std::invalid_argument("unknown scheme '" + s + "'");
    }
    b.sch.name = doc.name();
    return b;
}

void print_label_report(std::ostream& os, const EqualityScheme& sch, const std::vector<std::string>& notes) {
    uint64_t distinct = 0;
    auto canon = canonical_codes(sch.labels, &distinct);
    LabelLayout lay = layout_for(canon, bits_for(std::max<uint64_t>(distinct, 1)));
    os << "labels " << sch.name << " n=" << sch.n() << " s=" << sch.s() << " k=" << sch.k()
       << " width=" << lay.width() << " distinct_codes=" << distinct << '\n';
    for (const auto& n : notes) os << "  " << n << '\n';
}

// ---- sketches ----

struct SketchOpts {
    std::string scheme = "compressed";
    double delta = 0.01;
    std::vector<std::string> factors;
    int power = 0;
    SchemeOpts base;
};

std::vector<Graph> product_factors(const GraphDoc* doc, const SketchOpts& o) {
    std::vector<Graph> fs;
    if (doc)
        for (int i = 0; i < o.power; ++i) fs.push_back(as_graph(*doc));
    for (const auto& f : o.factors) fs.push_back(as_graph(read_graph_file(f)));
    if (fs.empty()) throw std::invalid_argument("product sketch needs --factor files or a graph with --power");
    return fs;
}

SketchPtr build_sketch(const GraphDoc* doc, const SketchOpts& o, std::vector<std::string>* notes) {
    const std::string& s = o.scheme;
    if (s == "product" || s == "adjacency-product") {
        auto fs = product_factors(doc, o);
        int k = s == "product" ? o.base.k : 1;
        auto p = product_distance_scheme(fs, k);
        if (notes)
            notes->push_back("m=" + std::to_string(p->params().m) + " t=" + std::to_string(p->params().t) +
                             " s=" + std::to_string(p->s()) + " width=m*t*(s+1)=" + std::to_string(p->width()));
        if (s == "product") return p;
        return std::make_shared<DistanceAdjacency>(p);
    }
    if (!doc) throw std::invalid_argument("a graph file is required");
    if (s == "bloom") {
        auto b = std::make_shared<BloomForestScheme>(as_graph(*doc));
        if (notes) notes->push_back("alpha=" + std::to_string(b->alpha()));
        return b;
    }
    Built base = build_labels(*doc, o.base);
    if (s == "compressed") return std::make_shared<CompressedScheme>(base.sch);
    if (s == "naive") return naive_derandomize(base.sch);
    if (s == "boosted") {
        auto b = boost(std::make_shared<CompressedScheme>(base.sch), o.delta);
        if (notes) notes->push_back("copies=" + std::to_string(boost_copies(o.delta)));
        return b;
    }
    throw std::invalid_argument("unknown sketch scheme '" + s + "'");
}

// Mixed-radix id from "c0,c1,..." given the product dims; plain ids pass through.
long long vertex_arg(const std::string& s, const json& scheme) {
    if (s.find(',') == std::string::npos) {
        try {
            size_t used = 0;
            long long v = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw FormatError("bad vertex '" + s + "'");
        }
    }
    const json* j = &scheme;
    while (!j->contains("dims") && j->contains("inner")) j = &j->at("inner");
    if (!j->contains("dims")) throw FormatError("coordinates given but the scheme is not a product");
    auto dims = j->at("dims").get<std::vector<int>>();
    auto c = parse_ints(s);
    if (c.size() != dims.size()) throw FormatError("expected " + std::to_string(dims.size()) + " coordinates");
    long long id = 0;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (c[i] < 0 || c[i] >= dims[i]) throw FormatError("coordinate out of range");
        id = id * dims[i] + c[i];
    }
    return id;
}

std::string value_str(int v) { return v == kBottom ? "bottom" : std::to_string(v); }

// ---- uncontraction sequence files: `step <ids>|<ids>|...` ----

UncontractionSequence read_sequence(const std::string& path) {
    UncontractionSequence seq;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kw, body;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw != "step") throw FormatError("sequence: expected 'step'");
        std::getline(ls, body);
        Partition p;
        std::stringstream parts(body);
        std::string part;
        while (std::getline(parts, part, '|')) {
            part.erase(std::remove(part.begin(), part.end(), ' '), part.end());
            p.push_back(parse_ints(part));
        }
        seq.steps.push_back(p);
    }
    return seq;
}

void write_sequence(std::ostream& out, const UncontractionSequence& seq) {
    for (const auto& p : seq.steps) {
        out << "step ";
        for (size_t i = 0; i < p.size(); ++i) {
            if (i) out << " | ";
            for (size_t j = 0; j < p[i].size(); ++j) out << (j ? "," : "") << p[i][j];
        }
        out << '\n';
    }
}

// ---- commands ----

struct GenOpts {
    std::string family, out, cert_out;
    int n = 8, k = 3, d = 3, q = 2, s = 2, p = 3, nx = 4, ny = 4, trees = 1, depth = 1, span = 100, max_len = 20;
    double prob = 0.5;
    std::vector<int> sizes, profile;
    uint64_t seed = 0;
    bool seeded = false;
};

int cmd_gen(const GenOpts& o) {
    const std::string& f = o.family;
    auto need_seed = [&] {
        if (!o.seeded) throw std::invalid_argument("'" + f + "' is random: pass --seed");
    };
    auto graph_out = [&](const Graph& g) { emit(o.out, [&](std::ostream& os) { write_graph(os, g); }); };
    auto bigraph_out = [&](const BiGraph& g) { emit(o.out, [&](std::ostream& os) { write_graph(os, g); }); };
    if (f == "path") graph_out(gen::path(o.n));
    else if (f == "cycle") graph_out(gen::cycle(o.n));
    else if (f == "complete") graph_out(gen::complete(o.n));
    else if (f == "edgeless") graph_out(gen::edgeless(o.n));
    else if (f == "star") graph_out(gen::star(o.n));
    else if (f == "hypercube") graph_out(gen::hypercube(o.d));
    else if (f == "half-graph") graph_out(gen::half_graph(o.k));
    else if (f == "threshold") graph_out(gen::threshold(o.k));
    else if (f == "co-half-graph") graph_out(gen::co_half_graph(o.k));
    else if (f == "half-bigraph") bigraph_out(gen::half_bigraph(o.k));
    else if (f == "biclique") bigraph_out(gen::biclique(o.nx, o.ny));
    else if (f == "z") bigraph_out(gen::z_graph(o.q, o.s));
    else if (f == "t") bigraph_out(gen::t_graph(o.p));
    else if (f == "f") bigraph_out(gen::f_graph(o.p, o.q));
    else if (f == "fstar") bigraph_out(gen::fstar(o.p, o.q));
    else if (f == "p7") bigraph_out(gen::p7());
    else if (f == "equivalence") graph_out(gen::equivalence(o.sizes));
    else if (f == "chain") bigraph_out(gen::chain_graph(o.ny, o.profile));
    else if (f == "gnp") { need_seed(); graph_out(gen::gnp(o.n, o.prob, o.seed)); }
    else if (f == "random-tree") { need_seed(); graph_out(gen::random_tree(o.n, o.seed)); }
    else if (f == "random-forest") { need_seed(); graph_out(gen::random_forest(o.n, o.trees, o.seed)); }
    else if (f == "random-bigraph") { need_seed(); bigraph_out(gen::random_bigraph(o.nx, o.ny, o.prob, o.seed)); }
    else if (f == "p7-free") { need_seed(); bigraph_out(gen::p7_free_instance(o.n, o.seed)); }
    else if (f == "intervals") {
        need_seed();
        auto r = gen::random_intervals(o.n, o.span, o.max_len, o.seed);
        emit(o.out, [&](std::ostream& os) { write_intervals(os, r); });
    } else if (f == "points") {
        need_seed();
        auto r = gen::random_permutation(o.n, o.seed);
        emit(o.out, [&](std::ostream& os) { write_points(os, r); });
    } else if (f == "tw-certified") {
        need_seed();
        TwCertTree t;
        BiGraph g = gen::tw_certified(o.nx, o.ny, o.depth, o.seed, &t);
        bigraph_out(g);
        if (!o.cert_out.empty()) emit(o.cert_out, [&](std::ostream& os) { os << t.str(); });
    } else {
        throw std::invalid_argument("unknown family '" + f + "'");
    }
    return 0;
}

int cmd_label(const std::string& graph, const SchemeOpts& so, const std::string& out, const std::string& protocol_out) {
    GraphDoc doc = read_graph_file(graph);
    Built b = build_labels(doc, so);
    emit(out, [&](std::ostream& os) { write_labels(os, b.sch); });
    print_label_report(report(out), b.sch, b.notes);
    if (!protocol_out.empty()) {
        auto t = labels_to_protocol(b.sch, true);
        emit(protocol_out, [&](std::ostream& os) { os << t.str(); });
        report(out) << "  protocol depth " << t.depth() << '\n';
    }
    return 0;
}

int cmd_sketch(const std::string& graph, const SketchOpts& so, uint64_t seed, const std::string& out, long long max_n) {
    std::unique_ptr<GraphDoc> doc;
    if (!graph.empty()) doc = std::make_unique<GraphDoc>(read_graph_file(graph));
    std::vector<std::string> notes;
    SketchPtr sch = build_sketch(doc.get(), so, &notes);
    if (sch->n() > max_n) throw std::invalid_argument("scheme has " + std::to_string(sch->n()) + " vertices; raise --max-n");
    auto smp = sch->sample(seed);
    SketchFile f;
    f.name = doc ? doc->name() : "product";
    f.width = sch->width();
    f.scheme = sch->describe();
    for (int v = 0; v < sch->n(); ++v) f.sketches.push_back(smp->sketch(v));
    emit(out, [&](std::ostream& os) { write_sketches(os, f); });
    auto& r = report(out);
    r << "sketch " << f.name << " scheme=" << so.scheme << " n=" << sch->n() << " width=" << sch->width()
      << " delta=" << sch->delta() << '\n';
    for (const auto& n : notes) r << "  " << n << '\n';
    return 0;
}

int cmd_query(const std::string& file, const std::string& us, const std::string& vs) {
    std::string text = slurp(file);
    std::istringstream in(text);
    if (text.find("\ndecoder sketch ") != std::string::npos) {
        SketchFile f = read_sketches(in);
        long long u = vertex_arg(us, f.scheme), v = vertex_arg(vs, f.scheme);
        long long n = static_cast<long long>(f.sketches.size());
        if (u < 0 || v < 0 || u >= n || v >= n) throw FormatError("vertex out of range");
        auto dec = sketch_decoder_from_json(f.scheme);
        std::cout << value_str(dec(f.sketches[u], f.sketches[v])) << '\n';
        return 0;
    }
    EqualityScheme sch = read_labels(in);
    long long u = vertex_arg(us, json::object()), v = vertex_arg(vs, json::object());
    if (u < 0 || v < 0 || u >= (long long)sch.n() || v >= (long long)sch.n()) throw FormatError("vertex out of range");
    std::cout << (sch.query(int(u), int(v)) ? 1 : 0) << '\n';
    return 0;
}

void print_rate(std::ostream& os, const std::string& name, const Rate& r) {
    os << std::left << std::setw(12) << name << std::right << std::setw(10) << r.errors << std::setw(12) << r.trials
       << std::fixed << std::setprecision(5) << std::setw(10) << r.rate() << std::setw(10) << r.lo() << std::setw(10)
       << r.hi() << '\n';
}

int cmd_eval(const std::string& graph, const SketchOpts& so, int trials, int pairs, uint64_t seed, int jobs) {
    std::unique_ptr<GraphDoc> doc;
    if (!graph.empty()) doc = std::make_unique<GraphDoc>(read_graph_file(graph));
    SketchPtr sch = build_sketch(doc.get(), so, nullptr);
    std::cout << std::left << std::setw(12) << "class" << std::right << std::setw(10) << "errors" << std::setw(12)
              << "trials" << std::setw(10) << "rate" << std::setw(10) << "ci_lo" << std::setw(10) << "ci_hi" << '\n';
    if (so.scheme == "product") {
        // success means the exact distance, or bottom beyond k
        auto fs = product_factors(doc.get(), so);
        auto prod = cartesian_product(fs);
        const int n = prod.g.n(), k = so.base.k;
        std::mt19937_64 rng(hash3(seed, kTagEval, 0));
        Rate fail;
        for (int i = 0; i < pairs; ++i) {
            int x = int(rng() % n), y = int(rng() % n);
            int d = bfs_distances(prod.g, x)[y];
            int want = d >= 0 && d <= k ? d : kBottom;
            for (int t = 0; t < trials; ++t) {
                auto smp = sch->sample(hash3(seed, kTagEval, uint64_t(i) * trials + t + 1));
                fail.errors += sch->query(*smp, x, y) != want;
                ++fail.trials;
            }
        }
        print_rate(std::cout, "failure", fail);
        return 0;
    }
    Graph g = adjacency_graph(*doc, so.base.scheme);
    if (so.scheme == "bloom") g = as_graph(*doc);
    auto adj = [&](int u, int v) { return g.adj(u, v); };
    auto ps = sample_pairs(g.n(), pairs, seed, adj);
    ErrorReport rep = evaluate_error(*sch, adj, ps, trials, seed, jobs);
    print_rate(std::cout, "adjacent", rep.adjacent);
    print_rate(std::cout, "nonadjacent", rep.nonadjacent);
    print_rate(std::cout, "overall", rep.overall());
    std::cout << std::left << std::setw(12) << "worst_pair" << std::right << std::setw(52) << std::fixed
              << std::setprecision(5) << rep.worst_pair << '\n';
    return 0;
}

int cmd_derand(const std::string& graph, const SchemeOpts& base, uint64_t seed, int retries, const std::string& out) {
    GraphDoc doc = read_graph_file(graph);
    Built b = build_labels(doc, base);
    Graph g = adjacency_graph(doc, base.scheme);
    auto adj = [&](int u, int v) { return g.adj(u, v); };
    DerandResult r = derandomize(std::make_shared<CompressedScheme>(b.sch), adj, seed, retries);
    if (!r.ok) throw Failure("no correct sample within " + std::to_string(retries) + " attempts");
    SketchFile f;
    f.name = doc.name();
    f.width = r.scheme->width();
    f.scheme = r.scheme->describe();
    f.sketches = r.labels;
    // independent post-check through the serialized decoder
    auto dec = sketch_decoder_from_json(f.scheme);
    for (int u = 0; u < g.n(); ++u)
        for (int v = 0; v < g.n(); ++v)
            if (u != v && (dec(f.sketches[u], f.sketches[v]) == 1) != g.adj(u, v))
                throw Failure("post-check failed at (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    emit(out, [&](std::ostream& os) { write_sketches(os, f); });
    report(out) << "derand " << f.name << " n=" << g.n() << " width=" << f.width << " attempts=" << r.attempts
                << " bad_pairs_first=" << r.bad_pairs_first << " verified=all-pairs\n";
    return 0;
}

struct VerifyOpts {
    std::string graph, twtree, chain_decomp, p7_tree, protocol, sequence, witness, labels;
};

int cmd_verify(const VerifyOpts& o) {
    GraphDoc doc = read_graph_file(o.graph);
    std::string why;
    bool ok = true;
    int checks = 0;
    auto record = [&](const std::string& what, bool good) {
        ++checks;
        std::cout << what << ": " << (good ? "valid" : "invalid: " + why) << '\n';
        ok = ok && good;
        why.clear();
    };
    if (!o.twtree.empty()) record("twtree", verify_tree(as_bigraph(doc), TwCertTree::parse(slurp(o.twtree)), &why));
    if (!o.chain_decomp.empty())
        record("chain-decomposition",
               verify_chain_decomposition(as_bigraph(doc), ChainDecomposition::parse(slurp(o.chain_decomp)), &why));
    if (!o.p7_tree.empty())
        record("p7-tree", check_p7_tree(as_bigraph(doc), DecompositionTree::parse(slurp(o.p7_tree)), &why));
    if (!o.protocol.empty()) {
        auto t = EqProtocolTree::parse(slurp(o.protocol));
        Graph g = as_graph(doc);
        bool good = t.n == g.n();
        if (!good) why = "protocol is over [" + std::to_string(t.n) + "]";
        for (int x = 0; x < g.n() && good; ++x)
            for (int y = 0; y < g.n() && good; ++y)
                if (x != y && run_protocol(t, x, y).out != g.adj(x, y)) {
                    good = false;
                    why = "wrong output at (" + std::to_string(x) + ", " + std::to_string(y) + ")";
                }
        record("protocol", good);
    }
    if (!o.sequence.empty()) {
        bool good = true;
        try {
            std::cout << "width " << verify_width(as_graph(doc), read_sequence(o.sequence)) << '\n';
        } catch (const std::invalid_argument& e) {
            good = false;
            why = e.what();
        }
        record("sequence", good);
    }
    if (!o.witness.empty()) {
        ChainWitness w = ChainWitness::parse(o.witness);
        bool good = verify_chain_witness(as_graph(doc), w);
        if (!good) why = "not a chain of length " + std::to_string(w.k());
        record("witness", good);
    }
    if (!o.labels.empty()) {
        std::istringstream in(slurp(o.labels));
        EqualityScheme sch = read_labels(in);
        Graph g = as_graph(doc);
        if (sch.n() == 2 * size_t(g.n())) g = bip_transform(g).to_graph();  // diagonal labels live on bip(g)
        long long bad = sch.n() == size_t(g.n()) ? count_errors(sch, g) : -1;
        if (bad != 0) why = bad < 0 ? "label count differs from the graph" : std::to_string(bad) + " wrong ordered pairs";
        record("labels", bad == 0);
    }
    if (!checks) throw std::invalid_argument("nothing to verify: pass a certificate option");
    if (!ok) throw FamilyViolation("verification failed");
    return 0;
}

int cmd_chain_number(const std::string& graph, int cap, bool quasi) {
    GraphDoc doc = read_graph_file(graph);
    ChainResult r = chain_number(as_graph(doc), cap);
    std::cout << "chain-number " << (r.exact ? "" : ">=") << r.k << '\n';
    if (r.k > 0) std::cout << r.witness.str() << '\n';
    if (quasi) std::cout << "quasi-chain-number " << quasi_chain_number(as_bigraph(doc), cap) << '\n';
    return 0;
}

int cmd_twinwidth(const std::string& graph, const std::string& seq_path, bool convex, const std::string& order,
                  const std::string& seq_out) {
    GraphDoc doc = read_graph_file(graph);
    if (!seq_path.empty()) {
        std::cout << "width " << verify_width(as_graph(doc), read_sequence(seq_path)) << '\n';
        return 0;
    }
    UncontractionSequence best;
    if (convex) {
        OrderedBiGraph og{as_bigraph(doc), order.empty() ? std::vector<int>{} : parse_ints(order)};
        if (og.order.empty())
            for (int v = 0; v < og.g.n(); ++v) og.order.push_back(v);
        std::cout << "convex-twin-width " << convex_twin_width_exact(og, &best) << '\n';
    } else {
        std::cout << "twin-width " << twin_width_exact(as_graph(doc), &best) << '\n';
    }
    if (!seq_out.empty()) emit(seq_out, [&](std::ostream& os) { write_sequence(os, best); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pugkit: equality-based labels, adjacency sketches and their certificates"};
    app.require_subcommand(1);

    GenOpts go;
    auto* gen_cmd = app.add_subcommand("gen", "generate a graph, realization or certified instance");
    gen_cmd->add_option("family", go.family,
                        "path cycle complete edgeless star hypercube half-graph threshold co-half-graph half-bigraph "
                        "biclique z t f fstar p7 equivalence chain gnp random-tree random-forest random-bigraph "
                        "p7-free intervals points tw-certified")
        ->required();
    gen_cmd->add_option("--n", go.n, "vertices (leaves for star)");
    gen_cmd->add_option("--k", go.k, "half-graph size");
    gen_cmd->add_option("--d", go.d, "hypercube dimension");
    gen_cmd->add_option("--q", go.q);
    gen_cmd->add_option("--s", go.s);
    gen_cmd->add_option("--p", go.p);
    gen_cmd->add_option("--nx", go.nx);
    gen_cmd->add_option("--ny", go.ny);
    gen_cmd->add_option("--prob", go.prob, "edge probability");
    gen_cmd->add_option("--trees", go.trees, "components of a random forest");
    gen_cmd->add_option("--depth", go.depth, "certificate depth (tw-certified)");
    gen_cmd->add_option("--span", go.span, "coordinate range (intervals)");
    gen_cmd->add_option("--max-len", go.max_len, "longest interval");
    gen_cmd->add_option("--sizes", go.sizes, "class sizes (equivalence)")->delimiter(',');
    gen_cmd->add_option("--profile", go.profile, "neighbourhood sizes of X (chain)")->delimiter(',');
    auto* gen_seed = gen_cmd->add_option("--seed", go.seed, "seed for random families");
    gen_cmd->add_option("--out", go.out, "output file (default stdout)");
    gen_cmd->add_option("--cert-out", go.cert_out, "certificate tree output (tw-certified)");

    std::string graph, out, protocol_out;
    SchemeOpts lo;
    auto* label_cmd = app.add_subcommand("label", "deterministic equality-based labels");
    label_cmd->add_option("graph", graph)->required()->check(CLI::ExistingFile);
    add_scheme_opts(label_cmd, lo);
    label_cmd->add_option("--out", out, "label file (default stdout)");
    label_cmd->add_option("--protocol-out", protocol_out, "also write the equality protocol of the labels");

    SketchOpts so;
    uint64_t seed = 0;
    long long max_n = 1 << 20;
    auto* sketch_cmd = app.add_subcommand("sketch", "randomized sketches from one sample");
    sketch_cmd->add_option("graph", graph, "graph file (optional for product with --factor)")->check(CLI::ExistingFile);
    sketch_cmd->add_option("--scheme", so.scheme, "compressed | boosted | naive | bloom | product | adjacency-product");
    add_scheme_opts(sketch_cmd, so.base, "--base");
    sketch_cmd->add_option("--delta", so.delta, "target error (boosted)");
    sketch_cmd->add_option("--factor", so.factors, "factor graph file (product), repeatable");
    sketch_cmd->add_option("--power", so.power, "use the graph itself as this many factors (product)");
    sketch_cmd->add_option("--seed", seed)->required();
    sketch_cmd->add_option("--out", out, "sketch file (default stdout)");
    sketch_cmd->add_option("--max-n", max_n, "refuse to write more sketches than this");

    std::string qfile, qu, qv;
    auto* query_cmd = app.add_subcommand("query", "decode one pair from a label or sketch file");
    query_cmd->add_option("file", qfile)->required()->check(CLI::ExistingFile);
    query_cmd->add_option("u", qu, "vertex id, or comma-separated coordinates for products")->required();
    query_cmd->add_option("v", qv)->required();

    int trials = 1000, pairs = 200, jobs = 1;
    auto* eval_cmd = app.add_subcommand("eval", "Monte Carlo error rates with Wilson intervals");
    eval_cmd->add_option("graph", graph)->check(CLI::ExistingFile);
    eval_cmd->add_option("--scheme", so.scheme, "compressed | boosted | naive | bloom | product | adjacency-product");
    add_scheme_opts(eval_cmd, so.base, "--base");
    eval_cmd->add_option("--delta", so.delta);
    eval_cmd->add_option("--factor", so.factors);
    eval_cmd->add_option("--power", so.power);
    eval_cmd->add_option("--trials", trials, "encodings per pair");
    eval_cmd->add_option("--pairs", pairs, "sampled pairs");
    eval_cmd->add_option("--seed", seed)->required();
    eval_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    int retries = 20;
    SchemeOpts dbase;
    auto* derand_cmd = app.add_subcommand("derand", "boost to 1/n^3, sample and verify every pair");
    derand_cmd->add_option("graph", graph)->required()->check(CLI::ExistingFile);
    add_scheme_opts(derand_cmd, dbase, "--base");
    derand_cmd->add_option("--seed", seed)->required();
    derand_cmd->add_option("--max-retries", retries);
    derand_cmd->add_option("--out", out);

    VerifyOpts vo;
    auto* verify_cmd = app.add_subcommand("verify", "check certificates and label files against a graph");
    verify_cmd->add_option("graph", vo.graph)->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--twtree", vo.twtree, "twin-width certificate tree");
    verify_cmd->add_option("--chain-decomp", vo.chain_decomp, "chain decomposition");
    verify_cmd->add_option("--p7-tree", vo.p7_tree, "P7-free decomposition tree");
    verify_cmd->add_option("--protocol", vo.protocol, "protocol computing adjacency");
    verify_cmd->add_option("--sequence", vo.sequence, "uncontraction sequence");
    verify_cmd->add_option("--witness", vo.witness, "chain witness, e.g. \"chain 2: a=0,1 b=2,3\"");
    verify_cmd->add_option("--labels", vo.labels, "label file, checked on all pairs");

    int cap = 8;
    bool quasi = false;
    auto* chain_cmd = app.add_subcommand("chain-number", "chain number with a witness");
    chain_cmd->add_option("graph", graph)->required()->check(CLI::ExistingFile);
    chain_cmd->add_option("--cap", cap, "stop once cap + 1 is reached");
    chain_cmd->add_flag("--quasi", quasi, "also the quasi-chain number");

    std::string seq_path, order, seq_out;
    bool convex = false;
    auto* tw_cmd = app.add_subcommand("twinwidth", "exact twin-width (n <= 8) or the width of a sequence");
    tw_cmd->add_option("graph", graph)->required()->check(CLI::ExistingFile);
    tw_cmd->add_option("--sequence", seq_path, "uncontraction sequence file to measure");
    tw_cmd->add_flag("--convex", convex, "convex twin-width of a bipartite graph");
    tw_cmd->add_option("--order", order, "vertex order for --convex (to_graph ids)");
    tw_cmd->add_option("--sequence-out", seq_out, "write an optimal sequence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    go.seeded = gen_seed->count() > 0;

    try {
        if (*gen_cmd) return cmd_gen(go);
        if (*label_cmd) return cmd_label(graph, lo, out, protocol_out);
        if (*sketch_cmd) return cmd_sketch(graph, so, seed, out, max_n);
        if (*query_cmd) return cmd_query(qfile, qu, qv);
        if (*eval_cmd) return cmd_eval(graph, so, trials, pairs, seed, jobs);
        if (*derand_cmd) return cmd_derand(graph, dbase, seed, retries, out);
        if (*verify_cmd) return cmd_verify(vo);
        if (*chain_cmd) return cmd_chain_number(graph, cap, quasi);
        if (*tw_cmd) return cmd_twinwidth(graph, seq_path, convex, order, seq_out);
    } catch (const FamilyViolation& e) {
        std::cerr << "family violation: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

#include <random>
#include <sstream>

#include "doctest.h"
#include "pugkit/bipartite.hpp"
#include "pugkit/communication.hpp"
#include "pugkit/sketch.hpp"

using namespace pugkit;

namespace {

EqProtocolTree eq_tree(int n) {
    EqProtocolTree t;
    t.n = n;
    ProtocolNode e;
    e.kind = ProtocolNode::Kind::Eq;
    for (int v = 0; v < n; ++v) {
        e.a.push_back(v);
        e.b.push_back(v);
    }
    e.child[0] = 1;
    e.child[1] = 2;
    ProtocolNode l0, l1;
    l1.out = true;
    t.nodes = {e, l0, l1};
    return t;
}

// Forest plus random extra edges kept only while the graph stays 2-degenerate.
Graph sparse_graph(int n, uint64_t seed) {
    Graph f = gen::random_forest(n, 1 + int(seed % 3), seed);
    std::vector<Edge> es = f.edges();
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n / 3; ++i) {
        int u = int(rng() % n), v = int(rng() % n);
        if (u == v) continue;
        auto trial = es;
        trial.push_back({std::min(u, v), std::max(u, v)});
        if (degeneracy(Graph(n, trial)) <= 2) es = trial;
    }
    return Graph(n, es);
}

// P4-free edge sets of a small bipartite graph, by the path closure condition.
std::vector<uint32_t> p4_free_sets(int nx, int ny) {
    std::vector<uint32_t> out;
    for (uint32_t m = 0; m < (1u << (nx * ny)); ++m) {
        auto e = [&](int x, int y) { return (m >> (x * ny + y) & 1) != 0; };
        bool ok = true;
        for (int x = 0; x < nx && ok; ++x)
            for (int y = 0; y < ny && ok; ++y)
                for (int x2 = 0; x2 < nx && ok; ++x2)
                    for (int y2 = 0; y2 < ny && ok; ++y2)
                        if (e(x, y) && e(x2, y) && e(x2, y2) && !e(x, y2)) ok = false;
        if (ok) out.push_back(m);
    }
    return out;
}

int brute_interpretable(const BiGraph& g) {
    const int nx = g.nx(), ny = g.ny();
    uint32_t E = 0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            if (g.adj(x, y)) E |= 1u << (x * ny + y);
    auto sets = p4_free_sets(nx, ny);
    const int P = nx * ny;
    for (uint32_t s : sets)
        for (int eta = 0; eta < 4; ++eta) {
            bool ok = true;
            for (int p = 0; p < P && ok; ++p) ok = (eta >> (s >> p & 1) & 1) == int(E >> p & 1);
            if (ok) return 1;
        }
    for (uint32_t s : sets)
        for (uint32_t r : sets)
            for (int eta = 0; eta < 16; ++eta) {
                bool ok = true;
                for (int p = 0; p < P && ok; ++p) ok = (eta >> ((s >> p & 1) | (r >> p & 1) << 1) & 1) == int(E >> p & 1);
                if (ok) return 2;
            }
    return 0;
}

}  // namespace

TEST_CASE("protocol evaluation") {
    auto t = eq_tree(6);
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) {
            auto r = run_protocol(t, x, y);
            CHECK(r.out == (x == y));
            CHECK(r.transcript.size() == 1);
        }
    EqProtocolTree one;
    one.n = 4;
    one.nodes.push_back({});
    one.nodes[0].out = true;
    CHECK(run_protocol(one, 2, 3).out);
    CHECK(run_protocol(one, 2, 3).transcript.empty());
    CHECK(one.depth() == 0);
    CHECK_THROWS_AS(run_protocol(t, 6, 0), std::out_of_range);

    auto r = gen::random_protocol(9, 5, 4);
    auto back = EqProtocolTree::parse(r.str());
    CHECK(back.str() == r.str());
    CHECK(protocol_table(back) == protocol_table(r));
    for (int x = 0; x < 9; ++x)
        for (int y = 0; y < 9; ++y) CHECK(run_protocol(r, x, y).transcript.size() <= size_t(r.depth()));
    CHECK_THROWS_AS(EqProtocolTree::parse("protocol 2\ncomm A 0,1\nleaf 0\n"), FormatError);
    CHECK_THROWS_AS(EqProtocolTree::parse("protocol 2\ncomm A 0,2\nleaf 0\nleaf 1\n"), FormatError);
    CHECK_THROWS_AS(EqProtocolTree::parse("protocol 3\neq 0,1 0,1,2\nleaf 0\nleaf 1\n"), FormatError);
    CHECK_THROWS_AS(EqProtocolTree::parse("protocol 1\nleaf 0\nleaf 1\n"), FormatError);
}

TEST_CASE("normalization to equality nodes") {
    EqProtocolTree a;
    a.n = 4;
    ProtocolNode c;
    c.kind = ProtocolNode::Kind::Comm;
    c.a = {0, 1, 1, 0};
    c.child[0] = 1;
    c.child[1] = 2;
    ProtocolNode l0, l1;
    l1.out = true;
    a.nodes = {c, l0, l1};
    auto e = normalize_to_equality_nodes(a);
    CHECK(e.nodes[0].kind == ProtocolNode::Kind::Eq);
    CHECK(e.nodes[0].a == std::vector<uint64_t>{0, 1, 1, 0});
    CHECK(e.nodes[0].b == std::vector<uint64_t>{1, 1, 1, 1});
    CHECK(normalize_to_equality_nodes(e).str() == e.str());
    for (uint64_t seed = 0; seed < 30; ++seed) {
        int n = seed < 15 ? 16 : 64;
        auto t = gen::random_protocol(n, 6, seed);
        auto u = normalize_to_equality_nodes(t);
        CHECK(u.equality_only());
        CHECK(u.depth() == t.depth());
        CHECK(protocol_table(u) == protocol_table(t));
        auto full = complete_tree(t, t.depth() + 1);
        CHECK(full.nodes.size() == (size_t(2) << (t.depth() + 1)) - 1);
        CHECK(protocol_table(full) == protocol_table(t));
    }
}

TEST_CASE("labels to protocol") {
    Graph eqv = gen::equivalence({3, 1, 4});
    auto t = labels_to_protocol(equivalence_labels(eqv));
    CHECK(t.depth() == 1);
    auto tab = protocol_table(t);
    for (int x = 0; x < eqv.n(); ++x)
        for (int y = 0; y < eqv.n(); ++y)
            if (x != y) CHECK(tab[x][y] == eqv.adj(x, y));

    for (uint64_t seed = 0; seed < 6; ++seed) {
        Graph g = gen::random_forest(64, 3, seed);
        auto sch = forest_labels(g);
        auto p = labels_to_protocol(sch);
        CHECK(p.depth() == sch.s() + sch.k() * sch.k());
        auto pt = protocol_table(p);
        for (int x = 0; x < 64; ++x)
            for (int y = 0; y < 64; ++y) CHECK(pt[x][y] == sch.query(x, y));
    }
    // prefix labels: Bob's answer may add one level
    BiGraph ch = gen::chain_graph(6, {6, 4, 4, 1, 0});
    auto cs = chain_graph_labels(ch, 5);
    auto cp = labels_to_protocol(cs, true);
    CHECK(cp.depth() <= 1 + cs.s() + cs.k() * cs.k() + 1);
    auto ct = protocol_table(cp);
    Graph cg = ch.to_graph();
    for (int x = 0; x < cg.n(); ++x)
        for (int y = 0; y < cg.n(); ++y) CHECK(ct[x][y] == (x != y && cg.adj(x, y)));
}

TEST_CASE("diagonal labels from protocols") {
    // K_n minus a perfect matching: adjacent iff the halves differ
    for (int n : {4, 10, 32}) {
        std::vector<Edge> es;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (u / 2 != v / 2) es.push_back({u, v});
        Graph g(n, es);
        EqProtocolTree t;
        t.n = n;
        ProtocolNode e;
        e.kind = ProtocolNode::Kind::Eq;
        for (int v = 0; v < n; ++v) {
            e.a.push_back(v / 2);
            e.b.push_back(v / 2);
        }
        e.child[0] = 1;
        e.child[1] = 2;
        ProtocolNode l0, l1;
        l0.out = true;
        t.nodes = {e, l0, l1};
        auto sch = protocol_to_diagonal_labels(t, g);
        CHECK(sch.k() == 2);
        CHECK(sch.s() == 0);
        Graph b = bip_transform(g).to_graph();
        CHECK(count_errors(sch, b) == 0);
        CHECK(!sch.query(0, 1));
        CHECK(!sch.query(n, n + 2));
    }
    CHECK_THROWS_AS(protocol_to_diagonal_labels(eq_tree(4), gen::path(4)), std::invalid_argument);

    // round trip through labels, protocol, diagonal labels and a label file
    for (uint64_t seed = 0; seed < 6; ++seed) {
        Graph g = sparse_graph(12 + int(seed) * 4, seed);
        auto p = labels_to_protocol(forest_labels(g), true);
        auto d = protocol_to_diagonal_labels(p, g);
        CHECK(d.k() == (1 << p.depth()));
        std::stringstream ss;
        write_labels(ss, d, false);
        auto back = read_labels(ss);
        CHECK(count_errors(back, bip_transform(g).to_graph()) == 0);
    }
}

TEST_CASE("equivalence interpretations") {
    BiGraph be = gen::bipartite_equivalence({{2, 1}, {1, 3}});
    EquivalenceInterpretation id{1, {false, true}, {be}};
    std::string why;
    CHECK_MESSAGE(verify_equivalence_interpretation(be, id, &why), why);
    BiGraph p4(2, 2, {{0, 0}, {1, 0}, {1, 1}});
    EquivalenceInterpretation bad{1, {false, true}, {p4}};
    CHECK(!verify_equivalence_interpretation(p4, bad, &why));
    CHECK(why.find("P4") != std::string::npos);

    // bip(C4) is two copies of K_{2,2}
    BiGraph c4 = bip_transform(gen::cycle(4));
    auto r = search_interpretation(c4, 2);
    REQUIRE(r.has_value());
    CHECK(r->t == 1);
    CHECK(verify_equivalence_interpretation(c4, *r));

    std::mt19937_64 rng(6);
    for (int i = 0; i < 60; ++i) {
        int nx = 1 + int(rng() % 3), ny = 1 + int(rng() % 3);
        BiGraph g = gen::random_bigraph(nx, ny, 0.5, rng());
        int want = brute_interpretable(g);
        auto got = search_interpretation(g, 2);
        CHECK(got.has_value() == (want > 0));
        if (got) {
            CHECK(got->t == want);
            CHECK(verify_equivalence_interpretation(g, *got));
        }
    }
    // P7 needs more than one slice
    auto p7 = search_interpretation(gen::p7(), 2);
    CHECK((!p7 || p7->t == 2));
    CHECK_THROWS_AS(search_interpretation(gen::random_bigraph(6, 5, 0.5, 1), 2), std::invalid_argument);
}

TEST_CASE("interpretation from diagonal labels") {
    Graph g = gen::equivalence({2, 3, 1});
    auto p = labels_to_protocol(equivalence_labels(g), true);
    REQUIRE(p.depth() == 2);
    auto d = protocol_to_diagonal_labels(p, g);
    auto in = interpretation_from_diagonal(d, g.n());
    std::string why;
    CHECK_MESSAGE(verify_equivalence_interpretation(bip_transform(g), in, &why), why);
}

TEST_CASE("greater-than through a half graph") {
    for (int k = 1; k <= 8; ++k) {
        Graph h = gen::half_graph(k);
        auto cr = chain_number(h, k + 1);
        REQUIRE(cr.k == k);
        auto gt = gt_from_adjacency(adjacency_protocol(h), cr.witness);
        CHECK(gt.n == k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) CHECK(run_protocol(gt, i, j).out == (i <= j));
    }
    auto ap = adjacency_protocol(gen::cycle(7));
    auto tab = protocol_table(ap);
    for (int x = 0; x < 7; ++x)
        for (int y = 0; y < 7; ++y) CHECK(tab[x][y] == gen::cycle(7).adj(x, y));
}

#include <random>
#include <sstream>

#include "doctest.h"
#include "pugkit/structure.hpp"
#include "pugkit/twinwidth.hpp"

using namespace pugkit;

namespace {

UncontractionSequence peel(int n) {
    // {V}, then split off one vertex at a time
    UncontractionSequence s;
    for (int k = 0; k < n; ++k) {
        Partition p;
        std::vector<int> rest;
        for (int v = k; v < n; ++v) rest.push_back(v);
        p.push_back(rest);
        for (int v = 0; v < k; ++v) p.push_back({v});
        s.steps.push_back(p);
    }
    return s;
}

Graph graph_of(int n, uint32_t code) {
    std::vector<Edge> es;
    int b = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++b)
            if (code >> b & 1) es.push_back({u, v});
    return Graph(n, es);
}

}  // namespace

TEST_CASE("width of uncontraction sequences") {
    for (int n : {1, 5, 20, 64}) {
        CHECK(verify_width(gen::complete(n), peel(n)) == 0);
        CHECK(verify_width(gen::edgeless(n), peel(n)) == 0);
    }
    CHECK(verify_width(gen::path(4), peel(4)) >= 1);
    UncontractionSequence bad = peel(4);
    bad.steps.erase(bad.steps.begin() + 1);
    CHECK_THROWS_AS(verify_width(gen::path(4), bad), std::invalid_argument);
    bad = peel(4);
    bad.steps.pop_back();
    CHECK_THROWS_AS(verify_width(gen::path(4), bad), std::invalid_argument);
}

TEST_CASE("exact twin-width") {
    // values from an independent brute force
    CHECK(twin_width_exact(gen::path(4)) == 1);
    CHECK(twin_width_exact(gen::cycle(4)) == 0);
    CHECK(twin_width_exact(gen::cycle(5)) == 2);
    CHECK(twin_width_exact(gen::path(5)) == 1);
    CHECK(twin_width_exact(gen::cycle(6)) == 2);
    CHECK(twin_width_exact(gen::complete(4)) == 0);
    CHECK(twin_width_exact(gen::path(7)) == 1);
    CHECK(twin_width_exact(gen::cycle(7)) == 2);
    CHECK(twin_width_exact(gen::hypercube(3)) == 2);
    UncontractionSequence best;
    int w = twin_width_exact(gen::cycle(6), &best);
    CHECK(verify_width(gen::cycle(6), best) == w);
    CHECK_THROWS_AS(twin_width_exact(gen::path(9)), std::invalid_argument);
    for (uint32_t code = 0; code < 64; ++code) {
        Graph g = graph_of(4, code);
        CHECK(twin_width_exact(g) == min_width_by_enumeration(g));
    }
    std::mt19937_64 rng(3);
    for (int i = 0; i < 12; ++i) {
        Graph g = graph_of(6, uint32_t(rng() & 0x7fff));
        CHECK(twin_width_exact(g) == min_width_by_enumeration(g));
    }
}

TEST_CASE("width is the largest partition width") {
    // every valid sequence has exactly n steps, so padding can only repeat a step;
    // a repeated step is rejected, and the width never drops below any single step's
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        Graph g = graph_of(7, uint32_t(rng() & 0x1fffff));
        UncontractionSequence s;
        twin_width_exact(g, &s);
        int w = verify_width(g, s), top = 0;
        for (const auto& p : s.steps) top = std::max(top, partition_width(g, p));
        CHECK(w == top);
        UncontractionSequence padded = s;
        size_t i = rng() % s.steps.size();
        padded.steps.insert(padded.steps.begin() + i, s.steps[i]);
        CHECK_THROWS_AS(verify_width(g, padded), std::invalid_argument);
        UncontractionSequence peeled = peel(7);
        CHECK(verify_width(g, peeled) >= w);
    }
}

TEST_CASE("convex twin-width") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 40; ++t) {
        int nx = 1 + int(rng() % 4), ny = 1 + int(rng() % 4);
        std::vector<Edge> es;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                if (rng() % 2) es.push_back({x, y});
        OrderedBiGraph og{BiGraph(nx, ny, es), {}};
        for (int v = 0; v < nx + ny; ++v) og.order.push_back(v);
        std::shuffle(og.order.begin(), og.order.end(), rng);
        UncontractionSequence best;
        int c = convex_twin_width_exact(og, &best);
        CHECK(verify_convex_width(og, best) == c);
        CHECK(twin_width_exact(og.g.to_graph()) <= c);
    }
    // half graph in its natural order has convex twin-width 1
    BiGraph h = gen::half_bigraph(4);
    OrderedBiGraph og{h, {}};
    for (int v = 0; v < h.n(); ++v) og.order.push_back(v);
    CHECK(convex_twin_width_exact(og) <= 2);
    UncontractionSequence s;
    s.steps.push_back({{0, 1, 2, 3, 4, 5, 6, 7}});
    CHECK_THROWS_AS(verify_convex_width(og, s), std::invalid_argument);
}

TEST_CASE("flips and quotients") {
    BiGraph g = gen::half_bigraph(3);
    std::vector<std::vector<bool>> f;
    CHECK(apply_flips(g, {}, &f).edges() == g.edges());
    for (const auto& row : f) CHECK(row.empty());
    Flip all{{0, 1, 2}, {3, 4, 5}};
    CHECK(apply_flips(g, {all}).edges() == bipartite_complement(g).edges());
    CHECK(apply_flips(g, {all, all}).edges() == g.edges());
    apply_flips(g, {Flip{{1}, {4}}, all}, &f);
    CHECK(f[1][0]);
    CHECK(!f[0][0]);
    CHECK(f[4][1]);
    CHECK_THROWS_AS(apply_flips(g, {Flip{{3}, {}}}), std::invalid_argument);
    // quotient edges against brute force
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        BiGraph b = gen::random_bigraph(6, 5, 0.3, t);
        Partition d{{0, 1}, {2}, {3, 4, 5}, {6, 7}, {8, 9, 10}};
        Graph H = quotient_graph(b, d);
        for (int p = 0; p < 3; ++p)
            for (int q = 3; q < 5; ++q) {
                bool any = false;
                for (int x : d[p])
                    for (int y : d[q]) any = any || b.adj(x, y - 6);
                CHECK(H.adj(p, q) == any);
            }
    }
}

TEST_CASE("certificates") {
    // bipartite equivalence graph: one flip erases every edge, singleton division
    BiGraph g = gen::bipartite_equivalence({{2, 2}, {1, 2}});
    TwCertificate c;
    for (int v = 0; v < g.n(); ++v) {
        c.order.push_back(v);
        c.division.push_back({v});
    }
    c.flips.push_back({{0, 1}, {3, 4}});
    c.flips.push_back({{2}, {5, 6}});
    std::string why;
    Graph H;
    CHECK_MESSAGE(verify_certificate(g, c, &why, &H), why);
    CHECK(H.m() == 0);
    auto back = TwCertificate::parse(c.str());
    CHECK(back.str() == c.str());

    // a P4 inside a claimed star slice
    BiGraph p4(2, 2, {{0, 0}, {1, 0}, {1, 1}});
    TwCertificate s;
    s.order = {0, 1, 2, 3};
    s.division = {{0}, {1}, {2}, {3}};
    s.usets = {{0, 1, 2, 3}};
    s.stars = {{Star{1, {2, 3}}}};
    CHECK(!verify_certificate(p4, s, &why));
    CHECK(why.find("star forest") != std::string::npos);
    // the same edge in two usets
    TwCertificate d;
    d.order = {0, 1, 2, 3};
    d.division = {{0}, {1}, {2}, {3}};
    d.usets = {{0, 2}, {0, 2, 1, 3}};
    d.stars = {{Star{0, {2}}}, {Star{0, {2}}, Star{1, {3}}}};
    BiGraph m2(2, 2, {{0, 0}, {1, 1}});
    CHECK(!verify_certificate(m2, d, &why));
    CHECK(why.find("2 usets") != std::string::npos);
    d.usets = {{0, 2}, {1, 3}};
    d.stars = {{Star{0, {2}}}, {Star{1, {3}}}};
    CHECK_MESSAGE(verify_certificate(m2, d, &why), why);
    // not convex
    TwCertificate nc = d;
    nc.order = {1, 0, 2, 3};
    nc.division = {{0}, {1}, {2}, {3}};
    CHECK(verify_certificate(m2, nc, &why));
    nc.division = {{0, 1}, {2}, {3}};
    nc.order = {0, 2, 1, 3};
    nc.usets = {};
    nc.stars = {};
    CHECK(!verify_certificate(m2, nc, &why));  // edge (01, 2) not covered
    CHECK_THROWS_AS(TwCertificate::parse("flip 1 2\n"), FormatError);
    CHECK_THROWS_AS(TwCertificate::parse("order 0 x\n"), FormatError);
}

TEST_CASE("certificate-driven labels") {
    // depth 0: leaf-only tree reduces to bipartite equivalence labels
    BiGraph e = gen::bipartite_equivalence({{3, 1}, {2, 2}, {0, 1}});
    TwCertTree leaf;
    leaf.nodes.push_back({});
    auto s0 = tw_labels(e, leaf);
    CHECK(count_errors(s0, e.to_graph()) == 0);
    CHECK_THROWS_AS(tw_labels(gen::half_bigraph(3), leaf), FamilyViolation);

    for (uint64_t seed = 1; seed <= 8; ++seed) {
        int depth = 1 + int(seed % 2);
        TwCertTree t;
        BiGraph g = gen::tw_certified(depth == 1 ? 6 : 9, depth == 1 ? 6 : 9, depth, seed, &t);
        std::string why;
        REQUIRE_MESSAGE(verify_tree(g, t, &why), why);
        CHECK(t.depth() <= depth);
        auto sch = tw_labels(g, t);
        CHECK(count_errors(sch, g.to_graph()) == 0);
        auto back = TwCertTree::parse(t.str());
        CHECK(back.str() == t.str());
        std::stringstream ss;
        write_labels(ss, sch, false);
        CHECK(count_errors(read_labels(ss), g.to_graph()) == 0);
        if (g.n() <= 16) CHECK(t.depth() <= quasi_chain_number(g, g.n()));
    }
    // larger instances: exact decoding on all pairs
    for (uint64_t seed = 20; seed < 23; ++seed) {
        TwCertTree t;
        BiGraph g = gen::tw_certified(40, 40, 2, seed, &t);
        CHECK(count_errors(tw_labels(g, t), g.to_graph()) == 0);
    }
}

#include <sstream>

#include "doctest.h"
#include "pugkit/sketch.hpp"

using namespace pugkit;

namespace {
std::function<bool(int, int)> oracle(const Graph& g) {
    return [&g](int u, int v) { return g.adj(u, v); };
}
}  // namespace

TEST_CASE("forest and equivalence labels are exact") {
    Graph t = gen::random_tree(50, 3);
    auto sch = forest_labels(t);
    CHECK(sch.k() == 2);
    CHECK(sch.s() == 0);
    CHECK(count_errors(sch, t) == 0);
    Graph g = gen::gnp(40, 0.15, 9);
    CHECK(count_errors(forest_labels(g), g) == 0);
    Graph e = gen::equivalence({3, 2, 1, 4});
    auto es = equivalence_labels(e);
    CHECK(es.k() == 1);
    CHECK(count_errors(es, e) == 0);
    CHECK_THROWS_AS(equivalence_labels(gen::path(3)), FamilyViolation);
}

TEST_CASE("label files round trip") {
    Graph g = gen::gnp(25, 0.2, 4);
    auto sch = forest_labels(g);
    for (bool table : {false, true}) {
        std::stringstream ss;
        write_labels(ss, sch, table);
        auto back = read_labels(ss);
        CHECK(back.labels == sch.labels);
        CHECK(count_errors(back, g) == 0);
    }
    std::stringstream bad("labels g s=0 k=1 width=1\nv 0 - 1\ndecoder tree {\"kind\":\"nope\"}\n");
    CHECK_THROWS_AS(read_labels(bad), FormatError);
}

TEST_CASE("tabulated decoder agrees with the tree decoder") {
    Graph t = gen::random_tree(30, 8);
    auto sch = forest_labels(t);
    auto tab = tabulate(sch);
    REQUIRE(tab);
    EqualityScheme s2 = sch;
    s2.decoder = tab;
    CHECK(count_errors(s2, t) == 0);
}

TEST_CASE("compression") {
    Graph t = gen::random_tree(40, 2);
    CompressedScheme cs(forest_labels(t));
    CHECK(cs.alphabet() == 12);
    auto smp = cs.sample(5);
    // equal codes always stay equal, so adjacent pairs never fail
    for (auto [u, v] : t.edges()) CHECK(cs.query(*smp, u, v) == 1);
    for (int u = 0; u < 10; ++u)
        for (int v = 0; v < 10; ++v) CHECK(cs.query(*smp, u, v) == cs.decode(smp->sketch(u), smp->sketch(v)));
    auto dec = sketch_decoder_from_json(cs.describe());
    CHECK(dec(smp->sketch(0), smp->sketch(1)) == cs.decode(smp->sketch(0), smp->sketch(1)));
}

TEST_CASE("boosting") {
    CHECK(boost_copies(1.0 / 3.0) == 1);
    CHECK(boost_copies(0.1) == 7);
    CHECK(boost_copies(0.01) == 14);
    CHECK(boost_copies(1e-6) == 42);
    Graph t = gen::random_tree(20, 1);
    auto base = std::make_shared<CompressedScheme>(forest_labels(t));
    auto b = boost(base, 0.01);
    CHECK(b->width() == 14 * base->width());
    auto smp = b->sample(3);
    for (int u = 0; u < 20; ++u)
        for (int v = 0; v < 20; ++v) CHECK(b->query(*smp, u, v) == b->decode(smp->sketch(u), smp->sketch(v)));
    auto dec = sketch_decoder_from_json(b->describe());
    CHECK(dec(smp->sketch(2), smp->sketch(7)) == b->decode(smp->sketch(2), smp->sketch(7)));
}

TEST_CASE("naive derandomization") {
    Graph e = gen::edgeless(8);
    auto es = equivalence_labels(e);
    auto nv = naive_derandomize(es);
    CHECK(nv->width() == 3);
    Graph t = gen::random_tree(64, 6);
    auto ns = naive_derandomize(forest_labels(t));
    CHECK(ns->width() == 2 * 6);
    auto smp = ns->sample(0);
    for (int u = 0; u < 64; ++u)
        for (int v = 0; v < 64; ++v)
            if (u != v) CHECK((ns->query(*smp, u, v) == 1) == t.adj(u, v));
}

TEST_CASE("bloom forest sketch") {
    Graph g = gen::random_forest(60, 3, 4);
    BloomForestScheme bs(g);
    CHECK(bs.alpha() == 1);
    CHECK(bs.width() == 6 + 3);
    auto adj = oracle(g);
    auto pairs = sample_pairs(60, 400, 1, adj);
    auto rep = evaluate_error(bs, adj, pairs, 200, 7);
    CHECK(rep.adjacent.errors == 0);
    CHECK(rep.nonadjacent.rate() < 0.4);
    auto rep2 = evaluate_error(bs, adj, pairs, 200, 7, 3);
    CHECK(rep2.nonadjacent.errors == rep.nonadjacent.errors);
}

TEST_CASE("derandomize") {
    Graph t = gen::random_tree(30, 12);
    auto nv = naive_derandomize(forest_labels(t));
    auto r = derandomize(nv, oracle(t), 1, 3);
    CHECK(r.ok);
    CHECK(r.attempts == 1);
    auto r2 = derandomize(std::make_shared<CompressedScheme>(forest_labels(t)), oracle(t), 5, 10);
    CHECK(r2.ok);
    CHECK(r2.labels.size() == 30);
}

TEST_CASE("wilson interval") {
    auto [lo, hi] = wilson(0, 100);
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(0.037).epsilon(0.01));
    auto [l2, h2] = wilson(50, 100);
    CHECK(l2 < 0.5);
    CHECK(h2 > 0.5);
}

TEST_CASE("PUG export") {
    Graph t = gen::path(2);
    auto nv = naive_derandomize(equivalence_labels(gen::complete(2)));
    auto p = export_pug(*nv);
    CHECK(p.nodes() == 2);
    BloomForestScheme bs(gen::path(5));
    auto pug = export_pug(bs);
    CHECK(pug.c == 9);
    auto smp = bs.sample(4);
    for (int u = 0; u < 5; ++u)
        for (int v = 0; v < 5; ++v)
            CHECK(pug.adj(PugView::node_of(smp->sketch(u)), PugView::node_of(smp->sketch(v))) ==
                  (bs.query(*smp, u, v) == 1));
    CHECK(pug.to_graph().n() == 512);
}

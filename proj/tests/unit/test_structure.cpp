#include "doctest.h"
#include "pugkit/structure.hpp"

using namespace pugkit;

TEST_CASE("chain number") {
    CHECK(chain_number(gen::half_graph(5), 6).k == 5);
    CHECK(chain_number(gen::edgeless(6), 6).k == 0);
    CHECK(chain_number(gen::path(4), 6).k == 2);
    CHECK(chain_number(gen::cycle(4), 6).k == 1);
    CHECK(chain_number(gen::cycle(5), 6).k == 2);
    auto r = chain_number(gen::half_graph(6), 3);
    CHECK(r.k == 4);
    CHECK(!r.exact);
    CHECK(verify_chain_witness(gen::half_graph(6), r.witness));
    auto w = ChainWitness::parse(r.witness.str());
    CHECK(w.a == r.witness.a);
    CHECK(w.b == r.witness.b);
}

TEST_CASE("quasi-chain number") {
    CHECK(quasi_chain_number(bipartite_complement(gen::biclique(2, 2)), 10) == 1);
    CHECK(quasi_chain_number(gen::half_bigraph(3), 20) >= 3);
    CHECK(quasi_chain_number(gen::half_bigraph(3), 1) == 2);
}

TEST_CASE("twin partitions") {
    CHECK(twin_partition(gen::complete(5), true).classes.size() == 1);
    CHECK(twin_partition(gen::edgeless(5), false).classes.size() == 1);
    CHECK(twin_partition(gen::cycle(5), true).classes.size() == 5);
    CHECK(twin_partition(gen::cycle(5), false).classes.size() == 5);
    auto t = twin_partition(gen::star(3), false);
    CHECK(t.classes.size() == 2);
}

TEST_CASE("forest partitions") {
    Graph t = gen::random_tree(40, 5);
    auto fp = forest_partition(t);
    CHECK(fp.alpha == 1);
    CHECK(check_forest_partition(t, fp));
    CHECK(forest_partition(gen::complete(4)).alpha == 3);
    for (int d = 1; d <= 5; ++d) {
        auto q = forest_partition(gen::hypercube(d));
        CHECK(q.alpha == d);
        CHECK(check_forest_partition(gen::hypercube(d), q));
    }
    Graph g = gen::gnp(60, 0.2, 11);
    CHECK(check_forest_partition(g, forest_partition(g)));
}

TEST_CASE("interval clique number") {
    std::vector<Interval> same(6, Interval{0, 1});
    CHECK(interval_clique_number(same) == 6);
    CHECK(interval_clique_number({{0, 1}, {2, 3}, {4, 5}}) == 1);
    std::vector<Interval> stair;
    for (int i = 0; i < 10; ++i) stair.push_back({double(i), double(i) + 3.5});
    Graph g = interval_graph(stair);
    int brute = 0;
    for (int x = 0; x < 15; ++x) {
        int c = 0;
        for (auto iv : stair)
            if (iv.l <= x && x <= iv.r) ++c;
        brute = std::max(brute, c);
    }
    CHECK(interval_clique_number(stair) == brute);
    CHECK(g.m() == 10 * 3 - 6);
    CHECK_THROWS(interval_clique_number({{2, 1}}));
}

TEST_CASE("recognizers") {
    CHECK(is_equivalence_graph(gen::equivalence({3, 1, 2})));
    CHECK(!is_equivalence_graph(gen::path(3)));
    CHECK(is_chain_graph(gen::half_bigraph(4)));
    CHECK(!is_chain_graph(gen::bipartite_equivalence({{1, 1}, {1, 1}})));
    CHECK(is_bipartite_equivalence(gen::bipartite_equivalence({{2, 3}, {1, 1}})));
    CHECK(!is_bipartite_equivalence(gen::half_bigraph(2)));
}

#include <sstream>

#include "doctest.h"
#include "pugkit/graph.hpp"
#include "pugkit/structure.hpp"

using namespace pugkit;

TEST_CASE("induced subgraphs") {
    Graph c4 = gen::cycle(4);
    CHECK(induced_subgraph(c4, {0, 1, 2, 3}).g.m() == 4);
    auto p3 = induced_subgraph(c4, {0, 1, 2});
    CHECK(p3.g.m() == 2);
    CHECK(p3.orig == std::vector<int>{0, 1, 2});
    Graph h5 = gen::half_graph(5);
    auto h3 = induced_subgraph(h5, {0, 1, 2, 5, 6, 7});
    CHECK(h3.g.m() == gen::half_graph(3).m());
    for (int u = 0; u < 6; ++u)
        for (int v = 0; v < 6; ++v)
            if (u != v) CHECK(h3.g.adj(u, v) == gen::half_graph(3).adj(u, v));
    CHECK_THROWS(induced_subgraph(c4, {0, 7}));
}

TEST_CASE("bipartite complement and bip") {
    BiGraph b = gen::biclique(2, 3);
    BiGraph c = bipartite_complement(b);
    CHECK(c.m() == 0);
    CHECK(bipartite_complement(c).m() == 6);
    BiGraph k2 = bip_transform(gen::complete(2));
    CHECK(k2.edges() == std::vector<Edge>{{0, 1}, {1, 0}});
    CHECK(bip_transform(gen::edgeless(4)).m() == 0);
    Graph g = gen::gnp(20, 0.3, 7);
    CHECK(bip_transform(g).m() == 2 * g.m());
    CHECK(bipartite_complement(gen::p7()).m() == 12 - 6);
}

TEST_CASE("cartesian products") {
    Product c4 = cartesian_product({gen::path(2), gen::path(2)});
    CHECK(c4.g.n() == 4);
    CHECK(c4.g.m() == 4);
    Product q3 = cartesian_product({gen::path(2), gen::path(2), gen::path(2)});
    CHECK(q3.g.m() == 12);
    Product p = cartesian_product({gen::path(3), gen::cycle(4), gen::path(2)});
    CHECK(p.g.n() == 24);
    CHECK(p.g.m() == 2 * 8 + 4 * 6 + 1 * 12);
    auto d = bfs_distances(q3.g, 0);
    for (int v = 0; v < 8; ++v) {
        auto c = q3.coords(v);
        CHECK(d[v] == c[0] + c[1] + c[2]);
        CHECK(q3.id(c) == v);
    }
    CHECK_THROWS_AS(cartesian_product({gen::path(100), gen::path(100)}, 1000), std::overflow_error);
}

TEST_CASE("generators") {
    Graph h = gen::half_graph(3);
    CHECK(h.n() == 6);
    CHECK(h.m() == 6);
    CHECK(gen::half_graph(5).m() == 15);
    BiGraph z = gen::z_graph(2, 2);
    CHECK(z.nx() == 2);
    CHECK(z.ny() == 4);
    CHECK(z.xnbrs(0) == std::vector<int>{0, 1});
    CHECK(z.xnbrs(1) == std::vector<int>{0, 1, 2, 3});
    Graph q3 = gen::hypercube(3);
    Graph pp = cartesian_product({gen::path(2), gen::path(2), gen::path(2)}).g;
    CHECK(q3.edges() == pp.edges());
    CHECK(gen::hypercube(4).m() == 32);
    CHECK(gen::p7().m() == 6);
    Graph e = gen::equivalence({3, 2});
    CHECK(e.m() == 4);
    CHECK(gen::random_tree(30, 1).m() == 29);
}

TEST_CASE("graph file round trip") {
    Graph g = gen::gnp(12, 0.4, 3);
    g.name = "sample";
    std::stringstream ss;
    write_graph(ss, g);
    GraphDoc d = read_graph(ss);
    CHECK(!d.bipartite);
    CHECK(d.g.name == "sample");
    CHECK(d.g.edges() == g.edges());
    BiGraph b = gen::z_graph(3, 2);
    std::stringstream sb;
    write_graph(sb, b);
    GraphDoc db = read_graph(sb);
    CHECK(db.bipartite);
    CHECK(db.bg.edges() == b.edges());
    std::stringstream dup("graph x 3\ne 0 1\ne 1 0\n");
    CHECK_THROWS_AS(read_graph(dup), FormatError);
    std::stringstream loop("graph x 3\ne 1 1\n");
    CHECK_THROWS_AS(read_graph(loop), FormatError);
    std::stringstream junk("graph x three\n");
    CHECK_THROWS_AS(read_graph(junk), FormatError);
}

#include <random>

#include "doctest.h"
#include "pugkit/product.hpp"

using namespace pugkit;

namespace {

std::vector<Graph> copies(const Graph& g, int d) { return std::vector<Graph>(d, g); }

int hamming(const std::vector<int>& x, const std::vector<int>& y) {
    int h = 0;
    for (size_t i = 0; i < x.size(); ++i) h += x[i] != y[i];
    return h;
}

}  // namespace

TEST_CASE("finite family distance sketch") {
    FamilyDistanceScheme f({gen::path(3), gen::path(5)}, 2);
    auto s = f.sample(1);
    CHECK(f.query(*s, 0, 2) == 2);
    CHECK(f.query(*s, 1, 1) == 0);
    int p5 = f.offset(1);
    CHECK(f.query(*s, p5, p5 + 4) == kBottom);
    CHECK(f.query(*s, p5, p5 + 2) == 2);
    CHECK(f.query(*s, 0, p5) == kBottom);  // different graphs
    auto dec = sketch_decoder_from_json(f.describe());
    CHECK(dec(f.label(0), f.label(2)) == 2);
    CHECK(dec(f.label(p5), f.label(p5 + 3)) == kBottom);
    FamilyDistanceScheme disc({Graph(3)}, 3);
    CHECK(disc.decode(disc.label(0), disc.label(1)) == kBottom);
}

TEST_CASE("product parameters") {
    auto p = default_product_params(2);
    CHECK(p.m == 36);
    CHECK(p.t == 18);
    CHECK(product_params_ok(2, p));
    CHECK(!product_params_ok(2, {35, 18}));
    CHECK(!product_params_ok(2, {36, 17}));
    for (int k = 1; k <= 6; ++k) {
        auto q = default_product_params(k);
        CHECK(product_params_ok(k, q));
        CHECK(!product_params_ok(k, {q.m - 1, q.t}));
        CHECK(!product_params_ok(k, {q.m, q.t - 1}));
    }
    CHECK_THROWS_AS(product_distance_scheme({gen::path(3)}, 2, {10, 10}), std::invalid_argument);
}

TEST_CASE("product labels: width, cancellation, single factor") {
    auto sch = product_distance_scheme({gen::path(3)}, 2);
    CHECK(sch->width() == 36 * 18 * (sch->s() + 1));
    auto smp = sch->sample_product(7);
    for (int v = 0; v < 3; ++v) {
        BitString l = smp->sketch(v);
        CHECK(int(l.size()) == sch->width());
        int touched = 0;
        for (int c = 0; c < 36 * 18; ++c) touched += l.get(size_t(c) * (sch->s() + 1) + sch->s());
        CHECK(touched == 1);
    }
    CHECK(sch->query(*smp, 1, 1) == 0);

    auto q = product_distance_scheme(copies(gen::path(4), 5), 3);
    auto qs = q->sample_product(3);
    std::vector<int> x{0, 1, 2, 3, 0}, y{0, 1, 2, 3, 0};
    BitString lx = qs->sketch_coords(x), ly = qs->sketch_coords(y);
    CHECK(lx == ly);
    CHECK(q->decode(lx, ly) == 0);
    // a coordinate shared by x and y cancels from the XOR of their labels
    std::vector<int> x2{2, 1, 2, 3, 0}, y2{2, 0, 2, 3, 0}, x3{3, 1, 2, 3, 0}, y3{3, 0, 2, 3, 0};
    BitString d2(size_t(q->width())), d3(size_t(q->width()));
    BitString a = qs->sketch_coords(x2), b = qs->sketch_coords(y2), c = qs->sketch_coords(x3), e = qs->sketch_coords(y3);
    for (size_t i = 0; i < d2.size(); ++i) {
        d2.set(i, a.get(i) != b.get(i));
        d3.set(i, c.get(i) != e.get(i));
    }
    CHECK(d2 == d3);
}

TEST_CASE("product sketch on P3 and P5 factors") {
    auto sch = product_distance_scheme({gen::path(3)}, 2);
    int ok = 0;
    for (uint64_t seed = 0; seed < 60; ++seed) ok += sch->query(*sch->sample(seed), 0, 2) == 2;
    CHECK(ok >= 40);
    auto s5 = product_distance_scheme({gen::path(5)}, 2);
    int bot = 0;
    for (uint64_t seed = 0; seed < 60; ++seed) {
        auto smp = s5->sample_product(seed);
        int got = s5->query(*smp, 0, 4);
        bot += got == kBottom;
        // exact base: the only failure is a slot collision, where the two labels cancel
        if (got != kBottom) CHECK((got == 0 && smp->slot(0, 0) == smp->slot(0, 4)));
    }
    CHECK(bot * 3 >= 2 * 60);
}

TEST_CASE("hypercube Q8 with k = 3") {
    auto sch = product_distance_scheme(copies(gen::path(2), 8), 3);
    std::mt19937_64 rng(11);
    int trials = 600, good2 = 0, bot = 0, far = 0;
    for (int tr = 0; tr < trials; ++tr) {
        auto smp = sch->sample_product(1000 + tr);
        std::vector<int> x(8), y;
        for (auto& c : x) c = int(rng() & 1);
        y = x;
        y[rng() % 8] ^= 1;
        int j;
        do j = int(rng() % 8);
        while (y[j] != x[j]);
        y[j] ^= 1;
        REQUIRE(hamming(x, y) == 2);
        good2 += sch->decode(smp->sketch_coords(x), smp->sketch_coords(y)) == 2;
        // 4 to 8 differing coordinates
        std::vector<int> z = x;
        int flips = 4 + int(rng() % 5);
        std::vector<int> order{0, 1, 2, 3, 4, 5, 6, 7};
        std::shuffle(order.begin(), order.end(), rng);
        for (int f = 0; f < flips; ++f) z[order[f]] ^= 1;
        ++far;
        bot += sch->decode(smp->sketch_coords(x), smp->sketch_coords(z)) == kBottom;
    }
    CHECK(good2 * 3 >= 2 * trials);
    CHECK(bot * 3 >= 2 * far);
}

TEST_CASE("good events give exact answers") {
    std::vector<Graph> fs{gen::path(4), gen::cycle(5), gen::path(3), gen::star(3), gen::path(4)};
    for (int k : {1, 2, 3}) {
        auto sch = product_distance_scheme(fs, k);
        std::mt19937_64 rng(k);
        int events = 0;
        for (int tr = 0; tr < 400; ++tr) {
            auto smp = sch->sample_product(tr * 31 + k);
            std::vector<int> x(fs.size()), y(fs.size());
            for (size_t i = 0; i < fs.size(); ++i) {
                x[i] = int(rng() % fs[i].n());
                y[i] = rng() % 2 ? x[i] : int(rng() % fs[i].n());
            }
            if (hamming(x, y) > k || !product_good_events(*sch, fs, *smp, x, y)) continue;
            ++events;
            int d = 0;
            for (size_t i = 0; i < fs.size(); ++i) d += bfs_distances(fs[i], x[i])[y[i]];
            int want = d > k ? kBottom : d;
            CHECK(sch->decode(smp->sketch_coords(x), smp->sketch_coords(y)) == want);
        }
        CHECK(events > 100);
    }
}

TEST_CASE("product decoder from description") {
    auto sch = product_distance_scheme(copies(gen::cycle(6), 3), 2);
    auto dec = sketch_decoder_from_json(sch->describe());
    auto smp = sch->sample(4);
    for (int u = 0; u < sch->n(); u += 17)
        for (int v = 0; v < sch->n(); v += 13) CHECK(dec(smp->sketch(u), smp->sketch(v)) == sch->query(*smp, u, v));
    json bad = sch->describe();
    bad["m"] = 3;
    CHECK_THROWS_AS(sketch_decoder_from_json(bad), FormatError);
}

TEST_CASE("hamming spread") {
    CHECK(hamming_spread_check(10, 1, 0, 0.99, 200, 1).errors == 0);
    Rate r = hamming_spread_check(108, 2, 1, 1.0 / 3, 200000, 2);
    CHECK(r.lo() <= 1.0 / 108);
    CHECK(r.hi() >= 1.0 / 108);
    Rate r10 = hamming_spread_check(243, 10, 2, 1.0 / 3, 20000, 3);
    CHECK(r10.hi() < 1.0 / 3);
    CHECK_THROWS_AS(hamming_spread_check(100, 2, 1, 1.0 / 3, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(hamming_spread_check(1000, 2, 2, 1.0 / 3, 10, 1), std::invalid_argument);
}

TEST_CASE("adjacency from distance one") {
    auto sch = adjacency_from_distance1(copies(gen::path(2), 6));
    std::mt19937_64 rng(5);
    int adj_ok = 0, far_ok = 0, trials = 300;
    for (int tr = 0; tr < trials; ++tr) {
        auto smp = sch->sample(tr);
        int x = int(rng() % 64), bit = int(rng() % 6);
        int y = x ^ (1 << bit);
        CHECK(sch->query(*smp, x, x) == 0);
        adj_ok += sch->query(*smp, x, y) == 1;
        int z = x ^ 0b111 << int(rng() % 4);
        far_ok += sch->query(*smp, x, z) == 0;
    }
    CHECK(adj_ok * 3 >= 2 * trials);
    CHECK(far_ok * 3 >= 2 * trials);
    auto dec = sketch_decoder_from_json(sch->describe());
    auto smp = sch->sample(1);
    CHECK(dec(smp->sketch(0), smp->sketch(1)) == sch->query(*smp, 0, 1));
}

TEST_CASE("majority vote") {
    CHECK(majority_vote({1, 1, 0}) == 1);
    CHECK(majority_vote({0, 1}) == 0);
    CHECK(majority_vote({2, 2, kBottom}) == 2);
    CHECK(majority_vote({2, 3, kBottom}) == kBottom);
}

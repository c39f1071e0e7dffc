#include "pugkit/geometric.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "pugkit/bipartite.hpp"
#include "pugkit/sketch.hpp"

namespace pugkit {

namespace {

bool next_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        auto p = line.find('#');
        if (p != std::string::npos) line.erase(p);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

[[noreturn]] void bad(int lineno, const std::string& what) {
    throw FormatError("line " + std::to_string(lineno) + ": " + what);
}

// Reads `<head> <name>` then `<tag> <id> <a> <b>` lines with ids 0..n-1 in any order.
std::pair<std::string, std::vector<std::pair<double, double>>> read_pairs(std::istream& in, const std::string& head,
                                                                           const std::string& tag) {
    std::string line, kind, name, extra;
    int lineno = 0;
    if (!next_line(in, line, lineno)) throw FormatError("empty " + head + " file");
    std::istringstream hs(line);
    if (!(hs >> kind >> name) || kind != head || (hs >> extra)) bad(lineno, "expected '" + head + " <name>'");
    std::vector<std::pair<int, std::pair<double, double>>> rows;
    while (next_line(in, line, lineno)) {
        std::istringstream ls(line);
        std::string t;
        int id;
        double a, b;
        if (!(ls >> t >> id >> a >> b) || t != tag || (ls >> extra))
            bad(lineno, "expected '" + tag + " <id> <a> <b>'");
        rows.push_back({id, {a, b}});
    }
    std::vector<std::pair<double, double>> out(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (auto& [id, v] : rows) {
        if (id < 0 || id >= int(rows.size()) || seen[id]) throw FormatError("ids must be 0..n-1, each once");
        seen[id] = true;
        out[id] = v;
    }
    return {name, out};
}

std::vector<int> axis_rank(const std::vector<std::pair<double, double>>& p, bool second) {
    std::vector<int> o(p.size());
    std::iota(o.begin(), o.end(), 0);
    std::sort(o.begin(), o.end(), [&](int a, int b) {
        auto ka = second ? std::make_pair(p[a].second, p[a].first) : p[a];
        auto kb = second ? std::make_pair(p[b].second, p[b].first) : p[b];
        return ka < kb;
    });
    std::vector<int> r(p.size());
    for (size_t i = 0; i < o.size(); ++i) r[o[i]] = static_cast<int>(i);
    return r;
}

bool comparable(std::pair<double, double> a, std::pair<double, double> b) {
    return (a.first <= b.first && a.second <= b.second) || (b.first <= a.first && b.second <= a.second);
}

PermutationRealization sub_realization(const PermutationRealization& r, const std::vector<int>& vs) {
    PermutationRealization s;
    s.name = r.name;
    for (int v : vs) s.pts.push_back(r.pts[v]);
    return s;
}

bool uniform_pair(const Graph& g, const std::vector<int>& a, const std::vector<int>& b, bool val) {
    for (int u : a)
        for (int v : b)
            if (g.adj(u, v) != val) return false;
    return true;
}

BiGraph cross(const Graph& g, const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<Edge> es;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            if (g.adj(a[i], b[j])) es.emplace_back(int(i), int(j));
    return BiGraph(int(a.size()), int(b.size()), es);
}

// Staircase partition on points with distinct integer coordinates, direct case.
std::vector<std::vector<int>> staircase(const std::vector<std::pair<int, int>>& p, std::vector<int>* as,
                                        std::vector<int>* bs) {
    int n = static_cast<int>(p.size());
    auto bstep = [&](int a) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (p[v].first > p[a].first && (best < 0 || p[v].second > p[best].second)) best = v;
        return best;
    };
    auto astep = [&](int b) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (p[v].second < p[b].second && (best < 0 || p[v].first < p[best].first)) best = v;
        return best;
    };
    int a1 = 0;
    for (int v = 1; v < n; ++v)
        if (p[v].second < p[a1].second) a1 = v;
    std::vector<int> A{a1}, B{bstep(a1)};
    if (B[0] < 0) throw std::invalid_argument("permutation_decompose: graph is not connected");
    for (int it = 0; it <= n + 2; ++it) {
        int a = astep(B.back());
        int b = bstep(a);
        if (b < 0) b = B.back();
        A.push_back(a);
        B.push_back(b);
        if (a == A[A.size() - 2] && b == B[B.size() - 2]) break;
    }
    auto first_repeat = [](const std::vector<int>& s) {
        for (size_t i = 0; i + 1 < s.size(); ++i)
            if (s[i] == s[i + 1]) return static_cast<int>(i) + 1;
        return static_cast<int>(s.size());
    };
    int alpha = first_repeat(A), beta = first_repeat(B);
    auto a = [&](int i) { return p[A[std::min<size_t>(i, A.size()) - 1]]; };
    auto b = [&](int i) { return p[B[std::min<size_t>(i, B.size()) - 1]]; };
    auto aid = [&](int i) { return A[std::min<size_t>(i, A.size()) - 1]; };
    auto bid = [&](int i) { return B[std::min<size_t>(i, B.size()) - 1]; };
    const int hi = std::numeric_limits<int>::max();
    struct Region {
        int single, x0, x1, y0, y1;
    };
    std::vector<Region> regs;
    regs.push_back({aid(1), a(1).first, b(1).first, a(1).second, a(2).second});  // A_0
    regs.push_back({-1, b(1).first, hi, a(1).second, a(2).second});                // B_0
    regs.push_back({aid(2), a(2).first, a(1).first, a(1).second, b(1).second});    // A_1
    regs.push_back({bid(1), a(1).first, hi, a(2).second, b(1).second});            // B_1
    for (int i = 2; i <= std::max(alpha, beta); ++i) {
        if (i <= alpha) regs.push_back({aid(i + 1), a(i + 1).first, a(i).first, b(i - 1).second, b(i).second});
        else regs.push_back({-1, 0, 0, 0, 0});
        if (i <= beta) regs.push_back({bid(i), a(i).first, a(i - 1).first, b(i - 1).second, b(i).second});
        else regs.push_back({-1, 0, 0, 0, 0});
    }
    std::vector<std::vector<int>> sets(regs.size());
    for (int v = 0; v < n; ++v) {
        int where = -1;
        for (size_t r = 0; r < regs.size() && where < 0; ++r) {
            const Region& g = regs[r];
            bool in = g.single == v ||
                      (g.x0 < p[v].first && p[v].first < g.x1 && g.y0 < p[v].second && p[v].second < g.y1);
            if (in) where = static_cast<int>(r);
        }
        if (where < 0) throw std::logic_error("staircase partition missed vertex " + std::to_string(v));
        sets[where].push_back(v);
    }
    std::vector<std::vector<int>> out;
    for (auto& s : sets)
        if (!s.empty()) out.push_back(s);
    if (as) as->assign(A.begin(), A.end());
    if (bs) bs->assign(B.begin(), B.end());
    return out;
}

// Per node tags (2 bits): 0 leaf, 1 D, 2 co-D, 3 P.
class PermutationDecoder : public EqDecoder {
   public:
    explicit PermutationDecoder(int k) : k_(k) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        int w = bits_for(k_ + 1);
        for (;;) {
            uint64_t tx = x.bits(2), ty = y.bits(2);
            if (tx != ty) return false;
            if (tx == 0) {
                bool sx = x.bit(), sy = y.bit();
                uint64_t vx = x.bits(w), vy = y.bits(w);
                if (sx == sy) return false;
                return sx ? vy > vx : vx > vy;
            }
            if (tx == 1 || tx == 2) {
                if (!eq.eq(x.code(), y.code())) return tx == 2;
                continue;
            }
            Tuple a = read(x, w), b = read(y, w);
            if (eq.eq(a.own, b.own)) continue;
            int t = -1, s = -1;
            for (size_t i = 0; i < a.J.size(); ++i)
                if (eq.eq(a.J[i], b.own)) t = int(i);
            for (size_t i = 0; i < b.J.size(); ++i)
                if (eq.eq(a.own, b.J[i])) s = int(i);
            if (t >= 0 && s >= 0) return a.xv[t] > b.yv[s];
            if (t < 0 && s < 0) return a.b;
            return false;
        }
    }
    std::string kind() const override { return "permutation"; }
    json params() const override { return {{"k", k_}}; }

   private:
    struct Tuple {
        bool b;
        std::vector<uint64_t> xv, yv;
        uint32_t own;
        std::vector<uint32_t> J;
    };
    static Tuple read(Reader& r, int w) {
        Tuple t;
        t.b = r.bit();
        int c = static_cast<int>(r.bits(3));
        for (int i = 0; i < c; ++i) {
            t.xv.push_back(r.bits(w));
            t.yv.push_back(r.bits(w));
        }
        t.own = r.code();
        for (int i = 0; i < c; ++i) t.J.push_back(r.code());
        return t;
    }
    int k_;
};

struct PermBuilder {
    const PermutationRealization& r;
    int k, w, max_depth;
    std::vector<Label>& out;
    PermutationTreeStats st;

    void run(const std::vector<int>& vs, int depth) {
        if (depth > max_depth)
            throw FamilyViolation("permutation decomposition deeper than 2(2k+1) = " + std::to_string(max_depth));
        st.nodes++;
        st.depth = std::max(st.depth, depth);
        PermutationRealization sub = sub_realization(r, vs);
        Graph h = permutation_graph(sub);
        std::vector<bool> side = two_coloring(h);
        if (!side.empty() || h.n() <= 1) {
            if (side.empty()) side.assign(h.n(), false);
            std::vector<int> xid, yid;
            BiGraph bg = to_bigraph(h, side, &xid, &yid);
            if (is_chain_graph(bg)) {
                st.leaves++;
                std::vector<int> val = chain_values(bg, k);
                for (size_t i = 0; i < xid.size(); ++i) {
                    Label& l = out[vs[xid[i]]];
                    l.bits(0, 2);
                    l.bit(false);
                    l.bits(val[i], w);
                }
                for (size_t i = 0; i < yid.size(); ++i) {
                    Label& l = out[vs[yid[i]]];
                    l.bits(0, 2);
                    l.bit(true);
                    l.bits(val[bg.nx() + i], w);
                }
                return;
            }
        }
        auto split = [&](const std::vector<std::vector<int>>& comps, int tag) {
            for (const auto& c : comps) {
                std::vector<int> child;
                for (int v : c) child.push_back(vs[v]);
                for (int v : child) {
                    out[v].bits(tag, 2);
                    out[v].code(child.front());
                }
                run(child, depth + 1);
            }
        };
        auto comps = components(h);
        if (comps.size() > 1) return split(comps, 1);
        auto cocomps = components(complement(h));
        if (cocomps.size() > 1) return split(cocomps, 2);
        PermutationPartition pp = permutation_decompose(sub);
        st.pnodes++;
        st.mirrored += pp.mirrored;
        int m = static_cast<int>(pp.parts.size());
        std::vector<std::vector<int>> xval(m), yval(m);  // per part, per vertex, per slot
        for (int i = 0; i < m; ++i) {
            const auto& Vi = pp.parts[i];
            std::vector<std::vector<int>> xs(Vi.size()), ys(Vi.size());
            for (int j : pp.J[i]) {
                const auto& Vj = pp.parts[j];
                auto fwd = chain_values(cross(h, Vi, Vj), k);  // V_i as X
                auto bwd = chain_values(cross(h, Vj, Vi), k);  // V_i as Y
                for (size_t t = 0; t < Vi.size(); ++t) {
                    xs[t].push_back(fwd[t]);
                    ys[t].push_back(bwd[Vj.size() + t]);
                }
            }
            for (size_t t = 0; t < Vi.size(); ++t) {
                Label& l = out[vs[Vi[t]]];
                l.bits(3, 2);
                l.bit(pp.mirrored);
                l.bits(pp.J[i].size(), 3);
                for (size_t s = 0; s < pp.J[i].size(); ++s) {
                    l.bits(xs[t][s], w);
                    l.bits(ys[t][s], w);
                }
                l.code(vs[Vi.front()]);
                for (int j : pp.J[i]) l.code(vs[pp.parts[j].front()]);
            }
        }
        for (const auto& Vi : pp.parts) {
            std::vector<int> child;
            for (int v : Vi) child.push_back(vs[v]);
            run(child, depth + 1);
        }
    }
};

}  // namespace

IntervalRealization read_intervals(std::istream& in) {
    auto [name, rows] = read_pairs(in, "intervals", "i");
    IntervalRealization r;
    r.name = name;
    for (auto [l, rr] : rows) {
        if (l > rr) throw FormatError("interval with l > r");
        r.iv.push_back({l, rr});
    }
    return r;
}

void write_intervals(std::ostream& out, const IntervalRealization& r) {
    out << "intervals " << r.name << '\n';
    for (size_t i = 0; i < r.iv.size(); ++i) out << "i " << i << ' ' << r.iv[i].l << ' ' << r.iv[i].r << '\n';
}

PermutationRealization read_points(std::istream& in) {
    auto [name, rows] = read_pairs(in, "points", "p");
    PermutationRealization r;
    r.name = name;
    r.pts = rows;
    return r;
}

void write_points(std::ostream& out, const PermutationRealization& r) {
    out << "points " << r.name << '\n';
    for (size_t i = 0; i < r.pts.size(); ++i) out << "p " << i << ' ' << r.pts[i].first << ' ' << r.pts[i].second << '\n';
}

Graph permutation_graph(const PermutationRealization& r) {
    std::vector<Edge> es;
    int n = static_cast<int>(r.pts.size());
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (comparable(r.pts[u], r.pts[v])) es.emplace_back(u, v);
    Graph g(n, es);
    g.name = r.name;
    return g;
}

PermutationRealization normalize_points(const PermutationRealization& r) {
    auto sorted = r.pts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw FormatError("two vertices share a point");
    auto rx = axis_rank(r.pts, false), ry = axis_rank(r.pts, true);
    PermutationRealization out;
    out.name = r.name;
    for (size_t i = 0; i < r.pts.size(); ++i) out.pts.emplace_back(rx[i], ry[i]);
    return out;
}

void validate_realization(const Graph& g, const IntervalRealization& r) {
    if (int(r.iv.size()) != g.n()) throw FormatError("realization size differs from the graph");
    Graph h = interval_graph(r.iv);
    for (int v = 0; v < g.n(); ++v)
        if (h.nbrs(v) != g.nbrs(v)) throw FormatError("interval realization disagrees with the graph at vertex " + std::to_string(v));
}

void validate_realization(const Graph& g, const PermutationRealization& r) {
    if (int(r.pts.size()) != g.n()) throw FormatError("realization size differs from the graph");
    Graph h = permutation_graph(r);
    for (int v = 0; v < g.n(); ++v)
        if (h.nbrs(v) != g.nbrs(v)) throw FormatError("point realization disagrees with the graph at vertex " + std::to_string(v));
}

EqualityScheme interval_scheme(const Graph& g, const IntervalRealization& r, int k, int* quotient_clique) {
    validate_realization(g, r);
    TwinPartition tp = twin_partition(g, true);
    std::vector<Interval> reps;
    for (int v : tp.rep()) reps.push_back(r.iv[v]);
    int c = interval_clique_number(reps);
    if (quotient_clique) *quotient_clique = c;
    if (c > 4 * (k + 1) * (k + 1))
        throw FamilyViolation("twin-free clique number " + std::to_string(c) + " exceeds 4(k+1)^2; chain number above " +
                              std::to_string(k));
    auto res = twin_reduce_scheme(g, true, [](const Graph& q) { return forest_labels(q); });
    res.scheme.name = g.name;
    return res.scheme;
}

PermutationPartition permutation_decompose(const PermutationRealization& r) {
    Graph g = permutation_graph(r);
    if (!is_connected(g) || !is_connected(complement(g)))
        throw std::invalid_argument("permutation_decompose: graph and complement must be connected");
    PermutationPartition pp;
    int n = g.n();
    if (n <= 1) {
        pp.parts.assign(n, std::vector<int>{0});
        pp.J.assign(n, {});
        return pp;
    }
    PermutationRealization nr = normalize_points(r);
    std::vector<std::pair<int, int>> p;
    for (auto [x, y] : nr.pts) p.emplace_back(int(x), int(y));
    int a1 = 0, top = 0;
    for (int v = 1; v < n; ++v) {
        if (p[v].second < p[a1].second) a1 = v;
        if (p[v].second > p[top].second) top = v;
    }
    pp.mirrored = p[top].first > p[a1].first;
    if (pp.mirrored)
        for (auto& q : p) q.first = n - 1 - q.first;
    pp.parts = staircase(p, &pp.a, &pp.b);
    int m = static_cast<int>(pp.parts.size());
    pp.J.assign(m, {});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && !uniform_pair(g, pp.parts[i], pp.parts[j], pp.mirrored)) {
                if (!is_chain_graph(cross(g, pp.parts[i], pp.parts[j])))
                    throw std::logic_error("permutation_decompose: non-chain pair of parts");
                pp.J[i].push_back(j);
            }
    for (const auto& J : pp.J)
        if (J.size() > 4) throw std::logic_error("permutation_decompose: part meets more than 4 parts");
    return pp;
}

EqualityScheme permutation_labels(const PermutationRealization& r, int k, PermutationTreeStats* stats) {
    if (k < 1) throw std::invalid_argument("permutation_labels: k >= 1");
    EqualityScheme s;
    s.name = r.name;
    s.labels.resize(r.pts.size());
    PermBuilder b{r, k, bits_for(k + 1), 2 * (2 * k + 1), s.labels, {}};
    std::vector<int> all(r.pts.size());
    std::iota(all.begin(), all.end(), 0);
    if (!all.empty()) b.run(all, 0);
    if (stats) *stats = b.st;
    s.decoder = std::make_shared<PermutationDecoder>(k);
    return s;
}

void register_geometric_decoders() {
    register_decoder("permutation",
                     [](const json& j) -> DecoderPtr { return std::make_shared<PermutationDecoder>(j.at("k").get<int>()); });
}

namespace gen {

IntervalRealization random_intervals(int n, int span, int max_len, uint64_t seed) {
    std::mt19937_64 rng(mix64(seed ^ 0x696e7476));
    std::uniform_int_distribution<int> pos(0, std::max(0, span)), len(0, std::max(0, max_len));
    IntervalRealization r;
    r.name = "intervals";
    for (int i = 0; i < n; ++i) {
        double l = pos(rng);
        r.iv.push_back({l, l + len(rng)});
    }
    return r;
}

IntervalRealization stable_intervals(int n, int anchors, uint64_t seed) {
    std::mt19937_64 rng(mix64(seed ^ 0x73746976));
    IntervalRealization pool = random_intervals(std::max(1, anchors), 4 * anchors, 6, rng());
    std::uniform_int_distribution<int> pick(0, int(pool.iv.size()) - 1);
    IntervalRealization r;
    r.name = "stable_intervals";
    for (int i = 0; i < n; ++i) r.iv.push_back(pool.iv[pick(rng)]);
    return r;
}

PermutationRealization random_permutation(int n, uint64_t seed) {
    std::mt19937_64 rng(mix64(seed ^ 0x7065726d));
    std::vector<int> pi(n);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    PermutationRealization r;
    r.name = "permutation";
    for (int i = 0; i < n; ++i) r.pts.emplace_back(i, pi[i]);
    return r;
}

PermutationRealization stable_permutation(int n, int runs, uint64_t seed) {
    std::mt19937_64 rng(mix64(seed ^ 0x73747072));
    runs = std::max(1, std::min(runs, std::max(1, n)));
    std::vector<int> sizes(runs, n / runs);
    for (int i = 0; i < n % runs; ++i) sizes[i]++;
    std::vector<int> order(runs);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> ystart(runs);
    int acc = 0;
    for (int b : order) {
        ystart[b] = acc;
        acc += sizes[b];
    }
    PermutationRealization r;
    r.name = "stable_permutation";
    std::bernoulli_distribution up(0.5);
    int x = 0;
    for (int b = 0; b < runs; ++b) {
        bool inc = up(rng);
        for (int t = 0; t < sizes[b]; ++t) r.pts.emplace_back(x++, ystart[b] + (inc ? t : sizes[b] - 1 - t));
    }
    return r;
}

}  // namespace gen

}  // namespace pugkit

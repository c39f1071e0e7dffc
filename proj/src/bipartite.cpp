#include "pugkit/bipartite.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace pugkit {

namespace {

using Words = std::vector<uint64_t>;

// X-side neighbourhoods as bit rows over Y
std::vector<Words> xrows(const BiGraph& g) {
    int w = (g.ny() + 63) / 64;
    std::vector<Words> r(g.nx(), Words(w, 0));
    for (int x = 0; x < g.nx(); ++x)
        for (int y : g.xnbrs(x)) r[x][y / 64] |= 1ULL << (y % 64);
    return r;
}

int andnot_count(const Words& a, const Words& b) {
    int c = 0;
    for (size_t i = 0; i < a.size(); ++i) c += __builtin_popcountll(a[i] & ~b[i]);
    return c;
}

bool intersects(const Words& a, const Words& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] & b[i]) return true;
    return false;
}

std::string ids(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s.empty() ? "-" : s;
}

std::vector<int> parse_id_list(const std::string& s) {
    std::vector<int> out;
    if (s == "-") return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (...) {
            throw FormatError("bad id list '" + s + "'");
        }
    }
    return out;
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

class BipEquivalenceDecoder : public EqDecoder {
   public:
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        if (x.bit() == y.bit()) return false;
        return eq.eq(x.code(), y.code());
    }
    std::string kind() const override { return "bip_equivalence"; }
};

class ChainDecoder : public EqDecoder {
   public:
    explicit ChainDecoder(int k) : k_(k) {}
    bool decode(Reader x, Reader y, const EqOracle&) const override {
        int w = bits_for(k_ + 1);
        bool sx = x.bit(), sy = y.bit();
        if (sx == sy) return false;
        uint64_t vx = x.bits(w), vy = y.bits(w);
        return sx ? vy > vx : vx > vy;
    }
    std::string kind() const override { return "chain"; }
    json params() const override { return {{"k", k_}}; }

   private:
    int k_;
};

class TpDecoder : public EqDecoder {
   public:
    TpDecoder(int p, int q) : p_(p), q_(q) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        bool sx = x.bit(), sy = y.bit();
        if (sx == sy) return false;
        if (sx) {
            SwappedEq sw(eq);
            return run(y, x, sw);
        }
        return run(x, y, eq);
    }
    std::string kind() const override { return "tp_free"; }
    json params() const override { return {{"p", p_}, {"q", q_}}; }

   private:
    bool run(Reader& x, Reader& y, const EqOracle& eq) const {
        int w = bits_for(q_ + 1), pb = bits_for(p_), kb = bits_for(q_ * p_ + 1);
        uint64_t i = x.bits(w), j = y.bits(w);
        uint32_t yc = y.code();
        if (j <= i) {
            for (uint64_t t = 1; t < j; ++t) {
                uint64_t cnt = x.bits(pb);
                for (uint64_t c = 0; c < cnt; ++c) x.code();
            }
            uint64_t cnt = x.bits(pb);
            for (uint64_t c = 0; c < cnt; ++c)
                if (eq.eq(x.code(), yc)) return false;
            return true;
        }
        for (uint64_t t = 1; t <= i; ++t) {
            uint64_t cnt = x.bits(pb);
            for (uint64_t c = 0; c < cnt; ++c) x.code();
        }
        uint64_t cnt = x.bits(kb);
        for (uint64_t c = 0; c < cnt; ++c)
            if (eq.eq(x.code(), yc)) return true;
        return false;
    }
    int p_, q_;
};

class FStarDecoder : public EqDecoder {
   public:
    FStarDecoder(DecoderPtr d1, DecoderPtr d2) : d1_(std::move(d1)), d2_(std::move(d2)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        bool sx = x.bit(), sy = y.bit();
        if (sx == sy) return false;
        if (sx) {
            SwappedEq sw(eq);
            return run(y, x, sw);
        }
        return run(x, y, eq);
    }
    std::string kind() const override { return "fstar"; }
    json params() const override { return {{"g1", decoder_to_json(*d1_)}, {"g2", decoder_to_json(*d2_)}}; }

   private:
    bool run(Reader& x, Reader& y, const EqOracle& eq) const {
        bool to_y2 = x.bit(), in_x2 = x.bit();
        if (y.bit()) return to_y2;
        Reader y1 = y.sub(), y2 = y.sub();
        if (!in_x2) return d1_->decode(x, y1, eq);
        return !d2_->decode(x, y2, eq);
    }
    DecoderPtr d1_, d2_;
};

class ConstDecoder : public EqDecoder {
   public:
    bool decode(Reader x, Reader y, const EqOracle&) const override {
        bool bx = x.bit();
        y.bit();
        return bx;
    }
    std::string kind() const override { return "const"; }
};

bool precedes(std::pair<int, int> a, std::pair<int, int> b) {
    return a.first <= b.first && a.second <= b.second && a != b;
}

std::pair<int, int> ch_pair(const BiGraph& h) {
    int cap = h.n() / 2 + 1;
    return {chain_number(h, cap).k, chain_number(bipartite_complement(h), cap).k};
}

}  // namespace

EqualityScheme bipartite_equivalence_labels(const BiGraph& g) {
    if (!is_bipartite_equivalence(g)) throw FamilyViolation("not a bipartite equivalence graph (contains P4)");
    EqualityScheme s;
    s.name = g.name;
    s.labels.resize(g.n());
    for (const auto& comp : components(g))
        for (int v : comp) {
            s.labels[v].bit(v >= g.nx());
            s.labels[v].code(comp.front());
        }
    s.decoder = std::make_shared<BipEquivalenceDecoder>();
    return s;
}

std::vector<int> chain_values(const BiGraph& g, int k) {
    if (!is_chain_graph(g)) throw FamilyViolation("not a chain graph (contains 2K2)");
    std::set<int> degs;
    for (int x = 0; x < g.nx(); ++x)
        if (!g.xnbrs(x).empty()) degs.insert(static_cast<int>(g.xnbrs(x).size()));
    std::vector<int> D(degs.begin(), degs.end());
    if (static_cast<int>(D.size()) > k) throw FamilyViolation("chain graph has more than k + 1 intervals");
    std::vector<int> yo = iota_vec(g.ny());
    std::stable_sort(yo.begin(), yo.end(), [&](int a, int b) { return g.ynbrs(a).size() > g.ynbrs(b).size(); });
    std::vector<int> rank(g.ny());
    for (int i = 0; i < g.ny(); ++i) rank[yo[i]] = i;
    std::vector<int> out(g.n());
    for (int x = 0; x < g.nx(); ++x) {
        int d = static_cast<int>(g.xnbrs(x).size());
        out[x] = d == 0 ? 0 : int(std::lower_bound(D.begin(), D.end(), d) - D.begin()) + 1;
    }
    for (int y = 0; y < g.ny(); ++y) out[g.nx() + y] = int(std::upper_bound(D.begin(), D.end(), rank[y]) - D.begin());
    return out;
}

std::vector<Label> chain_label_list(const BiGraph& g, int k) {
    std::vector<int> v = chain_values(g, k);
    int w = bits_for(k + 1);
    std::vector<Label> out(g.n());
    for (int i = 0; i < g.n(); ++i) {
        out[i].bit(i >= g.nx());
        out[i].bits(v[i], w);
    }
    return out;
}

DecoderPtr chain_decoder(int k) { return std::make_shared<ChainDecoder>(k); }

EqualityScheme chain_graph_labels(const BiGraph& g, int k) {
    EqualityScheme s;
    s.name = g.name;
    s.labels = chain_label_list(g, k);
    s.decoder = chain_decoder(k);
    return s;
}

bool is_one_sided_tp_free(const BiGraph& g, int p) {
    auto r = xrows(g);
    for (int u = 0; u < g.nx(); ++u) {
        if (int(g.xnbrs(u).size()) < p) continue;
        for (int v = u + 1; v < g.nx(); ++v)
            if (int(g.xnbrs(v).size()) >= p && andnot_count(r[u], r[v]) >= p && andnot_count(r[v], r[u]) >= p)
                return false;
    }
    return true;
}

bool is_one_sided_fpp_free(const BiGraph& g, int p) {
    auto r = xrows(g);
    for (int u = 0; u < g.nx(); ++u)
        for (int v = u + 1; v < g.nx(); ++v)
            if (intersects(r[u], r[v]) && andnot_count(r[u], r[v]) >= p && andnot_count(r[v], r[u]) >= p)
                return false;
    return true;
}

bool is_p7_free(const BiGraph& bg) {
    Graph g = bg.to_graph();
    std::vector<int> path;
    std::vector<bool> on(g.n(), false);
    std::function<bool()> ext = [&]() -> bool {
        if (path.size() == 7) return true;
        int last = path.back();
        for (int w : g.nbrs(last)) {
            if (on[w]) continue;
            bool ok = true;
            for (size_t i = 0; i + 1 < path.size() && ok; ++i)
                if (g.adj(w, path[i])) ok = false;
            if (!ok) continue;
            // count each path once: the far end has the larger id
            if (path.size() == 6 && w < path.front()) continue;
            path.push_back(w);
            on[w] = true;
            bool f = ext();
            on[w] = false;
            path.pop_back();
            if (f) return true;
        }
        return false;
    };
    for (int v = 0; v < g.n(); ++v) {
        path = {v};
        on[v] = true;
        bool f = ext();
        on[v] = false;
        if (f) return false;
    }
    return true;
}

std::string TpStructure::str() const {
    std::ostringstream out;
    out << "tp m=" << m << '\n';
    for (size_t i = 0; i < A.size(); ++i) out << "A " << i << ' ' << ids(A[i]) << '\n';
    for (size_t i = 1; i < B.size(); ++i) out << "B " << i << ' ' << ids(B[i]) << '\n';
    out << "anchors " << ids(anchors) << '\n';
    return out.str();
}

TpStructure tp_structure(const BiGraph& g, int k, int p) {
    TpStructure s;
    s.xpart.assign(g.nx(), -1);
    s.ypart.assign(g.ny(), -1);
    s.A.emplace_back();
    s.B.emplace_back();
    std::vector<bool> inX(g.nx(), false), inY(g.ny(), true);
    int left = 0;
    for (int x = 0; x < g.nx(); ++x) {
        if (int(g.xnbrs(x).size()) < k) {
            s.A[0].push_back(x);
            s.xpart[x] = 0;
        } else {
            inX[x] = true;
            ++left;
        }
    }
    auto deg_in = [&](int x, const std::vector<bool>& ys) {
        int d = 0;
        for (int y : g.xnbrs(x)) d += ys[y];
        return d;
    };
    int i = 0;
    while (left > 0) {
        ++i;
        int a = -1, best = 0;
        for (int x = 0; x < g.nx(); ++x)
            if (inX[x]) {
                int d = deg_in(x, inY);
                if (a < 0 || d < best) a = x, best = d;
            }
        std::vector<int> Bi;
        std::vector<bool> rest = inY;
        for (int y : g.xnbrs(a))
            if (inY[y]) {
                Bi.push_back(y);
                rest[y] = false;
            }
        std::vector<int> Ai;
        for (int x = 0; x < g.nx(); ++x)
            if (inX[x] && deg_in(x, rest) < k) Ai.push_back(x);
        for (int x : Ai) {
            inX[x] = false;
            s.xpart[x] = i;
            --left;
        }
        for (int y : Bi) s.ypart[y] = i;
        inY = rest;
        s.anchors.push_back(a);
        s.A.push_back(Ai);
        s.B.push_back(Bi);
    }
    s.m = i;
    std::vector<int> last;
    for (int y = 0; y < g.ny(); ++y)
        if (inY[y]) {
            last.push_back(y);
            s.ypart[y] = i + 1;
        }
    s.B.push_back(last);
    std::string why;
    if (!check_tp_structure(g, s, k, p, &why)) throw FamilyViolation("T_p structure: " + why);
    return s;
}

bool check_tp_structure(const BiGraph& g, const TpStructure& s, int k, int p, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (int(s.A.size()) != s.m + 1 || int(s.B.size()) != s.m + 2) return fail("part counts");
    for (int i = 1; i <= s.m; ++i) {
        if (s.A[i].empty() || s.B[i].empty()) return fail("empty part");
        if (int(s.B[i].size()) < k) return fail("condition (1): |B_" + std::to_string(i) + "| < k");
    }
    for (int j = 0; j <= s.m; ++j)
        for (int x : s.A[j]) {
            int fwd = 0;
            std::vector<int> per(s.m + 2, 0);
            for (int y : g.xnbrs(x)) {
                per[s.ypart[y]]++;
                if (s.ypart[y] >= j + 1) ++fwd;
            }
            if (fwd >= k) return fail("condition (2) at x=" + std::to_string(x));
            for (int i = 1; i <= j; ++i)
                if (per[i] <= int(s.B[i].size()) - p)
                    return fail("condition (3) at x=" + std::to_string(x) + " (input not one-sided T_p-free)");
        }
    return true;
}

ZWitness z_witness(const BiGraph& g, const TpStructure& s, int q) {
    if (s.m < q) throw std::invalid_argument("z_witness: m < q");
    ZWitness w;
    w.x.assign(s.anchors.begin(), s.anchors.begin() + q);
    for (int i = 1; i <= q; ++i) {
        std::vector<int> bi;
        for (int y : s.B[i]) {
            bool all = true;
            for (int j = i; j <= q && all; ++j) all = g.adj(s.anchors[j - 1], y);
            if (all) bi.push_back(y);
        }
        w.y.push_back(bi);
    }
    return w;
}

bool verify_z_witness(const BiGraph& g, const ZWitness& w, int s) {
    if (w.x.size() != w.y.size()) return false;
    std::set<int> seen;
    for (const auto& ys : w.y) {
        if (int(ys.size()) < s) return false;
        for (int y : ys)
            if (!seen.insert(y).second) return false;
    }
    for (size_t i = 0; i < w.x.size(); ++i)
        for (size_t j = 0; j < w.y.size(); ++j)
            for (int y : w.y[j])
                if (g.adj(w.x[i], y) != (j <= i)) return false;
    return true;
}

EqualityScheme tp_free_labels(const BiGraph& g, int p, int q) {
    if (p < 1 || q < 1) throw std::invalid_argument("tp_free_labels: p, q >= 1");
    int k = q * p + 1;
    TpStructure s = tp_structure(g, k, p);
    if (s.m >= q)
        throw FamilyViolation("T_p structure has m = " + std::to_string(s.m) + " >= q; contains Z_{q," +
                              std::to_string(k - q * p) + "}");
    int w = bits_for(q + 1), pb = bits_for(p), kb = bits_for(k);
    EqualityScheme out;
    out.name = g.name;
    out.labels.resize(g.n());
    for (int x = 0; x < g.nx(); ++x) {
        Label& l = out.labels[x];
        int i = s.xpart[x];
        l.bit(false);
        l.bits(i, w);
        for (int j = 1; j <= i; ++j) {
            std::vector<int> non;
            for (int y : s.B[j])
                if (!g.adj(x, y)) non.push_back(y);
            l.bits(non.size(), pb);
            for (int y : non) l.code(y);
        }
        std::vector<int> fwd;
        for (int y : g.xnbrs(x))
            if (s.ypart[y] >= i + 1) fwd.push_back(y);
        l.bits(fwd.size(), kb);
        for (int y : fwd) l.code(y);
    }
    for (int y = 0; y < g.ny(); ++y) {
        Label& l = out.labels[g.nx() + y];
        l.bit(true);
        l.bits(s.ypart[y], w);
        l.code(y);
    }
    out.decoder = std::make_shared<TpDecoder>(p, q);
    return out;
}

LeafScheme tp_leaf(int p, int q) {
    LeafScheme ls;
    ls.decoder = std::make_shared<TpDecoder>(p, q);
    ls.labels = [p, q](const BiGraph& b) { return tp_free_labels(b, p, q).labels; };
    return ls;
}

DecompositionTree fpp_decomposition(const BiGraph& g, int p, int q) {
    if (p < 1 || q < 1) throw std::invalid_argument("fpp_decomposition: p, q >= 1");
    int k = (q + 1) * p;
    auto leaf = [k](const BiGraph& h) { return is_one_sided_tp_free(h, k); };
    auto split = [k](const BiGraph& h) {
        std::vector<int> x0, rest;
        for (int x = 0; x < h.nx(); ++x) (int(h.xnbrs(x).size()) < k ? x0 : rest).push_back(x);
        auto left_disconnected = [&](const std::vector<int>& xs) {
            return !is_left_connected(induced_subgraph(h, xs, iota_vec(h.ny())).g);
        };
        std::vector<int> x1;
        if (!left_disconnected(rest)) {
            std::vector<int> order = rest;
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return h.xnbrs(a).size() > h.xnbrs(b).size(); });
            size_t t = 0;
            while (t < order.size()) {
                x1.push_back(order[t++]);
                std::vector<int> x2(order.begin() + t, order.end());
                std::sort(x2.begin(), x2.end());
                if (left_disconnected(x2)) break;
            }
        }
        std::vector<int> low = x0;
        low.insert(low.end(), x1.begin(), x1.end());
        std::sort(low.begin(), low.end());
        std::vector<int> x2;
        for (int x : rest)
            if (!std::binary_search(low.begin(), low.end(), x)) x2.push_back(x);
        PartitionPair pp;
        if (!low.empty()) pp.xparts.push_back(low);
        if (!x2.empty()) pp.xparts.push_back(x2);
        pp.yparts.push_back(iota_vec(h.ny()));
        return pp;
    };
    return build_decomposition(g, leaf, split, false, 2 * q);
}

EqualityScheme fpp_labels(const BiGraph& g, int p, int q, DecompositionTree* tree) {
    DecompositionTree t = fpp_decomposition(g, p, q);
    int k = (q + 1) * p;
    auto s = assemble_decomposition_labels(g, t, tp_leaf(k, q));
    if (tree) *tree = std::move(t);
    return s;
}

namespace {

// bad[u][v]: u, v may not share a side of the split
struct PairConflicts {
    std::vector<std::pair<int, int>> g_bad, bc_bad;
};

PairConflicts allen_conflicts(const BiGraph& g, int p, int y2) {
    std::vector<int> ys;
    for (int y = 0; y < g.ny(); ++y)
        if (y != y2) ys.push_back(y);
    BiGraph h = induced_subgraph(g, iota_vec(g.nx()), ys).g;
    auto r = xrows(h);
    Words all((h.ny() + 63) / 64, 0);
    for (int y = 0; y < h.ny(); ++y) all[y / 64] |= 1ULL << (y % 64);
    PairConflicts pc;
    for (int u = 0; u < h.nx(); ++u)
        for (int v = u + 1; v < h.nx(); ++v) {
            if (andnot_count(r[u], r[v]) < p || andnot_count(r[v], r[u]) < p) continue;
            if (intersects(r[u], r[v])) pc.g_bad.emplace_back(u, v);
            bool common_non = false;
            for (size_t i = 0; i < all.size() && !common_non; ++i) common_non = (all[i] & ~r[u][i] & ~r[v][i]) != 0;
            if (common_non) pc.bc_bad.emplace_back(u, v);
        }
    return pc;
}

// 2-SAT over "x in X2"; literal 2v = true, 2v + 1 = false.
std::optional<std::vector<bool>> two_sat(int n, const PairConflicts& pc) {
    int N = 2 * n;
    std::vector<std::vector<int>> imp(N), rev(N);
    auto clause = [&](int a, int b) {  // a or b
        imp[a ^ 1].push_back(b);
        imp[b ^ 1].push_back(a);
        rev[b].push_back(a ^ 1);
        rev[a].push_back(b ^ 1);
    };
    for (auto [u, v] : pc.g_bad) clause(2 * u, 2 * v);              // not both in X1
    for (auto [u, v] : pc.bc_bad) clause(2 * u + 1, 2 * v + 1);      // not both in X2
    std::vector<int> order, comp(N, -1);
    std::vector<bool> vis(N, false);
    for (int s = 0; s < N; ++s) {
        if (vis[s]) continue;
        std::vector<std::pair<int, size_t>> st{{s, 0}};
        vis[s] = true;
        while (!st.empty()) {
            auto& [v, i] = st.back();
            if (i < imp[v].size()) {
                int w = imp[v][i++];
                if (!vis[w]) {
                    vis[w] = true;
                    st.emplace_back(w, 0);
                }
            } else {
                order.push_back(v);
                st.pop_back();
            }
        }
    }
    int c = 0;
    for (int i = N - 1; i >= 0; --i) {
        int s = order[i];
        if (comp[s] >= 0) continue;
        std::vector<int> st{s};
        comp[s] = c;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : rev[v])
                if (comp[w] < 0) {
                    comp[w] = c;
                    st.push_back(w);
                }
        }
        ++c;
    }
    std::vector<bool> val(n);
    for (int v = 0; v < n; ++v) {
        if (comp[2 * v] == comp[2 * v + 1]) return std::nullopt;
        val[v] = comp[2 * v] > comp[2 * v + 1];  // topological order of components
    }
    return val;
}

std::pair<BiGraph, BiGraph> allen_parts(const BiGraph& g, const AllenPartition& a, std::vector<int>* x1,
                                        std::vector<int>* x2, std::vector<int>* y1) {
    for (int x = 0; x < g.nx(); ++x) (a.in_x2[x] ? x2 : x1)->push_back(x);
    for (int y = 0; y < g.ny(); ++y)
        if (y != a.y2) y1->push_back(y);
    return {induced_subgraph(g, *x1, *y1).g, bipartite_complement(induced_subgraph(g, *x2, *y1).g)};
}

}  // namespace

bool check_allen_partition(const BiGraph& g, const AllenPartition& a, int p) {
    if (int(a.in_x2.size()) != g.nx() || a.y2 < -1 || a.y2 >= g.ny()) return false;
    std::vector<int> x1, x2, y1;
    auto [g1, g2] = allen_parts(g, a, &x1, &x2, &y1);
    return is_one_sided_fpp_free(g1, p) && is_one_sided_fpp_free(g2, p);
}

std::optional<AllenPartition> allen_partition(const BiGraph& g, int p) {
    for (int y2 = -1; y2 < g.ny(); ++y2) {
        auto val = two_sat(g.nx(), allen_conflicts(g, p, y2));
        if (val) {
            AllenPartition a{*val, y2};
            if (!check_allen_partition(g, a, p)) throw std::logic_error("2-SAT partition failed its check");
            return a;
        }
    }
    return std::nullopt;
}

EqualityScheme fstar_labels(const BiGraph& g, int p, int q, const AllenPartition* declared) {
    AllenPartition a;
    if (declared) {
        if (!check_allen_partition(g, *declared, p)) throw FamilyViolation("declared partition is not valid");
        a = *declared;
    } else {
        auto found = allen_partition(g, p);
        if (!found) throw FamilyViolation("no partition into one-sided F_pp-free halves exists");
        a = *found;
    }
    std::vector<int> x1, x2, y1;
    auto [g1, g2] = allen_parts(g, a, &x1, &x2, &y1);
    auto s1 = fpp_labels(g1, p, q), s2 = fpp_labels(g2, p, q);
    std::vector<int> pos(g.nx()), ypos(g.ny(), -1);
    for (size_t i = 0; i < x1.size(); ++i) pos[x1[i]] = int(i);
    for (size_t i = 0; i < x2.size(); ++i) pos[x2[i]] = int(i);
    for (size_t i = 0; i < y1.size(); ++i) ypos[y1[i]] = int(i);
    EqualityScheme out;
    out.name = g.name;
    for (int x = 0; x < g.nx(); ++x) {
        Label l;
        l.bit(false);
        l.bit(a.y2 >= 0 && g.adj(x, a.y2));
        l.bit(a.in_x2[x]);
        l.append(a.in_x2[x] ? s2.labels[pos[x]] : s1.labels[pos[x]]);
        out.labels.push_back(std::move(l));
    }
    for (int y = 0; y < g.ny(); ++y) {
        Label l;
        l.bit(true);
        l.bit(y == a.y2);
        if (y != a.y2) {
            l.sub(s1.labels[g1.nx() + ypos[y]]);
            l.sub(s2.labels[g2.nx() + ypos[y]]);
        }
        out.labels.push_back(std::move(l));
    }
    out.decoder = std::make_shared<FStarDecoder>(s1.decoder, s2.decoder);
    return out;
}

std::string ChainDecomposition::str() const {
    std::ostringstream out;
    out << "chaindec k=" << k << " flipped=" << flipped << " complemented=" << complemented << '\n';
    const char* names = "ABCD";
    const std::vector<std::vector<int>>* sets[] = {&A, &B, &C, &D};
    for (int s = 0; s < 4; ++s)
        for (int i = 0; i < k; ++i) out << names[s] << ' ' << i + 1 << ' ' << ids((*sets[s])[i]) << '\n';
    return out.str();
}

ChainDecomposition ChainDecomposition::parse(const std::string& text) {
    std::istringstream in(text);
    std::string head, kk, ff, cc;
    if (!(in >> head >> kk >> ff >> cc) || head != "chaindec" || kk.rfind("k=", 0) != 0 ||
        ff.rfind("flipped=", 0) != 0 || cc.rfind("complemented=", 0) != 0)
        throw FormatError("bad chain decomposition header");
    ChainDecomposition cd;
    try {
        cd.k = std::stoi(kk.substr(2));
        cd.flipped = std::stoi(ff.substr(8)) != 0;
        cd.complemented = std::stoi(cc.substr(13)) != 0;
    } catch (...) {
        throw FormatError("bad chain decomposition header");
    }
    if (cd.k < 1) throw FormatError("chain decomposition k < 1");
    for (auto* s : {&cd.A, &cd.B, &cd.C, &cd.D}) s->assign(cd.k, {});
    std::string name, list;
    int idx;
    while (in >> name >> idx >> list) {
        if (name.size() != 1 || std::string("ABCD").find(name[0]) == std::string::npos || idx < 1 || idx > cd.k)
            throw FormatError("bad chain decomposition line");
        std::vector<std::vector<int>>* sets[] = {&cd.A, &cd.B, &cd.C, &cd.D};
        (*sets[std::string("ABCD").find(name[0])])[idx - 1] = parse_id_list(list);
    }
    return cd;
}

namespace {

// Label t in [0, 2k): t < k is A_{t+1} (or B), otherwise C (or D).
inline bool pair_allowed(int k, int lr, int ls, bool e) {
    bool ra = lr < k, sb = ls < k;
    int i = lr % k + 1, j = ls % k + 1;
    if (ra == sb) {
        if (j > i) return !e;
        if (j < i - 1) return e;
        return true;
    }
    return e == (j < i);
}

struct RoleView {
    const BiGraph* h;
    bool flipped;
    int nr() const { return flipped ? h->ny() : h->nx(); }
    int ns() const { return flipped ? h->nx() : h->ny(); }
    bool adj(int r, int s) const { return flipped ? h->adj(s, r) : h->adj(r, s); }
    const std::vector<int>& rn(int r) const { return flipped ? h->ynbrs(r) : h->xnbrs(r); }
    const std::vector<int>& sn(int s) const { return flipped ? h->xnbrs(s) : h->ynbrs(s); }
};

bool existence_ok(const RoleView& rv, int k, const std::vector<int>& lr, const std::vector<int>& ls, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    std::vector<int> cr(2 * k, 0), cs(2 * k, 0);
    for (int t : lr) cr[t]++;
    for (int t : ls) cs[t]++;
    for (int i = 0; i < k - 1; ++i)
        if (!cr[i] || !cr[k + i] || !cs[i] || !cs[k + i]) return fail("empty set below k");
    if (!cr[k - 1] && !cr[2 * k - 1] && !cs[k - 1] && !cs[2 * k - 1]) return fail("all sets at k empty");
    // B_i vertices need a neighbour in A_i; D_i in C_i
    for (int s = 0; s < rv.ns(); ++s) {
        bool ok = false;
        for (int r : rv.sn(s)) ok = ok || lr[r] == ls[s];
        if (!ok) return fail("B/D vertex without a neighbour in its A/C set");
    }
    // A_i, C_i (2 <= i <= k-1) need a non-neighbour in B_{i-1}, D_{i-1}
    for (int r = 0; r < rv.nr(); ++r) {
        int i = lr[r] % k + 1;
        if (i < 2 || i > k - 1) continue;
        int want = lr[r] - 1;
        bool ok = false;
        for (int s = 0; s < rv.ns() && !ok; ++s) ok = ls[s] == want && !rv.adj(r, s);
        if (!ok) return fail("A/C vertex without a non-neighbour in the previous B/D set");
    }
    return true;
}

ChainDecomposition make_cd(const RoleView& rv, int k, bool complemented, const std::vector<int>& lr,
                           const std::vector<int>& ls) {
    ChainDecomposition cd;
    cd.k = k;
    cd.flipped = rv.flipped;
    cd.complemented = complemented;
    for (auto* s : {&cd.A, &cd.B, &cd.C, &cd.D}) s->assign(k, {});
    for (int r = 0; r < rv.nr(); ++r) (lr[r] < k ? cd.A : cd.C)[lr[r] % k].push_back(r);
    for (int s = 0; s < rv.ns(); ++s) (ls[s] < k ? cd.B : cd.D)[ls[s] % k].push_back(s);
    return cd;
}

}  // namespace

bool verify_chain_decomposition(const BiGraph& g, const ChainDecomposition& cd, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    int k = cd.k;
    if (k < 1 || int(cd.A.size()) != k || int(cd.B.size()) != k || int(cd.C.size()) != k || int(cd.D.size()) != k)
        return fail("set count differs from k");
    BiGraph h = cd.complemented ? bipartite_complement(g) : g;
    RoleView rv{&h, cd.flipped};
    std::vector<int> lr(rv.nr(), -1), ls(rv.ns(), -1);
    for (int i = 0; i < k; ++i) {
        for (int v : cd.A[i]) {
            if (v < 0 || v >= rv.nr() || lr[v] >= 0) return fail("A/C sets do not partition the side");
            lr[v] = i;
        }
        for (int v : cd.C[i]) {
            if (v < 0 || v >= rv.nr() || lr[v] >= 0) return fail("A/C sets do not partition the side");
            lr[v] = k + i;
        }
        for (int v : cd.B[i]) {
            if (v < 0 || v >= rv.ns() || ls[v] >= 0) return fail("B/D sets do not partition the side");
            ls[v] = i;
        }
        for (int v : cd.D[i]) {
            if (v < 0 || v >= rv.ns() || ls[v] >= 0) return fail("B/D sets do not partition the side");
            ls[v] = k + i;
        }
    }
    for (int v : lr)
        if (v < 0) return fail("A/C sets do not cover the side");
    for (int v : ls)
        if (v < 0) return fail("B/D sets do not cover the side");
    for (int r = 0; r < rv.nr(); ++r)
        for (int s = 0; s < rv.ns(); ++s)
            if (!pair_allowed(k, lr[r], ls[s], rv.adj(r, s)))
                return fail("complete/anticomplete pattern violated");
    return existence_ok(rv, k, lr, ls, why);
}

std::optional<ChainDecomposition> chain_decomposition_search(
    const BiGraph& g, int k_max, const std::function<bool(const ChainDecomposition&)>& accept, long long budget) {
    BiGraph co = bipartite_complement(g);
    long long nodes = 0;
    bool exhausted = false;
    for (int comp = 0; comp < 2; ++comp) {
        const BiGraph& h = comp ? co : g;
        for (int fl = 0; fl < 2; ++fl) {
            RoleView rv{&h, fl == 1};
            int nr = rv.nr(), ns = rv.ns(), n = nr + ns;
            for (int k = 2; k <= k_max; ++k) {
                if (2 * (k - 1) > std::min(nr, ns)) break;
                int L = 2 * k;
                uint64_t full = L == 64 ? ~0ULL : (1ULL << L) - 1;
                // vertex v < nr is r = v; else s = v - nr
                std::vector<int> lab(n, -1);
                std::vector<uint64_t> dom(n, full);
                std::optional<ChainDecomposition> found;
                std::function<bool(std::vector<uint64_t>&)> rec = [&](std::vector<uint64_t>& d) -> bool {
                    if (++nodes > budget) {
                        exhausted = true;
                        return true;
                    }
                    int pick = -1, best = 99;
                    for (int v = 0; v < n; ++v)
                        if (lab[v] < 0) {
                            int c = __builtin_popcountll(d[v]);
                            if (c < best) best = c, pick = v;
                        }
                    if (pick < 0) {
                        std::vector<int> lr(lab.begin(), lab.begin() + nr), ls(lab.begin() + nr, lab.end());
                        if (!existence_ok(rv, k, lr, ls, nullptr)) return false;
                        auto cd = make_cd(rv, k, comp == 1, lr, ls);
                        if (accept && !accept(cd)) return false;
                        found = cd;
                        return true;
                    }
                    bool is_r = pick < nr;
                    for (int t = 0; t < L; ++t) {
                        if (!(d[pick] >> t & 1)) continue;
                        lab[pick] = t;
                        std::vector<uint64_t> nd = d;
                        bool dead = false;
                        int lo = is_r ? nr : 0, hi = is_r ? n : nr;
                        for (int u = lo; u < hi && !dead; ++u) {
                            if (lab[u] >= 0) continue;
                            bool e = is_r ? rv.adj(pick, u - nr) : rv.adj(u, pick - nr);
                            uint64_t m = 0;
                            for (int t2 = 0; t2 < L; ++t2)
                                if (nd[u] >> t2 & 1) {
                                    bool ok = is_r ? pair_allowed(k, t, t2, e) : pair_allowed(k, t2, t, e);
                                    if (ok) m |= 1ULL << t2;
                                }
                            nd[u] = m;
                            if (!m) dead = true;
                        }
                        if (!dead && rec(nd)) return true;
                        lab[pick] = -1;
                    }
                    return false;
                };
                rec(dom);
                if (found) return found;
                if (exhausted) throw SearchLimit("chain decomposition search exceeded its node budget");
            }
        }
    }
    return std::nullopt;
}

PartitionPair chain_decomposition_parts(const BiGraph& g, const ChainDecomposition& cd) {
    BiGraph h = cd.complemented ? bipartite_complement(g) : g;
    RoleView rv{&h, cd.flipped};
    std::vector<std::vector<int>> rparts, sparts;
    for (const auto& s : cd.A) rparts.push_back(s);
    for (const auto& s : cd.C) rparts.push_back(s);
    std::vector<std::vector<int>> B = cd.B, D = cd.D;
    if (cd.k == 2) {
        auto split_by = [&](std::vector<std::vector<int>>& sets, int anchor) {
            std::vector<int> in, out;
            for (int s : sets[0]) (rv.adj(anchor, s) ? in : out).push_back(s);
            sets[0] = in;
            sets.push_back(out);
        };
        if (!cd.A[1].empty() && cd.C[1].empty()) split_by(B, cd.A[1].front());
        else if (cd.A[1].empty() && !cd.C[1].empty()) split_by(D, cd.C[1].front());
    }
    for (const auto& s : B) sparts.push_back(s);
    for (const auto& s : D) sparts.push_back(s);
    auto clean = [](std::vector<std::vector<int>> v) {
        std::vector<std::vector<int>> out;
        for (auto& s : v)
            if (!s.empty()) {
                std::sort(s.begin(), s.end());
                out.push_back(s);
            }
        return out;
    };
    PartitionPair pp;
    pp.xparts = clean(cd.flipped ? sparts : rparts);
    pp.yparts = clean(cd.flipped ? rparts : sparts);
    return pp;
}

LeafScheme constant_leaf() {
    LeafScheme ls;
    ls.decoder = std::make_shared<ConstDecoder>();
    ls.labels = [](const BiGraph& b) {
        bool one = b.m() > 0;
        std::vector<Label> out(b.n());
        for (auto& l : out) l.bit(one);
        return out;
    };
    return ls;
}

DecompositionTree p7_decomposition(const BiGraph& g, int c) {
    auto leaf = [](const BiGraph& h) { return is_biclique(h) || is_cobiclique(h); };
    auto split = [](const BiGraph& h) {
        auto base = ch_pair(h);
        std::optional<PartitionPair> parts;
        auto accept = [&](const ChainDecomposition& cd) {
            PartitionPair pp = chain_decomposition_parts(h, cd);
            for (const auto& xs : pp.xparts)
                for (const auto& ys : pp.yparts)
                    if (!precedes(ch_pair(induced_subgraph(h, xs, ys).g), base)) return false;
            parts = pp;
            return true;
        };
        int kmax = std::max(base.first, base.second) + 1;
        if (!chain_decomposition_search(h, kmax, accept) || !parts)
            throw SearchLimit("no usable chain decomposition for a P-node on " + std::to_string(h.n()) + " vertices");
        return *parts;
    };
    return build_decomposition(g, leaf, split, true, std::max(6 * c, 1));
}

EqualityScheme p7_labels(const BiGraph& g, int c, DecompositionTree* tree) {
    DecompositionTree t = p7_decomposition(g, c);
    auto s = assemble_decomposition_labels(g, t, constant_leaf());
    if (tree) *tree = std::move(t);
    return s;
}

bool check_p7_tree(const BiGraph& g, const DecompositionTree& t, std::string* why) {
    std::vector<std::pair<int, int>> pr(t.nodes.size());
    std::vector<int> parent(t.nodes.size(), -1);
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        pr[i] = ch_pair(induced_subgraph(g, t.nodes[i].xs, t.nodes[i].ys).g);
        for (int c : t.nodes[i].children) parent[c] = static_cast<int>(i);
    }
    for (size_t i = 0; i < t.nodes.size(); ++i) {
        int a = static_cast<int>(i);
        for (int s = 0; s < 3 && a >= 0; ++s) a = parent[a];
        if (a >= 0 && !precedes(pr[i], pr[a])) {
            if (why) *why = "no strict decrease from node " + std::to_string(a) + " to node " + std::to_string(i);
            return false;
        }
    }
    return true;
}

void register_bipartite_decoders() {
    register_decoder("bip_equivalence", [](const json&) -> DecoderPtr { return std::make_shared<BipEquivalenceDecoder>(); });
    register_decoder("chain", [](const json& j) -> DecoderPtr { return chain_decoder(j.at("k").get<int>()); });
    register_decoder("tp_free", [](const json& j) -> DecoderPtr {
        return std::make_shared<TpDecoder>(j.at("p").get<int>(), j.at("q").get<int>());
    });
    register_decoder("fstar", [](const json& j) -> DecoderPtr {
        return std::make_shared<FStarDecoder>(decoder_from_json(j.at("g1")), decoder_from_json(j.at("g2")));
    });
    register_decoder("const", [](const json&) -> DecoderPtr { return std::make_shared<ConstDecoder>(); });
}

namespace gen {

namespace {
std::vector<int> sample_k(std::mt19937_64& rng, const std::vector<int>& from, int k) {
    std::vector<int> v = from;
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(std::min<size_t>(v.size(), std::max(0, k)));
    return v;
}
}  // namespace

BiGraph tp_free_instance(int blocks, int block_size, int per_block, int p, uint64_t seed) {
    if (p < 1 || blocks < 0 || block_size < 1 || per_block < 0) throw std::invalid_argument("tp_free_instance");
    std::mt19937_64 rng(mix64(seed));
    int ny = (blocks + 1) * block_size;
    std::vector<Edge> es;
    int nx = 0;
    std::uniform_int_distribution<int> pert(0, p - 1);
    for (int j = 0; j <= blocks; ++j)
        for (int t = 0; t < per_block; ++t) {
            int x = nx++;
            std::set<int> nb;
            if (j == 0) {
                std::vector<int> all = iota_vec(ny);
                for (int y : sample_k(rng, all, pert(rng))) nb.insert(y);
            } else {
                // removals of one vertex meet forward edges of another
                std::uniform_int_distribution<int> half(0, (p - 1) / 2);
                int removed = half(rng), forward = half(rng);
                std::vector<int> back = iota_vec(j * block_size), fwd;
                for (int y = j * block_size; y < ny; ++y) fwd.push_back(y);
                nb.insert(back.begin(), back.end());
                for (int y : sample_k(rng, back, removed)) nb.erase(y);
                for (int y : sample_k(rng, fwd, forward)) nb.insert(y);
            }
            for (int y : nb) es.emplace_back(x, y);
        }
    BiGraph g(nx, ny, es);
    g.name = "tp_free";
    return g;
}

BiGraph fpp_free_instance(int levels, int fanout, int p, uint64_t seed) {
    std::mt19937_64 rng(mix64(seed ^ 0x66707066));
    struct Piece {
        int nx = 0, ny = 0;
        std::vector<Edge> es;
    };
    std::function<Piece(int)> build = [&](int lv) -> Piece {
        Piece out;
        if (lv == 0) {
            BiGraph t = tp_free_instance(std::uniform_int_distribution<int>(0, 2)(rng), 2 * p + 2, 2, p, rng());
            out.nx = t.nx();
            out.ny = t.ny();
            out.es = t.edges();
            return out;
        }
        for (int f = 0; f < fanout; ++f) {
            Piece c = build(lv - 1);
            for (auto [x, y] : c.es) out.es.emplace_back(out.nx + x, out.ny + y);
            out.nx += c.nx;
            out.ny += c.ny;
        }
        std::vector<int> all = iota_vec(out.ny);
        std::uniform_int_distribution<int> pert(0, p - 1);
        for (int h = 0; h < 2; ++h) {
            int x = out.nx++;
            std::set<int> nb(all.begin(), all.end());
            for (int y : sample_k(rng, all, pert(rng))) nb.erase(y);
            for (int y : nb) out.es.emplace_back(x, y);
        }
        // a few low-degree vertices
        for (int t = 0; t < 2; ++t) {
            int x = out.nx++;
            for (int y : sample_k(rng, all, std::uniform_int_distribution<int>(1, p)(rng))) out.es.emplace_back(x, y);
        }
        return out;
    };
    Piece pc = build(levels);
    BiGraph g(pc.nx, pc.ny, pc.es);
    g.name = "fpp_free";
    return g;
}

BiGraph fstar_free_instance(int levels, int p, uint64_t seed) {
    std::mt19937_64 rng(mix64(seed ^ 0x66737472));
    BiGraph g1 = fpp_free_instance(levels, 2, p, rng());
    BiGraph g2 = fpp_free_instance(levels, 2, p, rng());
    int ny1 = std::max(g1.ny(), g2.ny());
    std::vector<int> perm = iota_vec(ny1);
    std::shuffle(perm.begin(), perm.end(), rng);
    int nx = g1.nx() + g2.nx();
    std::vector<int> xperm = iota_vec(nx);
    std::shuffle(xperm.begin(), xperm.end(), rng);
    std::vector<Edge> es;
    for (auto [x, y] : g1.edges()) es.emplace_back(xperm[x], y);
    for (int x = 0; x < g2.nx(); ++x)
        for (int y = 0; y < ny1; ++y)
            if (!(y < g2.ny() && g2.adj(x, y))) es.emplace_back(xperm[g1.nx() + x], perm[y]);
    std::bernoulli_distribution half(0.5);
    for (int x = 0; x < nx; ++x)
        if (half(rng)) es.emplace_back(x, ny1);
    BiGraph g(nx, ny1 + 1, es);
    g.name = "fstar_free";
    return g;
}

BiGraph chain_decomposed(int k, int max_set, uint64_t seed, ChainDecomposition* out_cd) {
    if (k < 2 || max_set < 1) throw std::invalid_argument("chain_decomposed: k >= 2, max_set >= 1");
    std::mt19937_64 rng(mix64(seed ^ 0x63686e64));
    std::uniform_int_distribution<int> sz(1, max_set), sz0(0, max_set);
    std::vector<int> na(k), nb(k), nc(k), nd(k);
    for (int i = 0; i < k; ++i) {
        bool last = i == k - 1;
        na[i] = last ? sz0(rng) : sz(rng);
        nc[i] = last ? sz0(rng) : sz(rng);
        nb[i] = last && !na[i] ? 0 : last ? sz0(rng) : sz(rng);
        nd[i] = last && !nc[i] ? 0 : last ? sz0(rng) : sz(rng);
        if (last && !na[i] && !nc[i]) na[i] = 1;
    }
    // labels per vertex
    std::vector<int> lr, ls;
    for (int i = 0; i < k; ++i) lr.insert(lr.end(), na[i], i);
    for (int i = 0; i < k; ++i) lr.insert(lr.end(), nc[i], k + i);
    for (int i = 0; i < k; ++i) ls.insert(ls.end(), nb[i], i);
    for (int i = 0; i < k; ++i) ls.insert(ls.end(), nd[i], k + i);
    std::shuffle(lr.begin(), lr.end(), rng);
    std::shuffle(ls.begin(), ls.end(), rng);
    int nx = int(lr.size()), ny = int(ls.size());
    std::vector<std::vector<bool>> e(nx, std::vector<bool>(ny));
    std::bernoulli_distribution coin(0.5);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            bool t = pair_allowed(k, lr[x], ls[y], true), f = pair_allowed(k, lr[x], ls[y], false);
            e[x][y] = t && f ? coin(rng) : t;
        }
    // B_i / D_i vertices need a neighbour in A_i / C_i
    for (int y = 0; y < ny; ++y) {
        std::vector<int> cand;
        bool has = false;
        for (int x = 0; x < nx; ++x)
            if (lr[x] == ls[y]) {
                cand.push_back(x);
                has = has || e[x][y];
            }
        if (!has && !cand.empty()) e[cand[rng() % cand.size()]][y] = true;
    }
    // A_i / C_i (2 <= i <= k-1) need a non-neighbour in B_{i-1} / D_{i-1}
    for (int x = 0; x < nx; ++x) {
        int i = lr[x] % k + 1;
        if (i < 2 || i > k - 1) continue;
        std::vector<int> cand;
        bool has = false;
        for (int y = 0; y < ny; ++y)
            if (ls[y] == lr[x] - 1) {
                cand.push_back(y);
                has = has || !e[x][y];
            }
        if (!has && !cand.empty()) {
            // drop an edge whose endpoint keeps another neighbour in its own set
            for (int y : cand) {
                int others = 0;
                for (int x2 = 0; x2 < nx; ++x2)
                    if (x2 != x && lr[x2] == ls[y] && e[x2][y]) ++others;
                if (lr[x] != ls[y] || others > 0) {
                    e[x][y] = false;
                    break;
                }
            }
        }
    }
    std::vector<Edge> es;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            if (e[x][y]) es.emplace_back(x, y);
    BiGraph g(nx, ny, es);
    g.name = "chain_decomposed";
    if (out_cd) {
        RoleView rv{&g, false};
        *out_cd = make_cd(rv, k, false, lr, ls);
    }
    return g;
}

BiGraph p7_free_instance(int n, uint64_t seed) {
    std::mt19937_64 rng(mix64(seed ^ 0x70376672));
    std::function<BiGraph(int)> build = [&](int m) -> BiGraph {
        if (m <= 9) {
            for (int attempt = 0;; ++attempt) {
                int nx = std::uniform_int_distribution<int>(1, std::max(1, m - 1))(rng);
                double d = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
                BiGraph b = random_bigraph(nx, m - nx, d, rng());
                if (is_p7_free(b)) return b;
            }
        }
        int a = std::uniform_int_distribution<int>(m / 3, 2 * m / 3)(rng);
        BiGraph l = build(a), r = build(m - a);
        std::vector<Edge> es = l.edges();
        for (auto [x, y] : r.edges()) es.emplace_back(l.nx() + x, l.ny() + y);
        BiGraph u(l.nx() + r.nx(), l.ny() + r.ny(), es);
        return std::bernoulli_distribution(0.5)(rng) ? bipartite_complement(u) : u;
    };
    BiGraph g = build(std::max(n, 1));
    g.name = "p7_free";
    return g;
}

}  // namespace gen

}  // namespace pugkit

#include "pugkit/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pugkit {

namespace {

using Words = std::vector<uint64_t>;

struct BitRows {
    int n, w;
    std::vector<Words> rows;
    explicit BitRows(const Graph& g) : n(g.n()), w((g.n() + 63) / 64), rows(g.n(), Words(w, 0)) {
        for (int u = 0; u < n; ++u)
            for (int v : g.nbrs(u)) rows[u][v / 64] |= 1ULL << (v % 64);
    }
};

int popcount(const Words& a) {
    int c = 0;
    for (auto x : a) c += __builtin_popcountll(x);
    return c;
}

bool test(const Words& a, int i) { return (a[i / 64] >> (i % 64)) & 1; }

std::string join(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s.empty() ? "-" : s;
}

std::vector<int> split_ids(const std::string& s) {
    std::vector<int> out;
    if (s == "-" || s.empty()) return out;
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

}  // namespace

std::string ChainWitness::str() const { return "chain " + std::to_string(k()) + ": a=" + join(a) + " b=" + join(b); }

ChainWitness ChainWitness::parse(const std::string& s) {
    std::istringstream in(s);
    std::string tag, kk, as, bs;
    if (!(in >> tag >> kk >> as >> bs) || tag != "chain" || kk.empty() || kk.back() != ':' ||
        as.rfind("a=", 0) != 0 || bs.rfind("b=", 0) != 0)
        throw FormatError("bad chain witness '" + s + "'");
    ChainWitness w;
    w.a = split_ids(as.substr(2));
    w.b = split_ids(bs.substr(2));
    int k;
    try {
        k = std::stoi(kk.substr(0, kk.size() - 1));
    } catch (...) {
        throw FormatError("bad chain size");
    }
    if (k != w.k() || w.a.size() != w.b.size()) throw FormatError("chain witness size mismatch");
    return w;
}

bool verify_chain_witness(const Graph& g, const ChainWitness& w) {
    if (w.a.size() != w.b.size()) return false;
    std::set<int> seen;
    for (int v : w.a)
        if (v < 0 || v >= g.n() || !seen.insert(v).second) return false;
    for (int v : w.b)
        if (v < 0 || v >= g.n() || !seen.insert(v).second) return false;
    for (int i = 0; i < w.k(); ++i)
        for (int j = 0; j < w.k(); ++j)
            if (g.adj(w.a[i], w.b[j]) != (i <= j)) return false;
    return true;
}

ChainResult chain_number(const Graph& g, int cap) {
    if (cap < 0) throw std::invalid_argument("chain_number: cap < 0");
    BitRows br(g);
    int W = br.w;
    ChainResult best;
    std::vector<int> as, bs;
    bool done = false;
    // candidates ordered by degree, high first
    std::vector<int> order(g.n());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.deg(a) > g.deg(b); });

    std::function<void(const Words&, const Words&, const Words&)> dfs = [&](const Words& ca, const Words& cb,
                                                                            const Words& used) {
        int t = static_cast<int>(as.size());
        if (t > best.k) {
            best.k = t;
            best.witness = {as, bs};
            if (best.k >= cap + 1) {
                done = true;
                return;
            }
        }
        Words fa(W), fb(W);
        for (int i = 0; i < W; ++i) {
            fa[i] = ca[i] & ~used[i];
            fb[i] = cb[i] & ~used[i];
        }
        if (t + std::min(popcount(fa), popcount(fb)) <= best.k) return;
        for (int a : order) {
            if (!test(fa, a)) continue;
            for (int b : order) {
                if (b == a || !test(fb, b) || !test(br.rows[a], b)) continue;
                Words na(W), nb(W), nu = used;
                for (int i = 0; i < W; ++i) {
                    na[i] = ca[i] & ~br.rows[b][i];
                    nb[i] = cb[i] & br.rows[a][i];
                }
                nu[a / 64] |= 1ULL << (a % 64);
                nu[b / 64] |= 1ULL << (b % 64);
                as.push_back(a);
                bs.push_back(b);
                dfs(na, nb, nu);
                as.pop_back();
                bs.pop_back();
                if (done) return;
            }
        }
    };
    Words all(W, 0);
    for (int v = 0; v < g.n(); ++v) all[v / 64] |= 1ULL << (v % 64);
    dfs(all, all, Words(W, 0));
    best.exact = best.k <= cap;
    return best;
}

int quasi_chain_number(const BiGraph& g, int cap) {
    if (g.nx() > 64 || g.ny() > 64) throw std::invalid_argument("quasi_chain_number: part larger than 64");
    if (cap < 0) throw std::invalid_argument("quasi_chain_number: cap < 0");
    std::vector<uint64_t> xn(g.nx(), 0), yn(g.ny(), 0);
    for (auto [x, y] : g.edges()) {
        xn[x] |= 1ULL << y;
        yn[y] |= 1ULL << x;
    }
    uint64_t allx = g.nx() == 64 ? ~0ULL : (1ULL << g.nx()) - 1;
    uint64_t ally = g.ny() == 64 ? ~0ULL : (1ULL << g.ny()) - 1;
    struct H {
        size_t operator()(const std::pair<uint64_t, uint64_t>& p) const { return p.first * 0x9e3779b97f4a7c15ULL ^ p.second; }
    };
    std::unordered_map<std::pair<uint64_t, uint64_t>, int, H> memo;
    int limit = cap + 1;
    // Longest extension from sets (sx, sy). Growing a set only removes moves,
    // so reusing an already chosen vertex dominates picking a new one.
    std::function<int(uint64_t, uint64_t, int)> f = [&](uint64_t sx, uint64_t sy, int depth) -> int {
        if (depth >= limit) return 0;
        auto key = std::make_pair(sx, sy);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        uint64_t xall = allx, xnone = allx;  // adjacent to all of sy / none of sy
        for (int y = 0; y < g.ny(); ++y)
            if (sy >> y & 1) {
                xall &= yn[y];
                xnone &= ~yn[y];
            }
        uint64_t yall = ally, ynone = ally;
        for (int x = 0; x < g.nx(); ++x)
            if (sx >> x & 1) {
                yall &= xn[x];
                ynone &= ~xn[x];
            }
        int best = 0;
        auto options = [&](uint64_t cand, uint64_t have) {
            std::vector<uint64_t> out;
            if (cand & have) {
                out.push_back(0);
                return out;
            }
            for (int v = 0; v < 64; ++v)
                if (cand >> v & 1) out.push_back(1ULL << v);
            return out;
        };
        for (int opt = 0; opt < 2 && best < limit - depth; ++opt) {
            uint64_t cx = opt == 0 ? xall : xnone, cy = opt == 0 ? ynone : yall;
            if (!cx || !cy) continue;
            for (uint64_t ax : options(cx, sx)) {
                for (uint64_t ay : options(cy, sy)) {
                    if (!ax && !ay) continue;
                    best = std::max(best, 1 + f(sx | ax, sy | ay, depth + 1));
                    if (best >= limit - depth) break;
                }
                if (best >= limit - depth) break;
            }
        }
        // Depth-limited values are only reusable at equal depth; keep exact ones.
        if (depth + best < limit) memo[key] = best;
        return best;
    };
    return std::min(f(0, 0, 0), limit);
}

std::vector<int> TwinPartition::rep() const {
    std::vector<int> r;
    for (const auto& c : classes) r.push_back(c.front());
    return r;
}

TwinPartition twin_partition(const Graph& g, bool true_twins) {
    TwinPartition tp;
    tp.true_twins = true_twins;
    tp.cls.assign(g.n(), -1);
    std::map<std::vector<int>, int> seen;
    for (int v = 0; v < g.n(); ++v) {
        std::vector<int> key = g.nbrs(v);
        if (true_twins) key.insert(std::lower_bound(key.begin(), key.end(), v), v);
        auto [it, fresh] = seen.emplace(key, static_cast<int>(tp.classes.size()));
        if (fresh) tp.classes.emplace_back();
        tp.cls[v] = it->second;
        tp.classes[it->second].push_back(v);
    }
    return tp;
}

int degeneracy(const Graph& g) { return forest_partition(g).alpha; }

ForestPartition forest_partition(const Graph& g) {
    int n = g.n();
    std::vector<int> deg(n);
    std::set<std::pair<int, int>> q;
    for (int v = 0; v < n; ++v) {
        deg[v] = g.deg(v);
        q.emplace(deg[v], v);
    }
    std::vector<bool> gone(n, false);
    std::vector<std::vector<int>> parents(n);
    ForestPartition fp;
    while (!q.empty()) {
        auto [d, v] = *q.begin();
        q.erase(q.begin());
        gone[v] = true;
        fp.order.push_back(v);
        for (int w : g.nbrs(v))
            if (!gone[w]) {
                parents[v].push_back(w);
                q.erase({deg[w], w});
                q.emplace(--deg[w], w);
            }
        fp.alpha = std::max(fp.alpha, static_cast<int>(parents[v].size()));
    }
    fp.parent.assign(fp.alpha, std::vector<int>(n, -1));
    for (int v = 0; v < n; ++v)
        for (size_t j = 0; j < parents[v].size(); ++j) fp.parent[j][v] = parents[v][j];
    return fp;
}

bool check_forest_partition(const Graph& g, const ForestPartition& fp) {
    std::set<Edge> covered;
    for (const auto& par : fp.parent) {
        std::vector<int> uf(g.n());
        std::iota(uf.begin(), uf.end(), 0);
        std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
        for (int v = 0; v < g.n(); ++v) {
            int p = par[v];
            if (p < 0) continue;
            if (!g.adj(v, p)) return false;
            if (!covered.insert({std::min(v, p), std::max(v, p)}).second) return false;
            int a = find(v), b = find(p);
            if (a == b) return false;
            uf[a] = b;
        }
    }
    return static_cast<long long>(covered.size()) == g.m();
}

Graph interval_graph(const std::vector<Interval>& iv) {
    std::vector<Edge> es;
    for (size_t i = 0; i < iv.size(); ++i) {
        if (iv[i].l > iv[i].r) throw std::invalid_argument("interval with l > r");
        for (size_t j = i + 1; j < iv.size(); ++j)
            if (std::max(iv[i].l, iv[j].l) <= std::min(iv[i].r, iv[j].r))
                es.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    return Graph(static_cast<int>(iv.size()), es);
}

int interval_clique_number(const std::vector<Interval>& iv) {
    std::vector<std::pair<double, int>> ev;  // (coord, 0 = open, 1 = close)
    for (const auto& i : iv) {
        if (i.l > i.r) throw std::invalid_argument("interval with l > r");
        ev.emplace_back(i.l, 0);
        ev.emplace_back(i.r, 1);
    }
    std::sort(ev.begin(), ev.end());
    int cur = 0, best = 0;
    for (auto [x, t] : ev) {
        cur += t == 0 ? 1 : -1;
        best = std::max(best, cur);
    }
    return best;
}

bool is_equivalence_graph(const Graph& g) {
    for (int v = 0; v < g.n(); ++v)
        for (int a : g.nbrs(v))
            for (int b : g.nbrs(v))
                if (a < b && !g.adj(a, b)) return false;
    return true;
}

bool is_bipartite_equivalence(const BiGraph& g) {
    // every component is a biclique
    for (const auto& comp : components(g)) {
        std::vector<int> xs, ys;
        for (int v : comp) (v < g.nx() ? xs : ys).push_back(v < g.nx() ? v : v - g.nx());
        for (int x : xs)
            if (static_cast<int>(g.xnbrs(x).size()) != static_cast<int>(ys.size())) return false;
    }
    return true;
}

bool is_chain_graph(const BiGraph& g) {
    std::vector<int> xs(g.nx());
    std::iota(xs.begin(), xs.end(), 0);
    std::sort(xs.begin(), xs.end(), [&](int a, int b) { return g.xnbrs(a).size() > g.xnbrs(b).size(); });
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        const auto &big = g.xnbrs(xs[i]), &small = g.xnbrs(xs[i + 1]);
        if (!std::includes(big.begin(), big.end(), small.begin(), small.end())) return false;
    }
    return true;
}

bool is_biclique(const BiGraph& g) { return g.m() == static_cast<long long>(g.nx()) * g.ny(); }
bool is_cobiclique(const BiGraph& g) { return g.m() == 0; }

bool is_connected(const Graph& g) { return g.n() <= 1 || components(g).size() == 1; }

bool is_left_connected(const BiGraph& g) {
    if (g.nx() <= 1) return true;
    auto comps = components(g);
    int found = 0;
    for (const auto& c : comps)
        if (c.front() < g.nx()) ++found;
    return found <= 1;
}

}  // namespace pugkit

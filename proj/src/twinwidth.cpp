#include "pugkit/twinwidth.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pugkit/bipartite.hpp"

namespace pugkit {

namespace {

Partition canon(Partition p) {
    for (auto& s : p) std::sort(s.begin(), s.end());
    std::sort(p.begin(), p.end());
    return p;
}

[[noreturn]] void bad(const std::string& m) { throw std::invalid_argument("uncontraction sequence: " + m); }

// Each step partitions 0..n-1; consecutive steps differ by one split; the last is all singletons.
std::vector<Partition> check_steps(const UncontractionSequence& seq, int n) {
    if (seq.steps.empty()) bad("no steps");
    std::vector<Partition> out;
    for (const auto& p : seq.steps) {
        Partition c = canon(p);
        std::vector<int> seen(n, 0);
        for (const auto& part : c) {
            if (part.empty()) bad("empty part");
            for (int v : part) {
                if (v < 0 || v >= n) bad("vertex out of range");
                if (seen[v]++) bad("vertex in two parts");
            }
        }
        for (int s : seen)
            if (!s) bad("step does not cover every vertex");
        out.push_back(std::move(c));
    }
    for (size_t i = 0; i + 1 < out.size(); ++i) {
        std::set<std::vector<int>> a(out[i].begin(), out[i].end()), b(out[i + 1].begin(), out[i + 1].end());
        std::vector<std::vector<int>> gone, fresh;
        for (const auto& s : a)
            if (!b.count(s)) gone.push_back(s);
        for (const auto& s : b)
            if (!a.count(s)) fresh.push_back(s);
        if (gone.size() != 1 || fresh.size() != 2) bad("step " + std::to_string(i + 2) + " is not a single split");
        std::vector<int> u = fresh[0];
        u.insert(u.end(), fresh[1].begin(), fresh[1].end());
        std::sort(u.begin(), u.end());
        if (u != gone[0]) bad("step " + std::to_string(i + 2) + " is not a single split");
    }
    if (out.back().size() != size_t(n)) bad("last step is not all singletons");
    return out;
}

bool pure(const std::function<bool(int, int)>& adj, const std::vector<int>& U, const std::vector<int>& W) {
    bool first = adj(U[0], W[0]);
    for (int u : U)
        for (int w : W)
            if (adj(u, w) != first) return false;
    return true;
}

}  // namespace

int verify_width(const Graph& g, const UncontractionSequence& seq) {
    auto steps = check_steps(seq, g.n());
    if (steps.front().size() != 1) bad("first step is not {V}");
    int width = 0;
    for (const auto& p : steps) width = std::max(width, partition_width(g, p));
    return width;
}

int partition_width(const Graph& g, const Partition& p) {
    auto adj = [&g](int u, int v) { return g.adj(u, v); };
    int width = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        int red = 0;
        for (size_t j = 0; j < p.size(); ++j)
            if (i != j && !pure(adj, p[i], p[j])) ++red;
        width = std::max(width, red);
    }
    return width;
}

namespace {

using Masks = std::vector<uint32_t>;

struct SmallGraph {
    int n;
    std::vector<uint32_t> nb;
    explicit SmallGraph(const Graph& g) : n(g.n()), nb(g.n(), 0) {
        for (auto [u, v] : g.edges()) {
            nb[u] |= 1u << v;
            nb[v] |= 1u << u;
        }
    }
    bool pure(uint32_t U, uint32_t W) const {
        int u0 = __builtin_ctz(U);
        uint32_t want = nb[u0] & W;
        if (want != 0 && want != W) return false;
        for (uint32_t s = U; s; s &= s - 1)
            if ((nb[__builtin_ctz(s)] & W) != want) return false;
        return true;
    }
    int width(const Masks& p) const {
        int best = 0;
        for (size_t i = 0; i < p.size(); ++i) {
            int red = 0;
            for (size_t j = 0; j < p.size(); ++j)
                if (i != j && !pure(p[i], p[j])) ++red;
            best = std::max(best, red);
        }
        return best;
    }
};

Partition to_partition(const Masks& m) {
    Partition p;
    for (uint32_t s : m) {
        std::vector<int> part;
        for (int v = 0; v < 32; ++v)
            if (s >> v & 1) part.push_back(v);
        p.push_back(part);
    }
    return p;
}

}  // namespace

int twin_width_exact(const Graph& g, UncontractionSequence* best) {
    if (g.n() > 8) throw std::invalid_argument("twin_width_exact: n > 8");
    if (g.n() == 0) {
        if (best) best->steps = {Partition{}};
        return 0;
    }
    SmallGraph sg(g);
    Masks start;
    for (int v = 0; v < g.n(); ++v) start.push_back(1u << v);
    for (int d = 0;; ++d) {
        std::set<Masks> dead;
        std::vector<Masks> path;
        // contraction view: merge two parts at a time down to one
        std::function<bool(const Masks&)> dfs = [&](const Masks& p) -> bool {
            if (sg.width(p) > d) return false;
            path.push_back(p);
            if (p.size() == 1) return true;
            for (size_t i = 0; i < p.size(); ++i)
                for (size_t j = i + 1; j < p.size(); ++j) {
                    Masks q;
                    for (size_t t = 0; t < p.size(); ++t)
                        if (t != i && t != j) q.push_back(p[t]);
                    q.push_back(p[i] | p[j]);
                    std::sort(q.begin(), q.end());
                    if (dead.count(q)) continue;
                    if (dfs(q)) return true;
                    dead.insert(q);
                }
            path.pop_back();
            return false;
        };
        if (dfs(start)) {
            if (best) {
                best->steps.clear();
                for (auto it = path.rbegin(); it != path.rend(); ++it) best->steps.push_back(to_partition(*it));
            }
            return d;
        }
    }
}

int min_width_by_enumeration(const Graph& g) {
    if (g.n() > 7) throw std::invalid_argument("min_width_by_enumeration: n > 7");
    if (g.n() <= 1) return 0;
    int best = g.n();
    std::vector<Masks> steps{{(1u << g.n()) - 1}};
    std::function<void()> rec = [&]() {
        const Masks cur = steps.back();
        if (cur.size() == size_t(g.n())) {
            UncontractionSequence seq;
            for (const auto& m : steps) seq.steps.push_back(to_partition(m));
            best = std::min(best, verify_width(g, seq));
            return;
        }
        for (size_t i = 0; i < cur.size(); ++i) {
            uint32_t U = cur[i];
            if (__builtin_popcount(U) < 2) continue;
            uint32_t low = U & -U, rest = U ^ low;
            // halves containing the lowest vertex; the other half is non-empty
            for (uint32_t s = rest;; s = (s - 1) & rest) {
                uint32_t a = low | s, b = U ^ a;
                if (b) {
                    Masks nxt = cur;
                    nxt[i] = a;
                    nxt.push_back(b);
                    std::sort(nxt.begin(), nxt.end());
                    steps.push_back(nxt);
                    rec();
                    steps.pop_back();
                }
                if (s == 0) break;
            }
        }
    };
    rec();
    return best;
}

// ---- convex variant ----

namespace {

struct SideOrder {
    std::vector<int> xs, ys;        // to_graph ids in order
    std::vector<int> rank;          // rank within own side
};

SideOrder side_order(const OrderedBiGraph& og) {
    int n = og.g.n();
    std::vector<int> o = og.order;
    std::vector<int> seen(n, 0);
    if (int(o.size()) != n) throw std::invalid_argument("ordered graph: order is not a permutation");
    for (int v : o) {
        if (v < 0 || v >= n || seen[v]++) throw std::invalid_argument("ordered graph: order is not a permutation");
    }
    SideOrder s;
    s.rank.assign(n, 0);
    for (int v : o) {
        auto& side = v < og.g.nx() ? s.xs : s.ys;
        s.rank[v] = static_cast<int>(side.size());
        side.push_back(v);
    }
    return s;
}

}  // namespace

int verify_convex_width(const OrderedBiGraph& og, const UncontractionSequence& seq) {
    const BiGraph& g = og.g;
    int nx = g.nx();
    SideOrder so = side_order(og);
    auto steps = check_steps(seq, g.n());
    Partition first;
    if (!so.xs.empty()) first.push_back(so.xs);
    if (!so.ys.empty()) first.push_back(so.ys);
    if (steps.front() != canon(first)) bad("first step is not {X, Y}");
    auto adj = [&](int u, int v) { return g.adj(u, v - nx); };
    int width = 0;
    for (const auto& p : steps) {
        std::vector<const std::vector<int>*> px, py;
        for (const auto& part : p) {
            bool isx = part[0] < nx;
            int lo = g.n(), hi = -1;
            for (int v : part) {
                if ((v < nx) != isx) bad("part mixes X and Y");
                lo = std::min(lo, so.rank[v]);
                hi = std::max(hi, so.rank[v]);
            }
            if (hi - lo + 1 != int(part.size())) bad("part is not convex");
            (isx ? px : py).push_back(&part);
        }
        for (auto* a : px) {
            int red = 0;
            for (auto* b : py) red += !pure(adj, *a, *b);
            width = std::max(width, red);
        }
        for (auto* b : py) {
            int red = 0;
            for (auto* a : px) red += !pure(adj, *a, *b);
            width = std::max(width, red);
        }
    }
    return width;
}

int convex_twin_width_exact(const OrderedBiGraph& og, UncontractionSequence* best) {
    const BiGraph& g = og.g;
    if (g.n() > 20) throw std::invalid_argument("convex_twin_width_exact: n > 20");
    SideOrder so = side_order(og);
    int nx = g.nx(), ax = int(so.xs.size()), ay = int(so.ys.size());
    int gx = std::max(0, ax - 1), gy = std::max(0, ay - 1);
    // row[i]: neighbours of the i-th X vertex as a mask over Y ranks
    std::vector<uint32_t> row(ax, 0);
    for (int i = 0; i < ax; ++i)
        for (int j = 0; j < ay; ++j)
            if (g.adj(so.xs[i], so.ys[j] - nx)) row[i] |= 1u << j;
    auto intervals = [](uint32_t cuts, int len) {
        std::vector<std::pair<int, int>> iv;
        int start = 0;
        for (int i = 0; i + 1 < len; ++i)
            if (cuts >> i & 1) {
                iv.push_back({start, i + 1});
                start = i + 1;
            }
        if (len > 0) iv.push_back({start, len});
        return iv;
    };
    auto width = [&](uint32_t cx, uint32_t cy) {
        auto X = intervals(cx, ax), Y = intervals(cy, ay);
        std::vector<int> ry(Y.size(), 0);
        int w = 0;
        for (auto [a, b] : X) {
            int red = 0;
            for (size_t t = 0; t < Y.size(); ++t) {
                uint32_t m = ((1u << Y[t].second) - 1) ^ ((1u << Y[t].first) - 1);
                uint32_t want = row[a] & m;
                bool ok = want == 0 || want == m;
                for (int i = a; ok && i < b; ++i) ok = (row[i] & m) == want;
                if (!ok) {
                    ++red;
                    ++ry[t];
                }
            }
            w = std::max(w, red);
        }
        for (int r : ry) w = std::max(w, r);
        return w;
    };
    size_t total = size_t(1) << (gx + gy);
    std::vector<int> dp(total, -1), nxt(total, -1);
    uint32_t fx = (1u << gx) - 1;
    // states ordered by decreasing popcount are processed through recursion with memo
    std::function<int(uint32_t)> solve = [&](uint32_t st) -> int {
        if (dp[st] >= 0) return dp[st];
        uint32_t cx = st & fx, cy = st >> gx;
        int w = width(cx, cy), bestv = -1, arg = -1;
        for (int b = 0; b < gx + gy; ++b)
            if (!(st >> b & 1)) {
                int v = solve(st | 1u << b);
                if (bestv < 0 || v < bestv) {
                    bestv = v;
                    arg = int(st | 1u << b);
                }
            }
        dp[st] = bestv < 0 ? w : std::max(w, bestv);
        nxt[st] = arg;
        return dp[st];
    };
    int res = solve(0);
    if (best) {
        best->steps.clear();
        for (int st = 0; st >= 0; st = nxt[st]) {
            Partition p;
            for (auto [a, b] : intervals(uint32_t(st) & fx, ax)) p.emplace_back(so.xs.begin() + a, so.xs.begin() + b);
            for (auto [a, b] : intervals(uint32_t(st) >> gx, ay)) p.emplace_back(so.ys.begin() + a, so.ys.begin() + b);
            best->steps.push_back(p);
        }
    }
    return res;
}

// ---- flips and quotients ----

BiGraph apply_flips(const BiGraph& g, const std::vector<Flip>& flips, std::vector<std::vector<bool>>* f) {
    int nx = g.nx(), ny = g.ny();
    std::vector<std::vector<char>> a(nx, std::vector<char>(ny, 0));
    for (auto [x, y] : g.edges()) a[x][y] = 1;
    if (f) f->assign(g.n(), std::vector<bool>(flips.size(), false));
    for (size_t j = 0; j < flips.size(); ++j) {
        for (int x : flips[j].A)
            if (x < 0 || x >= nx) throw std::invalid_argument("flip: A must hold X ids");
        for (int y : flips[j].B)
            if (y < nx || y >= nx + ny) throw std::invalid_argument("flip: B must hold Y ids");
        for (int x : flips[j].A)
            for (int y : flips[j].B) a[x][y - nx] ^= 1;
        if (f) {
            for (int x : flips[j].A) (*f)[x][j] = true;
            for (int y : flips[j].B) (*f)[y][j] = true;
        }
    }
    std::vector<Edge> es;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            if (a[x][y]) es.push_back({x, y});
    BiGraph h(nx, ny, es);
    h.name = g.name;
    return h;
}

Graph quotient_graph(const BiGraph& g, const Partition& division) {
    std::vector<int> part(g.n(), -1);
    for (size_t i = 0; i < division.size(); ++i)
        for (int v : division[i]) {
            if (v < 0 || v >= g.n()) throw std::invalid_argument("quotient: vertex out of range");
            part[v] = static_cast<int>(i);
        }
    std::set<Edge> es;
    for (auto [x, y] : g.edges()) {
        int a = part[x], b = part[g.nx() + y];
        if (a >= 0 && b >= 0 && a != b) es.insert({std::min(a, b), std::max(a, b)});
    }
    return Graph(static_cast<int>(division.size()), std::vector<Edge>(es.begin(), es.end()));
}

// ---- certificates ----

std::vector<int> TwCertificate::vertices() const {
    std::vector<int> v;
    for (const auto& p : division) v.insert(v.end(), p.begin(), p.end());
    std::sort(v.begin(), v.end());
    return v;
}

namespace {

void put_ids(std::ostream& o, const std::vector<int>& ids) {
    for (int v : ids) o << ' ' << v;
}

std::vector<int> read_ids(std::istringstream& in) {
    std::vector<int> out;
    std::string tok;
    while (in >> tok) {
        try {
            size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw FormatError("");
            out.push_back(v);
        } catch (const std::exception&) {
            throw FormatError("certificate: bad id '" + tok + "'");
        }
    }
    return out;
}

}  // namespace

std::string TwCertificate::str() const {
    std::ostringstream o;
    o << "order";
    put_ids(o, order);
    o << '\n';
    for (const auto& f : flips) {
        o << "flip";
        put_ids(o, f.A);
        o << " |";
        put_ids(o, f.B);
        o << '\n';
    }
    for (const auto& p : division) {
        o << "part";
        put_ids(o, p);
        o << '\n';
    }
    for (const auto& u : usets) {
        o << "uset";
        put_ids(o, u);
        o << '\n';
    }
    for (size_t i = 0; i < stars.size(); ++i)
        for (const auto& s : stars[i]) {
            o << "star " << i << ' ' << s.center;
            put_ids(o, s.leaves);
            o << '\n';
        }
    return o.str();
}

TwCertificate TwCertificate::parse(const std::string& text) {
    TwCertificate c;
    std::istringstream in(text);
    std::string line;
    bool have_order = false;
    std::vector<std::pair<int, Star>> pending;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "order") {
            c.order = read_ids(ls);
            have_order = true;
        } else if (key == "flip") {
            std::string rest;
            std::getline(ls, rest);
            auto bar = rest.find('|');
            if (bar == std::string::npos) throw FormatError("certificate: flip needs 'A | B'");
            std::istringstream a(rest.substr(0, bar)), b(rest.substr(bar + 1));
            c.flips.push_back({read_ids(a), read_ids(b)});
        } else if (key == "part") {
            c.division.push_back(read_ids(ls));
            if (c.division.back().empty()) throw FormatError("certificate: empty part");
        } else if (key == "uset") {
            c.usets.push_back(read_ids(ls));
        } else if (key == "star") {
            auto ids = read_ids(ls);
            if (ids.size() < 2) throw FormatError("certificate: star needs a forest and a center");
            pending.push_back({ids[0], Star{ids[1], std::vector<int>(ids.begin() + 2, ids.end())}});
        } else {
            throw FormatError("certificate: unknown line '" + key + "'");
        }
    }
    if (!have_order) throw FormatError("certificate: missing order");
    c.stars.assign(c.usets.size(), {});
    for (auto& [i, s] : pending) {
        if (i < 0 || i >= c.r()) throw FormatError("certificate: star refers to a missing uset");
        c.stars[i].push_back(std::move(s));
    }
    return c;
}

bool verify_certificate(const BiGraph& g, const TwCertificate& c, std::string* why, Graph* Hout, int qch_limit) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    int n = g.n(), nx = g.nx();
    std::vector<int> part(n, -1);
    for (size_t i = 0; i < c.division.size(); ++i) {
        if (c.division[i].empty()) return fail("empty part");
        bool isx = c.division[i][0] < nx;
        for (int v : c.division[i]) {
            if (v < 0 || v >= n) return fail("part vertex out of range");
            if (part[v] >= 0) return fail("vertex " + std::to_string(v) + " in two parts");
            if ((v < nx) != isx) return fail("part " + std::to_string(i) + " mixes X and Y");
            part[v] = static_cast<int>(i);
        }
    }
    std::vector<int> verts = c.vertices();
    std::vector<int> ord = c.order;
    std::sort(ord.begin(), ord.end());
    if (ord != verts) return fail("order is not a permutation of the node's vertices");
    // convexity in the order restricted to each side
    std::vector<int> rank(n, -1);
    int rx = 0, ry = 0;
    for (int v : c.order) rank[v] = v < nx ? rx++ : ry++;
    for (size_t i = 0; i < c.division.size(); ++i) {
        int lo = n, hi = -1;
        for (int v : c.division[i]) {
            lo = std::min(lo, rank[v]);
            hi = std::max(hi, rank[v]);
        }
        if (hi - lo + 1 != int(c.division[i].size())) return fail("part " + std::to_string(i) + " is not convex");
    }
    for (const auto& f : c.flips) {
        for (int x : f.A)
            if (x < 0 || x >= nx || part[x] < 0) return fail("flip A must hold X vertices of the node");
        for (int y : f.B)
            if (y < nx || y >= n || part[y] < 0) return fail("flip B must hold Y vertices of the node");
    }
    BiGraph F;
    try {
        F = apply_flips(g, c.flips);
    } catch (const std::invalid_argument& e) {
        return fail(e.what());
    }
    Graph H = quotient_graph(F, c.division);
    if (Hout) *Hout = H;
    int np = static_cast<int>(c.division.size());
    auto side = [&](int p) { return c.division[p][0] < nx; };
    if (int(c.stars.size()) != c.r()) return fail("star lists do not match the usets");
    std::vector<std::vector<char>> inU(c.r(), std::vector<char>(np, 0));
    std::vector<std::vector<int>> star_of(c.r(), std::vector<int>(np, -1));
    for (int i = 0; i < c.r(); ++i) {
        for (int p : c.usets[i]) {
            if (p < 0 || p >= np) return fail("uset refers to a missing part");
            if (inU[i][p]) return fail("part repeated in a uset");
            inU[i][p] = 1;
        }
        for (size_t s = 0; s < c.stars[i].size(); ++s) {
            const Star& st = c.stars[i][s];
            std::vector<int> members{st.center};
            members.insert(members.end(), st.leaves.begin(), st.leaves.end());
            for (int p : members) {
                if (p < 0 || p >= np || !inU[i][p]) return fail("star part outside its uset");
                if (star_of[i][p] >= 0) return fail("part in two stars of one forest");
                star_of[i][p] = static_cast<int>(s);
            }
            for (int l : st.leaves) {
                if (side(l) == side(st.center)) return fail("star leaf on the center's side");
                if (!H.adj(st.center, l)) return fail("star edge missing from the quotient");
            }
        }
    }
    for (auto [a, b] : H.edges()) {
        int cover = 0;
        for (int i = 0; i < c.r(); ++i) {
            if (!inU[i][a] || !inU[i][b]) continue;
            ++cover;
            int sa = star_of[i][a], sb = star_of[i][b];
            const Star* st = sa >= 0 && sa == sb ? &c.stars[i][sa] : nullptr;
            if (!st || (st->center != a && st->center != b))
                return fail("uset " + std::to_string(i) + " slice is not the listed star forest");
        }
        if (cover != 1)
            return fail("quotient edge " + std::to_string(a) + "-" + std::to_string(b) + " lies in " +
                        std::to_string(cover) + " usets");
    }
    if (int(verts.size()) <= qch_limit) {
        auto node_qch = [&](const std::vector<int>& vs) {
            std::vector<int> xs, ys;
            for (int v : vs) (v < nx ? xs : ys).push_back(v < nx ? v : v - nx);
            auto ib = induced_subgraph(g, xs, ys);
            return quasi_chain_number(ib.g, static_cast<int>(vs.size()));
        };
        int k = node_qch(verts);
        for (int i = 0; i < c.r(); ++i)
            for (const auto& st : c.stars[i]) {
                std::vector<int> vs = c.division[st.center];
                for (int l : st.leaves) vs.insert(vs.end(), c.division[l].begin(), c.division[l].end());
                if (node_qch(vs) > k - 1) return fail("a star does not lower the quasi-chain number");
            }
    }
    return true;
}

// ---- trees ----

namespace {

// children[i]: preorder indices of node i's children; throws FormatError on a short list.
std::vector<std::vector<int>> tree_children(const TwCertTree& t) {
    std::vector<std::vector<int>> ch(t.nodes.size());
    size_t next = 0;
    std::function<void(int)> walk = [&](int i) {
        const auto& nd = t.nodes[i];
        if (nd.leaf) return;
        for (const auto& forest : nd.cert.stars)
            for (size_t s = 0; s < forest.size(); ++s) {
                if (next >= t.nodes.size()) throw FormatError("certificate tree: missing child nodes");
                int c = static_cast<int>(next++);
                ch[i].push_back(c);
                walk(c);
            }
    };
    if (t.nodes.empty()) throw FormatError("certificate tree: no nodes");
    next = 1;
    walk(0);
    if (next != t.nodes.size()) throw FormatError("certificate tree: extra nodes");
    return ch;
}

std::vector<int> star_vertices(const TwCertificate& c, const Star& s) {
    std::vector<int> vs = c.division[s.center];
    for (int l : s.leaves) vs.insert(vs.end(), c.division[l].begin(), c.division[l].end());
    std::sort(vs.begin(), vs.end());
    return vs;
}

InducedBi induce(const BiGraph& g, const std::vector<int>& vs) {
    std::vector<int> xs, ys;
    for (int v : vs) (v < g.nx() ? xs : ys).push_back(v < g.nx() ? v : v - g.nx());
    return induced_subgraph(g, xs, ys);
}

}  // namespace

int TwCertTree::depth() const {
    auto ch = tree_children(*this);
    std::function<int(int)> d = [&](int i) {
        int best = 0;
        for (int c : ch[i]) best = std::max(best, 1 + d(c));
        return best;
    };
    return d(0);
}

std::string TwCertTree::str() const {
    std::ostringstream o;
    o << "twtree\n";
    for (const auto& nd : nodes) {
        if (nd.leaf) {
            o << "node leaf\n";
        } else {
            o << "node cert\n" << nd.cert.str() << "end\n";
        }
    }
    return o.str();
}

TwCertTree TwCertTree::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    TwCertTree t;
    bool header = false, inside = false;
    std::string body;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b;
        ls >> a >> b;
        if (a.empty() || a[0] == '#') {
            if (inside) body += line + '\n';
            continue;
        }
        if (!header) {
            if (a != "twtree") throw FormatError("certificate tree: missing 'twtree' header");
            header = true;
            continue;
        }
        if (inside) {
            if (a == "end") {
                t.nodes.push_back({false, TwCertificate::parse(body)});
                inside = false;
            } else {
                body += line + '\n';
            }
            continue;
        }
        if (a != "node") throw FormatError("certificate tree: expected 'node'");
        if (b == "leaf") {
            t.nodes.push_back({true, {}});
        } else if (b == "cert") {
            inside = true;
            body.clear();
        } else {
            throw FormatError("certificate tree: node must be 'leaf' or 'cert'");
        }
    }
    if (!header) throw FormatError("certificate tree: missing 'twtree' header");
    if (inside) throw FormatError("certificate tree: unterminated certificate");
    tree_children(t);
    return t;
}

bool verify_tree(const BiGraph& g, const TwCertTree& t, std::string* why, int qch_limit) {
    std::vector<std::vector<int>> ch;
    try {
        ch = tree_children(t);
    } catch (const FormatError& e) {
        if (why) *why = e.what();
        return false;
    }
    std::vector<int> all(g.n());
    for (int v = 0; v < g.n(); ++v) all[v] = v;
    std::function<bool(int, const std::vector<int>&)> rec = [&](int i, const std::vector<int>& vs) -> bool {
        const auto& nd = t.nodes[i];
        std::string prefix = "node " + std::to_string(i) + ": ";
        if (nd.leaf) {
            try {
                bipartite_equivalence_labels(induce(g, vs).g);
            } catch (const FamilyViolation&) {
                if (why) *why = prefix + "leaf is not P4-free";
                return false;
            }
            return true;
        }
        if (nd.cert.vertices() != vs) {
            if (why) *why = prefix + "certificate does not cover the node's vertices";
            return false;
        }
        std::string w;
        if (!verify_certificate(g, nd.cert, &w, nullptr, qch_limit)) {
            if (why) *why = prefix + w;
            return false;
        }
        size_t c = 0;
        for (const auto& forest : nd.cert.stars)
            for (const auto& s : forest)
                if (!rec(ch[i][c++], star_vertices(nd.cert, s))) return false;
        return true;
    };
    return rec(0, all);
}

// ---- labels ----

namespace {

DecoderPtr leaf_decoder() {
    static DecoderPtr d = bipartite_equivalence_labels(BiGraph(1, 1)).decoder;
    return d;
}

class TwDecoder : public EqDecoder {
   public:
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        if (x.bit() == y.bit()) return false;
        return node(x, y, eq);
    }
    std::string kind() const override { return "twinwidth"; }

   private:
    static bool node(Reader& x, Reader& y, const EqOracle& eq) {
        bool tx = x.bit(), ty = y.bit();
        if (tx != ty) return false;
        if (!tx) {
            Reader sx = x.sub(), sy = y.sub();
            return leaf_decoder()->decode(sx, sy, eq);
        }
        int q = int(x.bits(16)), r = int(x.bits(16));
        if (int(y.bits(16)) != q || int(y.bits(16)) != r) return false;
        int both = 0;
        for (int i = 0; i < q; ++i) {
            bool a = x.bit(), b = y.bit();
            both += a && b;
        }
        std::vector<uint32_t> cx(r), cy(r);
        for (int i = 0; i < r; ++i) cx[i] = x.code();
        for (int i = 0; i < r; ++i) cy[i] = y.code();
        int match = -1, matches = 0;
        for (int i = 0; i < r; ++i)
            if (eq.eq(cx[i], cy[i])) {
                ++matches;
                if (match < 0) match = i;
            }
        if (matches == 1) {
            for (int i = 0; i < match; ++i) {
                x.skip_sub();
                y.skip_sub();
            }
            Reader sx = x.sub(), sy = y.sub();
            return node(sx, sy, eq);
        }
        return both % 2 == 1;
    }
};

}  // namespace

EqualityScheme tw_labels(const BiGraph& g, const TwCertTree& t, int qch_limit) {
    std::string why;
    if (!verify_tree(g, t, &why, qch_limit)) throw FamilyViolation("twin-width certificate rejected: " + why);
    auto ch = tree_children(t);
    int n = g.n(), nx = g.nx();
    std::function<std::map<int, Label>(int, const std::vector<int>&)> rec = [&](int i, const std::vector<int>& vs) {
        std::map<int, Label> out;
        const auto& nd = t.nodes[i];
        if (nd.leaf) {
            InducedBi ib = induce(g, vs);
            auto leaf = bipartite_equivalence_labels(ib.g);
            for (int a = 0; a < ib.g.nx(); ++a) {
                Label l;
                l.bit(false);
                l.sub(leaf.labels[a]);
                out[ib.xorig[a]] = l;
            }
            for (int b = 0; b < ib.g.ny(); ++b) {
                Label l;
                l.bit(false);
                l.sub(leaf.labels[ib.g.nx() + b]);
                out[nx + ib.yorig[b]] = l;
            }
            return out;
        }
        const TwCertificate& c = nd.cert;
        std::vector<std::vector<bool>> f;
        apply_flips(g, c.flips, &f);
        std::vector<int> part(n, -1);
        for (size_t p = 0; p < c.division.size(); ++p)
            for (int v : c.division[p]) part[v] = static_cast<int>(p);
        // star ids, child labels per forest
        std::vector<std::vector<int>> star_of(c.r(), std::vector<int>(c.division.size(), -1));
        std::vector<std::vector<std::map<int, Label>>> kids(c.r());
        size_t k = 0;
        for (int fi = 0; fi < c.r(); ++fi)
            for (size_t s = 0; s < c.stars[fi].size(); ++s) {
                const Star& st = c.stars[fi][s];
                star_of[fi][st.center] = static_cast<int>(s);
                for (int l : st.leaves) star_of[fi][l] = static_cast<int>(s);
                kids[fi].push_back(rec(ch[i][k++], star_vertices(c, st)));
            }
        for (int v : vs) {
            Label l;
            l.bit(true);
            l.bits(uint64_t(c.q()), 16);
            l.bits(uint64_t(c.r()), 16);
            for (int j = 0; j < c.q(); ++j) l.bit(f[v][j]);
            for (int fi = 0; fi < c.r(); ++fi) {
                int s = star_of[fi][part[v]];
                if (s < 0) {
                    l.code(uint64_t(n) + v);
                } else {
                    const auto& cp = c.division[c.stars[fi][s].center];
                    l.code(uint64_t(*std::min_element(cp.begin(), cp.end())));
                }
            }
            for (int fi = 0; fi < c.r(); ++fi) {
                int s = star_of[fi][part[v]];
                l.sub(s < 0 ? Label{} : kids[fi][s].at(v));
            }
            out[v] = l;
        }
        return out;
    };
    std::vector<int> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    auto labels = rec(0, all);
    EqualityScheme sch;
    sch.name = g.name;
    sch.decoder = std::make_shared<TwDecoder>();
    for (int v = 0; v < n; ++v) {
        Label l;
        l.bit(v >= nx);
        l.append(labels.at(v));
        sch.labels.push_back(l);
    }
    return sch;
}

void register_twinwidth_decoders() {
    register_decoder("twinwidth", [](const json&) -> DecoderPtr { return std::make_shared<TwDecoder>(); });
}

// ---- generator ----

namespace gen {

namespace {

struct Builder {
    int nx, ny;
    std::mt19937_64 rng;
    std::vector<std::vector<char>> adj;
    TwCertTree tree;
    bool ok = true;

    Builder(int a, int b, uint64_t seed) : nx(a), ny(b), rng(seed), adj(a, std::vector<char>(b, 0)) {}

    int pick(int n) { return static_cast<int>(rng() % uint64_t(n)); }

    std::vector<std::vector<int>> cut(const std::vector<int>& vs, int parts) {
        std::vector<int> pos;
        for (int i = 1; i < int(vs.size()); ++i) pos.push_back(i);
        std::shuffle(pos.begin(), pos.end(), rng);
        pos.resize(parts - 1);
        pos.push_back(int(vs.size()));
        std::sort(pos.begin(), pos.end());
        std::vector<std::vector<int>> out;
        int start = 0;
        for (int p : pos) {
            out.emplace_back(vs.begin() + start, vs.begin() + p);
            start = p;
        }
        return out;
    }

    // xs: X ids, ys: Y ids (0-based within Y)
    void build(std::vector<int> xs, std::vector<int> ys, int level) {
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        int me = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        if (level == 0 || xs.size() < 2 || ys.size() < 2) {
            int blocks = 1 + pick(3);
            std::vector<int> bx(xs.size()), by(ys.size());
            for (auto& b : bx) b = pick(blocks + 1);
            for (auto& b : by) b = pick(blocks + 1);
            for (size_t i = 0; i < xs.size(); ++i)
                for (size_t j = 0; j < ys.size(); ++j) adj[xs[i]][ys[j]] = bx[i] == by[j] && bx[i] < blocks;
            return;
        }
        TwCertificate c;
        for (int x : xs) c.order.push_back(x);
        for (int y : ys) c.order.push_back(nx + y);
        auto px = cut(xs, std::min<int>(int(xs.size()), 2 + pick(3)));
        auto py = cut(ys, std::min<int>(int(ys.size()), 2 + pick(3)));
        int nxp = static_cast<int>(px.size());
        for (auto& p : px) c.division.push_back(p);
        for (auto& p : py) {
            std::vector<int> ids;
            for (int y : p) ids.push_back(nx + y);
            c.division.push_back(ids);
        }
        int np = static_cast<int>(c.division.size());
        int r = 1 + pick(2);
        std::vector<int> forest(np);
        for (auto& f : forest) f = pick(6) == 0 ? -1 : pick(r);
        c.usets.assign(r, {});
        c.stars.assign(r, {});
        for (int p = 0; p < np; ++p)
            if (forest[p] >= 0) c.usets[forest[p]].push_back(p);
        std::vector<int> star_key(np * np, -1);  // (center, leaf) -> star
        for (int i = 0; i < r; ++i) {
            std::vector<int> ps = c.usets[i];
            std::shuffle(ps.begin(), ps.end(), rng);
            std::vector<char> used(np, 0);
            for (int p : ps) {
                if (used[p]) continue;
                std::vector<int> opp;
                for (int q : ps)
                    if (!used[q] && (q < nxp) != (p < nxp)) opp.push_back(q);
                if (opp.empty()) continue;
                std::shuffle(opp.begin(), opp.end(), rng);
                opp.resize(1 + pick(std::min<int>(3, int(opp.size()))));
                used[p] = 1;
                for (int q : opp) used[q] = 1;
                std::sort(opp.begin(), opp.end());
                c.stars[i].push_back({p, opp});
            }
        }
        std::vector<std::vector<char>> starred(np, std::vector<char>(np, 0));
        for (int i = 0; i < r; ++i)
            for (const auto& st : c.stars[i])
                for (int l : st.leaves) starred[st.center][l] = starred[l][st.center] = 1;
        tree.nodes[me] = {false, c};
        for (int i = 0; i < r; ++i)
            for (const auto& st : c.stars[i]) {
                std::vector<int> cx, cy;
                std::vector<int> members{st.center};
                members.insert(members.end(), st.leaves.begin(), st.leaves.end());
                for (int p : members)
                    for (int v : c.division[p]) (v < nx ? cx : cy).push_back(v < nx ? v : v - nx);
                build(cx, cy, level - 1);
            }
        // flips made of whole parts; every star pair must keep an edge after flipping
        for (int attempt = 0; attempt < 40; ++attempt) {
            int q = 1 + pick(3);
            std::vector<std::vector<char>> inA(q, std::vector<char>(np, 0));
            for (int j = 0; j < q; ++j)
                for (int p = 0; p < np; ++p) inA[j][p] = pick(2);
            auto parity = [&](int a, int b) {
                int s = 0;
                for (int j = 0; j < q; ++j) s ^= inA[j][a] & inA[j][b];
                return s;
            };
            bool good = true;
            for (int a = 0; a < nxp && good; ++a)
                for (int b = nxp; b < np && good; ++b) {
                    if (!starred[a][b]) continue;
                    bool edge = false;
                    for (int x : c.division[a])
                        for (int y : c.division[b]) edge = edge || (adj[x][y - nx] ^ parity(a, b));
                    good = edge;
                }
            if (!good) continue;
            for (int a = 0; a < nxp; ++a)
                for (int b = nxp; b < np; ++b)
                    if (!starred[a][b])
                        for (int x : c.division[a])
                            for (int y : c.division[b]) adj[x][y - nx] = char(parity(a, b));
            for (int j = 0; j < q; ++j) {
                Flip fl;
                for (int p = 0; p < np; ++p)
                    if (inA[j][p]) (p < nxp ? fl.A : fl.B).insert((p < nxp ? fl.A : fl.B).end(), c.division[p].begin(),
                                                                   c.division[p].end());
                std::sort(fl.A.begin(), fl.A.end());
                std::sort(fl.B.begin(), fl.B.end());
                tree.nodes[me].cert.flips.push_back(fl);
            }
            return;
        }
        ok = false;
    }
};

}  // namespace

BiGraph tw_certified(int nx, int ny, int depth, uint64_t seed, TwCertTree* tree) {
    if (nx < 1 || ny < 1 || depth < 0) throw std::invalid_argument("tw_certified: bad sizes");
    for (int attempt = 0; attempt < 400; ++attempt) {
        Builder b(nx, ny, hash3(seed, 0x7477, attempt));
        std::vector<int> xs(nx), ys(ny);
        for (int i = 0; i < nx; ++i) xs[i] = i;
        for (int i = 0; i < ny; ++i) ys[i] = i;
        b.build(xs, ys, depth);
        if (!b.ok) continue;
        std::vector<Edge> es;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                if (b.adj[x][y]) es.push_back({x, y});
        BiGraph g(nx, ny, es);
        g.name = "tw" + std::to_string(seed);
        if (!verify_tree(g, b.tree)) continue;
        if (tree) *tree = b.tree;
        return g;
    }
    throw std::runtime_error("tw_certified: no valid instance found");
}

}  // namespace gen

}  // namespace pugkit

#include "pugkit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace pugkit {

namespace {

void check_vertex(int v, int n) {
    if (v < 0 || v >= n) throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
}

void sort_unique(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Graph::Graph(int n) : Graph(n, {}) {}

Graph::Graph(int n, const std::vector<Edge>& edges) : n_(n), adj_(n) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    for (auto [u, v] : edges) {
        check_vertex(u, n);
        check_vertex(v, n);
        if (u == v) throw std::invalid_argument("self-loop at " + std::to_string(u));
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& a : adj_) {
        sort_unique(a);
        m_ += static_cast<long long>(a.size());
    }
    m_ /= 2;
    if (n <= kBitsetLimit) {
        words_ = (n + 63) / 64;
        bits_.assign(static_cast<size_t>(n) * words_, 0);
        for (int u = 0; u < n; ++u)
            for (int v : adj_[u]) bits_[static_cast<size_t>(u) * words_ + v / 64] |= 1ULL << (v % 64);
    }
}

bool Graph::adj(int u, int v) const {
    if (!bits_.empty()) return (bits_[static_cast<size_t>(u) * words_ + v / 64] >> (v % 64)) & 1;
    const auto& a = adj_[u].size() < adj_[v].size() ? adj_[u] : adj_[v];
    int w = &a == &adj_[u] ? v : u;
    return std::binary_search(a.begin(), a.end(), w);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

BiGraph::BiGraph(int nx, int ny) : BiGraph(nx, ny, {}) {}

BiGraph::BiGraph(int nx, int ny, const std::vector<Edge>& edges) : nx_(nx), ny_(ny), xadj_(nx), yadj_(ny) {
    if (nx < 0 || ny < 0) throw std::invalid_argument("negative part size");
    for (auto [x, y] : edges) {
        check_vertex(x, nx);
        check_vertex(y, ny);
        xadj_[x].push_back(y);
        yadj_[y].push_back(x);
    }
    for (auto& a : xadj_) {
        sort_unique(a);
        m_ += static_cast<long long>(a.size());
    }
    for (auto& a : yadj_) sort_unique(a);
    if (static_cast<long long>(nx) * ny <= (1LL << 24)) {
        bits_.assign((static_cast<size_t>(nx) * ny + 63) / 64, 0);
        for (int x = 0; x < nx; ++x)
            for (int y : xadj_[x]) {
                size_t i = static_cast<size_t>(x) * ny + y;
                bits_[i / 64] |= 1ULL << (i % 64);
            }
    }
}

bool BiGraph::adj(int x, int y) const {
    if (!bits_.empty()) {
        size_t i = static_cast<size_t>(x) * ny_ + y;
        return (bits_[i / 64] >> (i % 64)) & 1;
    }
    return std::binary_search(xadj_[x].begin(), xadj_[x].end(), y);
}

std::vector<Edge> BiGraph::edges() const {
    std::vector<Edge> out;
    for (int x = 0; x < nx_; ++x)
        for (int y : xadj_[x]) out.emplace_back(x, y);
    return out;
}

Graph BiGraph::to_graph() const {
    std::vector<Edge> es;
    for (auto [x, y] : edges()) es.emplace_back(x, nx_ + y);
    Graph g(n(), es);
    g.name = name;
    return g;
}

Induced induced_subgraph(const Graph& g, const std::vector<int>& vs) {
    std::vector<int> pos(g.n(), -1);
    for (size_t i = 0; i < vs.size(); ++i) {
        check_vertex(vs[i], g.n());
        if (pos[vs[i]] >= 0) throw std::invalid_argument("repeated vertex in induced_subgraph");
        pos[vs[i]] = static_cast<int>(i);
    }
    std::vector<Edge> es;
    for (size_t i = 0; i < vs.size(); ++i)
        for (int w : g.nbrs(vs[i]))
            if (pos[w] > static_cast<int>(i)) es.emplace_back(static_cast<int>(i), pos[w]);
    Induced r{Graph(static_cast<int>(vs.size()), es), vs};
    r.g.name = g.name;
    return r;
}

InducedBi induced_subgraph(const BiGraph& g, const std::vector<int>& xs, const std::vector<int>& ys) {
    std::vector<int> ypos(g.ny(), -1);
    for (size_t j = 0; j < ys.size(); ++j) {
        check_vertex(ys[j], g.ny());
        ypos[ys[j]] = static_cast<int>(j);
    }
    std::vector<Edge> es;
    for (size_t i = 0; i < xs.size(); ++i) {
        check_vertex(xs[i], g.nx());
        for (int y : g.xnbrs(xs[i]))
            if (ypos[y] >= 0) es.emplace_back(static_cast<int>(i), ypos[y]);
    }
    InducedBi r{BiGraph(static_cast<int>(xs.size()), static_cast<int>(ys.size()), es), xs, ys};
    r.g.name = g.name;
    return r;
}

Graph complement(const Graph& g) {
    std::vector<Edge> es;
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (!g.adj(u, v)) es.emplace_back(u, v);
    Graph h(g.n(), es);
    h.name = g.name;
    return h;
}

BiGraph bipartite_complement(const BiGraph& g) {
    std::vector<Edge> es;
    for (int x = 0; x < g.nx(); ++x)
        for (int y = 0; y < g.ny(); ++y)
            if (!g.adj(x, y)) es.emplace_back(x, y);
    BiGraph h(g.nx(), g.ny(), es);
    h.name = g.name;
    return h;
}

BiGraph bip_transform(const Graph& g) {
    std::vector<Edge> es;
    for (int u = 0; u < g.n(); ++u)
        for (int v : g.nbrs(u)) es.emplace_back(u, v);
    BiGraph h(g.n(), g.n(), es);
    h.name = g.name;
    return h;
}

BiGraph to_bigraph(const Graph& g, const std::vector<bool>& side, std::vector<int>* xid, std::vector<int>* yid) {
    std::vector<int> idx(g.n());
    int nx = 0, ny = 0;
    std::vector<int> xs, ys;
    for (int v = 0; v < g.n(); ++v) {
        if (side[v]) {
            idx[v] = ny++;
            ys.push_back(v);
        } else {
            idx[v] = nx++;
            xs.push_back(v);
        }
    }
    std::vector<Edge> es;
    for (auto [u, v] : g.edges()) {
        if (side[u] == side[v]) throw FamilyViolation("edge inside one side of the bipartition");
        if (side[u]) std::swap(u, v);
        es.emplace_back(idx[u], idx[v]);
    }
    if (xid) *xid = xs;
    if (yid) *yid = ys;
    BiGraph b(nx, ny, es);
    b.name = g.name;
    return b;
}

std::vector<bool> two_coloring(const Graph& g) {
    std::vector<int> col(g.n(), -1);
    for (int s = 0; s < g.n(); ++s) {
        if (col[s] >= 0) continue;
        col[s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : g.nbrs(u)) {
                if (col[w] < 0) {
                    col[w] = 1 - col[u];
                    q.push(w);
                } else if (col[w] == col[u]) {
                    return {};
                }
            }
        }
    }
    std::vector<bool> side(g.n());
    for (int v = 0; v < g.n(); ++v) side[v] = col[v] == 1;
    return side;
}

std::vector<std::vector<int>> components(const Graph& g) {
    std::vector<int> comp(g.n(), -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.n(); ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> c{s};
        comp[s] = static_cast<int>(out.size());
        for (size_t i = 0; i < c.size(); ++i)
            for (int w : g.nbrs(c[i]))
                if (comp[w] < 0) {
                    comp[w] = comp[s];
                    c.push_back(w);
                }
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::vector<int>> components(const BiGraph& g) { return components(g.to_graph()); }

std::vector<int> bfs_distances(const Graph& g, int src) {
    std::vector<int> d(g.n(), -1);
    d[src] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : g.nbrs(u))
            if (d[w] < 0) {
                d[w] = d[u] + 1;
                q.push(w);
            }
    }
    return d;
}

long long Product::id(const std::vector<int>& c) const {
    long long r = 0;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (c[i] < 0 || c[i] >= dims[i]) throw std::out_of_range("product coordinate out of range");
        r = r * dims[i] + c[i];
    }
    return r;
}

std::vector<int> Product::coords(long long id) const {
    std::vector<int> c(dims.size());
    for (size_t i = dims.size(); i-- > 0;) {
        c[i] = static_cast<int>(id % dims[i]);
        id /= dims[i];
    }
    return c;
}

namespace {

long long checked_size(const std::vector<long long>& sizes, long long cap) {
    long long total = 1;
    for (long long s : sizes) {
        if (s <= 0) throw std::invalid_argument("empty product factor");
        if (total > cap / s) throw std::overflow_error("product exceeds vertex cap");
        total *= s;
    }
    if (total > cap) throw std::overflow_error("product exceeds vertex cap");
    return total;
}

}  // namespace

Product cartesian_product(const std::vector<Graph>& gs, long long cap) {
    std::vector<long long> sizes;
    for (const auto& g : gs) sizes.push_back(g.n());
    long long total = checked_size(sizes, cap);
    Product p;
    for (const auto& g : gs) p.dims.push_back(g.n());
    // stride of coordinate i
    std::vector<long long> stride(gs.size(), 1);
    for (size_t i = gs.size(); i-- > 1;) stride[i - 1] = stride[i] * gs[i].n();
    std::vector<Edge> es;
    for (long long v = 0; v < total; ++v) {
        for (size_t i = 0; i < gs.size(); ++i) {
            int ci = static_cast<int>((v / stride[i]) % gs[i].n());
            for (int w : gs[i].nbrs(ci))
                if (w > ci) es.emplace_back(static_cast<int>(v), static_cast<int>(v + (w - ci) * stride[i]));
        }
    }
    p.g = Graph(static_cast<int>(total), es);
    p.g.name = "product";
    return p;
}

namespace {

template <class F>
Graph pair_product(const Graph& a, const Graph& b, long long cap, F rule) {
    long long total = checked_size({a.n(), b.n()}, cap);
    std::vector<Edge> es;
    for (int u = 0; u < total; ++u)
        for (int v = u + 1; v < total; ++v) {
            int u1 = u / b.n(), u2 = u % b.n(), v1 = v / b.n(), v2 = v % b.n();
            if (rule(u1, u2, v1, v2)) es.emplace_back(u, v);
        }
    return Graph(static_cast<int>(total), es);
}

}  // namespace

Graph strong_product(const Graph& a, const Graph& b, long long cap) {
    return pair_product(a, b, cap, [&](int u1, int u2, int v1, int v2) {
        bool e1 = u1 == v1 || a.adj(u1, v1), e2 = u2 == v2 || b.adj(u2, v2);
        return e1 && e2;
    });
}

Graph direct_product(const Graph& a, const Graph& b, long long cap) {
    return pair_product(a, b, cap,
                        [&](int u1, int u2, int v1, int v2) { return u1 != v1 && u2 != v2 && a.adj(u1, v1) && b.adj(u2, v2); });
}

Graph lexicographic_product(const Graph& a, const Graph& b, long long cap) {
    return pair_product(a, b, cap, [&](int u1, int u2, int v1, int v2) {
        return (u1 != v1 && a.adj(u1, v1)) || (u1 == v1 && b.adj(u2, v2));
    });
}

namespace gen {

namespace {
Graph named(Graph g, std::string name) {
    g.name = std::move(name);
    return g;
}
BiGraph named(BiGraph g, std::string name) {
    g.name = std::move(name);
    return g;
}
void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}
}  // namespace

Graph path(int n) {
    require(n >= 0, "path: n < 0");
    std::vector<Edge> es;
    for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    return named(Graph(n, es), "path");
}

Graph cycle(int n) {
    require(n >= 3, "cycle: n < 3");
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) es.emplace_back(i, (i + 1) % n);
    return named(Graph(n, es), "cycle");
}

Graph complete(int n) {
    require(n >= 0, "complete: n < 0");
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
    return named(Graph(n, es), "complete");
}

Graph edgeless(int n) {
    require(n >= 0, "edgeless: n < 0");
    return named(Graph(n), "edgeless");
}

Graph hypercube(int d) {
    require(d >= 0 && d <= 22, "hypercube: d out of range");
    std::vector<Edge> es;
    for (int v = 0; v < (1 << d); ++v)
        for (int i = 0; i < d; ++i)
            if (!(v >> i & 1)) es.emplace_back(v, v | (1 << i));
    return named(Graph(1 << d, es), "hypercube");
}

Graph star(int leaves) {
    require(leaves >= 0, "star: leaves < 0");
    std::vector<Edge> es;
    for (int i = 1; i <= leaves; ++i) es.emplace_back(0, i);
    return named(Graph(leaves + 1, es), "star");
}

Graph half_graph(int k) {
    require(k >= 0, "half_graph: k < 0");
    std::vector<Edge> es;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) es.emplace_back(i, k + j);
    return named(Graph(2 * k, es), "half_graph");
}

Graph threshold(int k) {
    require(k >= 0, "threshold: k < 0");
    auto es = half_graph(k).edges();
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) es.emplace_back(i, j);
    return named(Graph(2 * k, es), "threshold");
}

Graph co_half_graph(int k) {
    require(k >= 0, "co_half_graph: k < 0");
    auto es = threshold(k).edges();
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) es.emplace_back(k + i, k + j);
    return named(Graph(2 * k, es), "co_half_graph");
}

BiGraph half_bigraph(int k) {
    require(k >= 0, "half_bigraph: k < 0");
    std::vector<Edge> es;
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) es.emplace_back(i, j);
    return named(BiGraph(k, k, es), "half_graph");
}

BiGraph biclique(int a, int b) {
    require(a >= 0 && b >= 0, "biclique: negative size");
    std::vector<Edge> es;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) es.emplace_back(i, j);
    return named(BiGraph(a, b, es), "biclique");
}

BiGraph z_graph(int q, int s) {
    require(q >= 0 && s >= 0, "z: negative parameter");
    std::vector<Edge> es;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j <= i; ++j)
            for (int t = 0; t < s; ++t) es.emplace_back(i, j * s + t);
    return named(BiGraph(q, q * s, es), "z");
}

BiGraph f_graph(int p, int q) {
    require(p >= 0 && q >= 0, "f: negative parameter");
    // Y: a_1..a_p (0..p-1), c (p), b_1..b_q (p+1..p+q)
    std::vector<Edge> es{{0, p}, {1, p}};
    for (int i = 0; i < p; ++i) es.emplace_back(0, i);
    for (int j = 0; j < q; ++j) es.emplace_back(1, p + 1 + j);
    return named(BiGraph(2, p + q + 1, es), "f");
}

BiGraph fstar(int p, int q) {
    require(p >= 0 && q >= 0, "fstar: negative parameter");
    auto es = f_graph(p, q).edges();
    return named(BiGraph(2, p + q + 2, es), "fstar");
}

BiGraph t_graph(int p) {
    require(p >= 0, "t: negative parameter");
    std::vector<Edge> es;
    for (int i = 0; i < p; ++i) {
        es.emplace_back(0, i);
        es.emplace_back(1, p + i);
    }
    return named(BiGraph(2, 2 * p, es), "t");
}

BiGraph s123() {
    // centre x0; legs: y0 | y1-x1 | y2-x2-y3
    return named(BiGraph(3, 4, {{0, 0}, {0, 1}, {1, 1}, {0, 2}, {2, 2}, {2, 3}}), "s123");
}

BiGraph p7() {
    // y0 x0 y1 x1 y2 x2 y3
    return named(BiGraph(3, 4, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 3}}), "p7");
}

Graph equivalence(const std::vector<int>& class_sizes) {
    std::vector<Edge> es;
    int base = 0;
    for (int s : class_sizes) {
        require(s >= 0, "equivalence: negative class size");
        for (int i = 0; i < s; ++i)
            for (int j = i + 1; j < s; ++j) es.emplace_back(base + i, base + j);
        base += s;
    }
    return named(Graph(base, es), "equivalence");
}

BiGraph bipartite_equivalence(const std::vector<std::pair<int, int>>& blocks) {
    std::vector<Edge> es;
    int bx = 0, by = 0;
    for (auto [a, b] : blocks) {
        require(a >= 0 && b >= 0, "bipartite_equivalence: negative block size");
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j) es.emplace_back(bx + i, by + j);
        bx += a;
        by += b;
    }
    return named(BiGraph(bx, by, es), "bipartite_equivalence");
}

BiGraph chain_graph(int ny, const std::vector<int>& profile) {
    std::vector<Edge> es;
    for (size_t i = 0; i < profile.size(); ++i) {
        require(profile[i] >= 0 && profile[i] <= ny, "chain_graph: profile entry out of range");
        for (int j = 0; j < profile[i]; ++j) es.emplace_back(static_cast<int>(i), j);
    }
    return named(BiGraph(static_cast<int>(profile.size()), ny, es), "chain_graph");
}

Graph gnp(int n, double p, uint64_t seed) {
    require(n >= 0 && p >= 0 && p <= 1, "gnp: bad parameters");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) es.emplace_back(i, j);
    return named(Graph(n, es), "gnp");
}

BiGraph random_bigraph(int nx, int ny, double p, uint64_t seed) {
    require(nx >= 0 && ny >= 0 && p >= 0 && p <= 1, "random_bigraph: bad parameters");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> es;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            if (coin(rng)) es.emplace_back(i, j);
    return named(BiGraph(nx, ny, es), "random_bigraph");
}

Graph random_tree(int n, uint64_t seed) { return named(random_forest(n, 1, seed), "random_tree"); }

Graph random_forest(int n, int trees, uint64_t seed) {
    require(n >= 0 && trees >= 1, "random_forest: bad parameters");
    std::mt19937_64 rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> es;
    for (int i = std::min(trees, n); i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        es.emplace_back(perm[i], perm[pick(rng)]);
    }
    return named(Graph(n, es), "random_forest");
}

}  // namespace gen

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

[[noreturn]] void bad(int lineno, const std::string& what) {
    throw FormatError("line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

GraphDoc read_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!next_content_line(in, line, lineno)) throw FormatError("empty graph file");
    std::istringstream head(line);
    std::string kind, name;
    head >> kind >> name;
    GraphDoc doc;
    int nx = 0, ny = 0;
    if (kind == "graph") {
        if (!(head >> nx) || nx < 0) bad(lineno, "bad vertex count");
    } else if (kind == "bigraph") {
        doc.bipartite = true;
        if (!(head >> nx >> ny) || nx < 0 || ny < 0) bad(lineno, "bad part sizes");
    } else {
        bad(lineno, "expected 'graph' or 'bigraph'");
    }
    std::string extra;
    if (head >> extra) bad(lineno, "trailing tokens in header");
    std::vector<Edge> es;
    std::set<Edge> seen;
    while (next_content_line(in, line, lineno)) {
        std::istringstream ls(line);
        std::string tag;
        int u, v;
        if (!(ls >> tag) || tag != "e" || !(ls >> u >> v) || (ls >> extra)) bad(lineno, "expected 'e <u> <v>'");
        if (doc.bipartite) {
            if (u < 0 || u >= nx || v < 0 || v >= ny) bad(lineno, "edge endpoint out of range");
            if (!seen.insert({u, v}).second) bad(lineno, "duplicate edge");
        } else {
            if (u < 0 || u >= nx || v < 0 || v >= nx) bad(lineno, "edge endpoint out of range");
            if (u == v) bad(lineno, "self-loop");
            if (!seen.insert({std::min(u, v), std::max(u, v)}).second) bad(lineno, "duplicate edge");
        }
        es.emplace_back(u, v);
    }
    if (doc.bipartite) {
        doc.bg = BiGraph(nx, ny, es);
        doc.bg.name = name;
    } else {
        doc.g = Graph(nx, es);
        doc.g.name = name;
    }
    return doc;
}

GraphDoc read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
    out << "graph " << g.name << ' ' << g.n() << '\n';
    for (auto [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
}

void write_graph(std::ostream& out, const BiGraph& g) {
    out << "bigraph " << g.name << ' ' << g.nx() << ' ' << g.ny() << '\n';
    for (auto [x, y] : g.edges()) out << "e " << x << ' ' << y << '\n';
}

}  // namespace pugkit

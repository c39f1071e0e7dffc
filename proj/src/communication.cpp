#include "pugkit/communication.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace pugkit {

using Kind = ProtocolNode::Kind;

namespace {

ProtocolNode leaf(bool v) {
    ProtocolNode p;
    p.out = v;
    return p;
}

std::string join(const std::vector<uint64_t>& v) {
    if (v.empty()) return "-";
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<uint64_t> split_array(const std::string& s) {
    std::vector<uint64_t> out;
    if (s == "-") return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("protocol: bad array entry '" + tok + "'");
        out.push_back(std::stoull(tok));
    }
    return out;
}

// Copy the subtree at v of src into dst, mapping each node through f; returns the new index.
int copy_subtree(const EqProtocolTree& src, int v, EqProtocolTree& dst,
                 const std::function<ProtocolNode(const ProtocolNode&)>& f) {
    int id = static_cast<int>(dst.nodes.size());
    dst.nodes.push_back(f(src.nodes[v]));
    if (src.nodes[v].kind != Kind::Leaf) {
        int c0 = copy_subtree(src, src.nodes[v].child[0], dst, f);
        dst.nodes[id].child[0] = c0;
        int c1 = copy_subtree(src, src.nodes[v].child[1], dst, f);
        dst.nodes[id].child[1] = c1;
    } else {
        dst.nodes[id].child[0] = dst.nodes[id].child[1] = -1;
    }
    return id;
}

EqProtocolTree map_tree(const EqProtocolTree& t, int n, const std::function<ProtocolNode(const ProtocolNode&)>& f) {
    t.validate();
    EqProtocolTree out;
    out.n = n;
    copy_subtree(t, 0, out, f);
    return out;
}

}  // namespace

int EqProtocolTree::depth() const {
    std::function<int(int)> rec = [&](int v) -> int {
        const auto& p = nodes[v];
        if (p.kind == Kind::Leaf) return 0;
        return 1 + std::max(rec(p.child[0]), rec(p.child[1]));
    };
    return nodes.empty() ? 0 : rec(0);
}

bool EqProtocolTree::equality_only() const {
    for (const auto& p : nodes)
        if (p.kind == Kind::Comm) return false;
    return true;
}

void EqProtocolTree::validate() const {
    if (n < 0) throw FormatError("protocol: negative n");
    if (nodes.empty()) throw FormatError("protocol: no nodes");
    std::vector<int> seen(nodes.size(), 0);
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v < 0 || v >= static_cast<int>(nodes.size())) throw FormatError("protocol: child out of range");
        if (seen[v]++) throw FormatError("protocol: node reached twice");
        const auto& p = nodes[v];
        if (p.kind == Kind::Leaf) continue;
        if (p.kind == Kind::Comm) {
            if (static_cast<int>(p.a.size()) != n) throw FormatError("protocol: message map is not total on [n]");
            for (uint64_t m : p.a)
                if (m > 1) throw FormatError("protocol: message values must be 0 or 1");
        } else if (static_cast<int>(p.a.size()) != n || static_cast<int>(p.b.size()) != n) {
            throw FormatError("protocol: equality maps are not total on [n]");
        }
        stack.push_back(p.child[0]);
        stack.push_back(p.child[1]);
    }
    for (int s : seen)
        if (!s) throw FormatError("protocol: unreachable node");
}

std::string EqProtocolTree::str() const {
    validate();
    std::ostringstream o;
    o << "protocol " << n << "\n";
    std::function<void(int)> rec = [&](int v) {
        const auto& p = nodes[v];
        switch (p.kind) {
            case Kind::Leaf:
                o << "leaf " << (p.out ? 1 : 0) << "\n";
                return;
            case Kind::Comm:
                o << "comm " << (p.bob ? 'B' : 'A') << ' ' << join(p.a) << "\n";
                break;
            case Kind::Eq:
                o << "eq " << join(p.a) << ' ' << join(p.b) << "\n";
                break;
        }
        rec(p.child[0]);
        rec(p.child[1]);
    };
    rec(0);
    return o.str();
}

EqProtocolTree EqProtocolTree::parse(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string w;
        while (ls >> w) toks.push_back(w);
        if (!toks.empty() && toks[0][0] != '#') lines.push_back(toks);
    }
    if (lines.empty() || lines[0][0] != "protocol" || lines[0].size() != 2) throw FormatError("protocol: missing header");
    EqProtocolTree t;
    try {
        t.n = std::stoi(lines[0][1]);
    } catch (const std::exception&) {
        throw FormatError("protocol: bad n");
    }
    size_t pos = 1;
    std::function<int()> rec = [&]() -> int {
        if (pos >= lines.size()) throw FormatError("protocol: truncated node list");
        const auto& tk = lines[pos++];
        ProtocolNode p;
        if (tk[0] == "leaf" && tk.size() == 2 && (tk[1] == "0" || tk[1] == "1")) {
            p.out = tk[1] == "1";
        } else if (tk[0] == "comm" && tk.size() == 3 && (tk[1] == "A" || tk[1] == "B")) {
            p.kind = Kind::Comm;
            p.bob = tk[1] == "B";
            p.a = split_array(tk[2]);
        } else if (tk[0] == "eq" && tk.size() == 3) {
            p.kind = Kind::Eq;
            p.a = split_array(tk[1]);
            p.b = split_array(tk[2]);
        } else {
            throw FormatError("protocol: bad node line '" + tk[0] + "'");
        }
        int id = static_cast<int>(t.nodes.size());
        t.nodes.push_back(p);
        if (p.kind != Kind::Leaf) {
            int c0 = rec();
            t.nodes[id].child[0] = c0;
            int c1 = rec();
            t.nodes[id].child[1] = c1;
        }
        return id;
    };
    rec();
    if (pos != lines.size()) throw FormatError("protocol: trailing lines");
    t.validate();
    return t;
}

ProtocolRun run_protocol(const EqProtocolTree& t, int x, int y) {
    if (x < 0 || y < 0 || x >= t.n || y >= t.n) throw std::out_of_range("run_protocol: input outside [n]");
    ProtocolRun r;
    int v = 0;
    for (size_t steps = 0;; ++steps) {
        if (v < 0 || v >= static_cast<int>(t.nodes.size()) || steps > t.nodes.size())
            throw FormatError("protocol: malformed tree");
        const auto& p = t.nodes[v];
        if (p.kind == Kind::Leaf) {
            r.out = p.out;
            return r;
        }
        bool e;
        if (p.kind == Kind::Comm) {
            const auto& m = p.a;
            if (m.size() != size_t(t.n)) throw FormatError("protocol: malformed tree");
            e = m[p.bob ? y : x] != 0;
        } else {
            if (p.a.size() != size_t(t.n) || p.b.size() != size_t(t.n)) throw FormatError("protocol: malformed tree");
            e = p.a[x] == p.b[y];
        }
        r.transcript.push_back(e);
        v = p.child[e];
    }
}

std::vector<std::vector<bool>> protocol_table(const EqProtocolTree& t) {
    t.validate();
    std::vector<std::vector<bool>> tab(t.n, std::vector<bool>(t.n));
    for (int x = 0; x < t.n; ++x)
        for (int y = 0; y < t.n; ++y) tab[x][y] = run_protocol(t, x, y).out;
    return tab;
}

EqProtocolTree normalize_to_equality_nodes(const EqProtocolTree& t) {
    return map_tree(t, t.n, [&](const ProtocolNode& p) {
        if (p.kind != Kind::Comm) return p;
        ProtocolNode q = p;
        q.kind = Kind::Eq;
        std::vector<uint64_t> one(p.a.size(), 1);
        if (p.bob) {
            q.a = one;
            q.b = p.a;
        } else {
            q.b = one;
        }
        q.bob = false;
        return q;
    });
}

EqProtocolTree complete_tree(const EqProtocolTree& t, int depth) {
    EqProtocolTree e = normalize_to_equality_nodes(t);
    if (e.depth() > depth) throw std::invalid_argument("complete_tree: tree deeper than target");
    EqProtocolTree out;
    out.n = e.n;
    std::function<int(int, int)> rec = [&](int v, int d) -> int {
        int id = static_cast<int>(out.nodes.size());
        const auto& p = e.nodes[v];
        if (p.kind == Kind::Leaf && d == depth) {
            out.nodes.push_back(p);
            return id;
        }
        if (p.kind == Kind::Leaf) {
            // constant node; both children repeat the leaf
            ProtocolNode q;
            q.kind = Kind::Eq;
            q.a.assign(e.n, 0);
            q.b.assign(e.n, 0);
            out.nodes.push_back(q);
            int c0 = rec(v, d + 1);
            out.nodes[id].child[0] = c0;
            int c1 = rec(v, d + 1);
            out.nodes[id].child[1] = c1;
            return id;
        }
        out.nodes.push_back(p);
        int c0 = rec(p.child[0], d + 1);
        out.nodes[id].child[0] = c0;
        int c1 = rec(p.child[1], d + 1);
        out.nodes[id].child[1] = c1;
        return id;
    };
    rec(0, 0);
    return out;
}

EqProtocolTree labels_to_protocol(const EqualityScheme& sch, bool irreflexive) {
    const int n = static_cast<int>(sch.n());
    std::vector<Label> lab = canonical_codes(sch.labels);
    // (prefix, code count) classes, numbered by first appearance
    std::map<std::pair<std::string, size_t>, int> shape_id;
    std::vector<int> shape(n), rep;
    size_t K = 0;
    for (int v = 0; v < n; ++v) {
        auto key = std::make_pair(lab[v].prefix.str(), lab[v].codes.size());
        auto it = shape_id.find(key);
        if (it == shape_id.end()) {
            it = shape_id.emplace(key, static_cast<int>(rep.size())).first;
            rep.push_back(v);
        }
        shape[v] = it->second;
        K = std::max(K, lab[v].codes.size());
    }
    const int w = bits_for(rep.size());
    const uint64_t kMissA = ~0ULL, kMissB = ~0ULL - 1;

    EqProtocolTree t;
    t.n = n;
    using Pairs = std::vector<std::pair<int, int>>;

    // Q bits along the current path, row-major over [K] x [K]
    std::vector<bool> Q;
    std::function<int(const Pairs&, int)> build = [&](const Pairs& R, int stage) -> int {
        int id = static_cast<int>(t.nodes.size());
        if (R.empty()) {
            t.nodes.push_back(leaf(false));
            return id;
        }
        ProtocolNode p;
        if (stage < w) {
            p.kind = Kind::Comm;
            for (int x = 0; x < n; ++x) p.a.push_back(uint64_t(shape[x]) >> (w - 1 - stage) & 1);
        } else if (stage < w + int(K * K)) {
            int q = stage - w, i = q / int(K), j = q % int(K);
            p.kind = Kind::Eq;
            for (int x = 0; x < n; ++x) p.a.push_back(size_t(i) < lab[x].codes.size() ? lab[x].codes[i] : kMissA);
            for (int y = 0; y < n; ++y) p.b.push_back(size_t(j) < lab[y].codes.size() ? lab[y].codes[j] : kMissB);
        } else {
            // Bob evaluates the decoder against the representative of Alice's class
            int sx = shape[R.front().first];
            const Label& lx = lab[rep[sx]];
            std::vector<int> out(n, -1);
            for (auto [x, y] : R) {
                if (out[y] >= 0) continue;
                MatrixEq eq;
                eq.q.assign(lx.codes.size(), std::vector<bool>(lab[y].codes.size()));
                for (size_t i = 0; i < lx.codes.size(); ++i)
                    for (size_t j = 0; j < lab[y].codes.size(); ++j) eq.q[i][j] = Q[i * K + j];
                out[y] = sch.decoder->decode(Reader(lx), Reader(lab[y]), eq);
            }
            int first = -1;
            bool constant = true;
            for (int o : out)
                if (o >= 0) {
                    if (first < 0) first = o;
                    constant = constant && o == first;
                }
            if (constant) {
                t.nodes.push_back(leaf(first == 1));
                return id;
            }
            p.kind = Kind::Comm;
            p.bob = true;
            for (int o : out) p.a.push_back(o == 1);
            t.nodes.push_back(p);
            int c0 = static_cast<int>(t.nodes.size());
            t.nodes.push_back(leaf(false));
            int c1 = static_cast<int>(t.nodes.size());
            t.nodes.push_back(leaf(true));
            t.nodes[id].child[0] = c0;
            t.nodes[id].child[1] = c1;
            return id;
        }
        t.nodes.push_back(p);
        Pairs R0, R1;
        for (auto [x, y] : R) {
            bool e = p.kind == Kind::Comm ? p.a[x] != 0 : p.a[x] == p.b[y];
            (e ? R1 : R0).push_back({x, y});
        }
        for (int e = 0; e < 2; ++e) {
            if (stage >= w) Q.push_back(e);
            int c = build(e ? R1 : R0, stage + 1);
            t.nodes[id].child[e] = c;
            if (stage >= w) Q.pop_back();
        }
        return id;
    };

    Pairs all, off;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) (x == y ? all : off).push_back({x, y});
    if (n == 0) {
        t.nodes.push_back(leaf(false));
        return t;
    }
    if (irreflexive) {
        ProtocolNode id;
        id.kind = Kind::Eq;
        for (int v = 0; v < n; ++v) {
            id.a.push_back(v);
            id.b.push_back(v);
        }
        t.nodes.push_back(id);
        int c0 = build(off, 0);
        t.nodes[0].child[0] = c0;
        int c1 = static_cast<int>(t.nodes.size());
        t.nodes.push_back(leaf(false));
        t.nodes[0].child[1] = c1;
        return t;
    }
    all.insert(all.end(), off.begin(), off.end());
    build(all, 0);
    return t;
}

EqProtocolTree adjacency_protocol(const Graph& g) {
    const int n = g.n(), w = bits_for(n);
    EqProtocolTree t;
    t.n = n;
    std::function<int(int, int)> build = [&](int stage, int xpre) -> int {
        int id = static_cast<int>(t.nodes.size());
        if (stage == w) {
            if (xpre >= n) {
                t.nodes.push_back(leaf(false));
                return id;
            }
            ProtocolNode p;
            p.kind = Kind::Comm;
            p.bob = true;
            for (int y = 0; y < n; ++y) p.a.push_back(g.adj(xpre, y));
            t.nodes.push_back(p);
            int c0 = static_cast<int>(t.nodes.size());
            t.nodes.push_back(leaf(false));
            int c1 = static_cast<int>(t.nodes.size());
            t.nodes.push_back(leaf(true));
            t.nodes[id].child[0] = c0;
            t.nodes[id].child[1] = c1;
            return id;
        }
        if (xpre << (w - stage) >= n) {
            t.nodes.push_back(leaf(false));
            return id;
        }
        ProtocolNode p;
        p.kind = Kind::Comm;
        for (int x = 0; x < n; ++x) p.a.push_back(x >> (w - 1 - stage) & 1);
        t.nodes.push_back(p);
        int c0 = build(stage + 1, xpre << 1);
        t.nodes[id].child[0] = c0;
        int c1 = build(stage + 1, xpre << 1 | 1);
        t.nodes[id].child[1] = c1;
        return id;
    };
    if (n == 0)
        t.nodes.push_back(leaf(false));
    else
        build(0, 0);
    return t;
}

// ---- diagonal labels ----

namespace {

// eta: simulate the complete tree of the given depth on the diagonal bits; the last code is the side.
class DiagonalDecoder : public EqDecoder {
   public:
    DiagonalDecoder(int depth, std::vector<bool> leaves) : d_(depth), leaves_(std::move(leaves)) {}

    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        const int t = (1 << d_) - 1;
        std::vector<uint32_t> cx(t + 1), cy(t + 1);
        for (int i = 0; i <= t; ++i) {
            cx[i] = x.code();
            cy[i] = y.code();
        }
        if (eq.eq(cx[t], cy[t])) return false;  // same side
        return eval([&](int i) { return eq.eq(cx[i], cy[i]); });
    }
    bool eval(const std::function<bool(int)>& w) const {
        int p = 0, leafidx = 0;
        for (int h = d_; h > 0; --h) {
            bool e = w(p);
            leafidx = leafidx << 1 | int(e);
            p = e ? p + (1 << (h - 1)) : p + 1;
        }
        return leaves_[leafidx];
    }
    int depth() const { return d_; }
    std::string kind() const override { return "diagonal"; }
    json params() const override {
        std::vector<int> l(leaves_.begin(), leaves_.end());
        return {{"depth", d_}, {"leaves", l}};
    }

   private:
    int d_;
    std::vector<bool> leaves_;
};

}  // namespace

EqualityScheme protocol_to_diagonal_labels(const EqProtocolTree& t, const Graph& g) {
    if (t.n != g.n()) throw std::invalid_argument("protocol_to_diagonal_labels: tree is not over [n]");
    auto tab = protocol_table(t);
    for (int x = 0; x < g.n(); ++x)
        for (int y = 0; y < g.n(); ++y)
            if (tab[x][y] != (x != y && g.adj(x, y)))
                throw std::invalid_argument("protocol_to_diagonal_labels: tree does not compute adjacency at (" +
                                            std::to_string(x) + ", " + std::to_string(y) + ")");
    const int d = t.depth();
    if (d > 20) throw std::invalid_argument("protocol_to_diagonal_labels: depth above 20");
    EqProtocolTree c = complete_tree(t, d);
    std::vector<int> inner;
    std::vector<bool> leaves;
    for (int v = 0; v < static_cast<int>(c.nodes.size()); ++v) {
        if (c.nodes[v].kind == Kind::Leaf)
            leaves.push_back(c.nodes[v].out);
        else
            inner.push_back(v);
    }
    const int n = g.n();
    EqualityScheme sch;
    sch.name = g.name;
    sch.decoder = std::make_shared<DiagonalDecoder>(d, leaves);
    sch.labels.resize(2 * n);
    for (int v = 0; v < n; ++v) {
        for (int i : inner) {
            sch.labels[v].code(c.nodes[i].a[v]);
            sch.labels[n + v].code(c.nodes[i].b[v]);
        }
        sch.labels[v].code(0);
        sch.labels[n + v].code(1);
    }
    return sch;
}

// ---- equivalence interpretations ----

namespace {

bool eta_at(const EquivalenceInterpretation& in, int x, int y) {
    size_t idx = 0;
    for (int i = 0; i < in.t; ++i) idx |= size_t(in.slices[i].adj(x, y)) << i;
    return in.eta[idx];
}

using Mask = uint32_t;

// Distinct edge masks (bit x * ny + y) of bipartite equivalence graphs on nx + ny vertices.
std::vector<Mask> equivalence_masks(int nx, int ny) {
    const int N = nx + ny;
    std::unordered_set<Mask> seen;
    std::vector<int> cls(N, 0);
    std::function<void(int, int)> rec = [&](int v, int used) {
        if (v == N) {
            Mask m = 0;
            for (int x = 0; x < nx; ++x)
                for (int y = 0; y < ny; ++y)
                    if (cls[x] == cls[nx + y]) m |= Mask(1) << (x * ny + y);
            seen.insert(m);
            return;
        }
        for (int c = 0; c <= used; ++c) {
            cls[v] = c;
            rec(v + 1, std::max(used, c + 1));
        }
    };
    rec(0, 0);
    std::vector<Mask> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

// Smallest bipartite equivalence graph containing the edges of m: each component made a biclique.
Mask biclique_closure(Mask m, int nx, int ny) {
    std::vector<int> par(nx + ny);
    for (int i = 0; i < nx + ny; ++i) par[i] = i;
    std::function<int(int)> find = [&](int v) { return par[v] == v ? v : par[v] = find(par[v]); };
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            if (m >> (x * ny + y) & 1) par[find(x)] = find(nx + y);
    Mask out = 0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            int rx = find(x), ry = find(nx + y);
            if (rx == ry) out |= Mask(1) << (x * ny + y);
        }
    return out;
}

BiGraph from_mask(Mask m, int nx, int ny) {
    std::vector<Edge> es;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            if (m >> (x * ny + y) & 1) es.push_back({x, y});
    return BiGraph(nx, ny, es);
}

}  // namespace

bool verify_equivalence_interpretation(const BiGraph& g, const EquivalenceInterpretation& in, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (in.t < 0 || in.t > 24) return fail("t out of range");
    if (static_cast<int>(in.slices.size()) != in.t) return fail("slice count differs from t");
    if (in.eta.size() != (size_t(1) << in.t)) return fail("eta is not a function on {0,1}^t");
    for (int i = 0; i < in.t; ++i) {
        const auto& s = in.slices[i];
        if (s.nx() != g.nx() || s.ny() != g.ny()) return fail("slice " + std::to_string(i) + " has other sides");
        if (!is_bipartite_equivalence(s)) return fail("slice " + std::to_string(i) + " contains an induced P4");
    }
    for (int x = 0; x < g.nx(); ++x)
        for (int y = 0; y < g.ny(); ++y)
            if (eta_at(in, x, y) != g.adj(x, y))
                return fail("eta disagrees with adjacency at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
    return true;
}

std::optional<EquivalenceInterpretation> search_interpretation(const BiGraph& g, int t_max) {
    const int nx = g.nx(), ny = g.ny();
    if (nx + ny > 10) throw std::invalid_argument("search_interpretation: more than 10 vertices");
    if (t_max < 1 || t_max > 2) throw std::invalid_argument("search_interpretation: t_max must be 1 or 2");
    Mask E = 0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            if (g.adj(x, y)) E |= Mask(1) << (x * ny + y);
        }
    auto masks = equivalence_masks(nx, ny);
    std::unordered_set<Mask> is_eq(masks.begin(), masks.end());

    // t = 1: eta in {const 0, id, not, const 1}
    for (int eta = 0; eta < 4; ++eta) {
        bool e0 = eta & 1, e1 = eta >> 1 & 1;
        Mask need1 = 0, need0 = 0;  // pairs whose colour must be 1 / 0
        bool ok = true;
        for (int p = 0; p < nx * ny && ok; ++p) {
            bool e = E >> p & 1;
            bool c0 = e0 == e, c1 = e1 == e;
            if (!c0 && !c1) ok = false;
            if (c1 && !c0) need1 |= Mask(1) << p;
            if (c0 && !c1) need0 |= Mask(1) << p;
        }
        if (!ok) continue;
        Mask s = biclique_closure(need1, nx, ny);
        if (s & need0) continue;
        EquivalenceInterpretation in;
        in.t = 1;
        in.eta = {e0, e1};
        in.slices = {from_mask(s, nx, ny)};
        return in;
    }
    if (t_max < 2) return std::nullopt;
    // t = 2: fix slice 1 and eta, then slice 2 is forced up to free pairs
    for (Mask s1 : masks)
        for (int eta = 0; eta < 16; ++eta) {
            Mask need1 = 0, need0 = 0;
            bool ok = true;
            for (int p = 0; p < nx * ny && ok; ++p) {
                bool e = E >> p & 1;
                int c1 = s1 >> p & 1;
                bool v0 = (eta >> (c1 | 0) & 1) == e, v1 = (eta >> (c1 | 2) & 1) == e;
                if (!v0 && !v1) ok = false;
                if (v1 && !v0) need1 |= Mask(1) << p;
                if (v0 && !v1) need0 |= Mask(1) << p;
            }
            if (!ok) continue;
            Mask s2 = biclique_closure(need1, nx, ny);
            if (s2 & need0) continue;
            EquivalenceInterpretation in;
            in.t = 2;
            for (int i = 0; i < 4; ++i) in.eta.push_back(eta >> i & 1);
            in.slices = {from_mask(s1, nx, ny), from_mask(s2, nx, ny)};
            return in;
        }
    return std::nullopt;
}

EquivalenceInterpretation interpretation_from_diagonal(const EqualityScheme& diag, int n) {
    auto dec = std::dynamic_pointer_cast<const DiagonalDecoder>(diag.decoder);
    if (!dec) throw std::invalid_argument("interpretation_from_diagonal: not a diagonal scheme");
    if (static_cast<int>(diag.n()) != 2 * n) throw std::invalid_argument("interpretation_from_diagonal: expected 2n labels");
    const int t = (1 << dec->depth());  // t inner nodes plus the side code
    if (t > 20) throw std::invalid_argument("interpretation_from_diagonal: more than 20 codes");
    EquivalenceInterpretation in;
    in.t = t;
    for (int i = 0; i < t; ++i) {
        std::vector<Edge> es;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (diag.labels[x].codes.at(i) == diag.labels[n + y].codes.at(i)) es.push_back({x, y});
        in.slices.emplace_back(n, n, es);
    }
    in.eta.resize(size_t(1) << t);
    for (size_t w = 0; w < in.eta.size(); ++w) {
        if (w >> (t - 1) & 1) continue;  // side codes agree
        in.eta[w] = dec->eval([&](int i) { return (w >> i & 1) != 0; });
    }
    return in;
}

EqProtocolTree gt_from_adjacency(const EqProtocolTree& t, const ChainWitness& w) {
    const int k = w.k();
    for (int i = 0; i < k; ++i)
        if (w.a[i] < 0 || w.a[i] >= t.n || w.b[i] < 0 || w.b[i] >= t.n)
            throw std::invalid_argument("gt_from_adjacency: witness outside [n]");
    return map_tree(t, k, [&](const ProtocolNode& p) {
        if (p.kind == Kind::Leaf) return p;
        ProtocolNode q = p;
        q.a.clear();
        q.b.clear();
        for (int i = 0; i < k; ++i) {
            if (p.kind == Kind::Comm) {
                q.a.push_back(p.a[p.bob ? w.b[i] : w.a[i]]);
            } else {
                q.a.push_back(p.a[w.a[i]]);
                q.b.push_back(p.b[w.b[i]]);
            }
        }
        return q;
    });
}

void register_communication_decoders() {
    register_decoder("diagonal", [](const json& j) -> DecoderPtr {
        try {
            int d = j.at("depth").get<int>();
            auto l = j.at("leaves").get<std::vector<int>>();
            if (d < 0 || d > 20 || l.size() != (size_t(1) << d)) throw FormatError("diagonal decoder: bad leaves");
            return std::make_shared<DiagonalDecoder>(d, std::vector<bool>(l.begin(), l.end()));
        } catch (const json::exception& e) {
            throw FormatError(std::string("diagonal decoder: ") + e.what());
        }
    });
}

namespace gen {

EqProtocolTree random_protocol(int n, int depth, uint64_t seed) {
    std::mt19937_64 rng(seed);
    EqProtocolTree t;
    t.n = n;
    std::function<int(int)> build = [&](int d) -> int {
        int id = static_cast<int>(t.nodes.size());
        if (d == depth || (d > 0 && rng() % 5 == 0)) {
            t.nodes.push_back(leaf(rng() & 1));
            return id;
        }
        ProtocolNode p;
        int kind = int(rng() % 3);
        if (kind < 2) {
            p.kind = Kind::Comm;
            p.bob = kind == 1;
            for (int v = 0; v < n; ++v) p.a.push_back(rng() & 1);
        } else {
            p.kind = Kind::Eq;
            uint64_t r = 1 + rng() % std::max(1, n / 2);
            for (int v = 0; v < n; ++v) p.a.push_back(rng() % r);
            for (int v = 0; v < n; ++v) p.b.push_back(rng() % r);
        }
        t.nodes.push_back(p);
        int c0 = build(d + 1);
        t.nodes[id].child[0] = c0;
        int c1 = build(d + 1);
        t.nodes[id].child[1] = c1;
        return id;
    };
    build(0);
    return t;
}

}  // namespace gen

}  // namespace pugkit

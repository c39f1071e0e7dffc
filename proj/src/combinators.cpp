#include "pugkit/combinators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace pugkit {

namespace {

class AddVerticesDecoder : public EqDecoder {
   public:
    AddVerticesDecoder(int c, DecoderPtr base) : c_(c), base_(std::move(base)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        int ib = bits_for(c_);
        bool wx = x.bit(), wy = y.bit();
        if (!wx && !wy) {
            x.bits(c_);
            y.bits(c_);
            return base_->decode(x, y, eq);
        }
        if (wx && wy) {
            x.bits(ib);
            int j = static_cast<int>(y.bits(ib));
            uint64_t mx = x.bits(c_);
            return (mx >> (c_ - 1 - j)) & 1;
        }
        // one ordinary, one special
        Reader& o = wx ? y : x;
        Reader& w = wx ? x : y;
        int j = static_cast<int>(w.bits(ib));
        uint64_t mo = o.bits(c_);
        return (mo >> (c_ - 1 - j)) & 1;
    }
    std::string kind() const override { return "add_vertices"; }
    json params() const override { return {{"c", c_}, {"base", decoder_to_json(*base_)}}; }

   private:
    int c_;
    DecoderPtr base_;
};

class ComplementationDecoder : public EqDecoder {
   public:
    ComplementationDecoder(int k, DecoderPtr base) : k_(k), base_(std::move(base)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        int pb = bits_for(k_);
        x.bits(pb);
        uint64_t py = y.bits(pb);
        uint64_t rowx = x.bits(k_);
        y.bits(k_);
        bool f = (rowx >> (k_ - 1 - py)) & 1;
        return base_->decode(x, y, eq) != f;
    }
    std::string kind() const override { return "complementation"; }
    json params() const override { return {{"k", k_}, {"base", decoder_to_json(*base_)}}; }

   private:
    int k_;
    DecoderPtr base_;
};

class TwinDecoder : public EqDecoder {
   public:
    TwinDecoder(bool true_twins, DecoderPtr base) : true_(true_twins), base_(std::move(base)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        if (eq.eq(x.code(), y.code())) return true_;
        return base_->decode(x, y, eq);
    }
    std::string kind() const override { return "twin"; }
    json params() const override { return {{"true_twins", true_}, {"base", decoder_to_json(*base_)}}; }

   private:
    bool true_;
    DecoderPtr base_;
};

// side bit, vertex code, base label
class BipLiftDecoder : public EqDecoder {
   public:
    explicit BipLiftDecoder(DecoderPtr base) : base_(std::move(base)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        bool sx = x.bit(), sy = y.bit();
        if (sx == sy) return false;
        if (eq.eq(x.code(), y.code())) return false;
        return base_->decode(x, y, eq);
    }
    std::string kind() const override { return "bip_lift"; }
    json params() const override { return {{"base", decoder_to_json(*base_)}}; }

   private:
    DecoderPtr base_;
};

class BipLowerDecoder : public EqDecoder {
   public:
    explicit BipLowerDecoder(DecoderPtr base) : base_(std::move(base)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        Reader xa = x.sub();
        y.skip_sub();
        Reader yb = y.sub();
        return base_->decode(xa, yb, eq);
    }
    std::string kind() const override { return "bip_lower"; }
    json params() const override { return {{"base", decoder_to_json(*base_)}}; }

   private:
    DecoderPtr base_;
};

enum : int { kTagL = 0, kTagD = 1, kTagC = 2, kTagP = 3 };

class DecompDecoder : public EqDecoder {
   public:
    DecompDecoder(int kb, DecoderPtr leaf) : kb_(kb), leaf_(std::move(leaf)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        bool sx = x.bit(), sy = y.bit();
        if (sx == sy) return false;
        if (sx) {
            SwappedEq sw(eq);
            return node(y, x, sw);
        }
        return node(x, y, eq);
    }
    std::string kind() const override { return "decomp"; }
    json params() const override { return {{"kb", kb_}, {"leaf", decoder_to_json(*leaf_)}}; }

   private:
    // x in X, y in Y
    bool node(Reader x, Reader y, const EqOracle& eq) const {
        while (true) {
            int t = static_cast<int>(x.bits(2));
            if (static_cast<int>(y.bits(2)) != t) throw FormatError("decomposition labels disagree on node type");
            switch (t) {
                case kTagL:
                    return leaf_->decode(x, y, eq);
                case kTagD:
                    if (!eq.eq(x.code(), y.code())) return false;
                    break;
                case kTagC:
                    if (!eq.eq(x.code(), y.code())) return true;
                    break;
                default: {
                    uint64_t ix = x.bits(kb_);
                    x.bits(kb_);
                    uint64_t iy = y.bits(kb_);
                    y.bits(kb_);
                    for (uint64_t i = 0; i < iy; ++i) x.skip_sub();
                    for (uint64_t i = 0; i < ix; ++i) y.skip_sub();
                    Reader cx = x.sub(), cy = y.sub();
                    x = cx;
                    y = cy;
                }
            }
        }
    }
    int kb_;
    DecoderPtr leaf_;
};

std::string join_ids(const std::vector<int>& v, char sep = ',') {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s.empty() ? "-" : s;
}

std::vector<int> parse_ids(const std::string& s) {
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

std::string join_parts(const std::vector<std::vector<int>>& ps) {
    std::string s;
    for (size_t i = 0; i < ps.size(); ++i) {
        if (i) s += '/';
        s += join_ids(ps[i]);
    }
    return s.empty() ? "-" : s;
}

std::vector<std::vector<int>> parse_parts(const std::string& s) {
    std::vector<std::vector<int>> out;
    if (s == "-" || s.empty()) return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '/')) out.push_back(parse_ids(tok));
    return out;
}

const char* tag_name(char t) {
    switch (t) {
        case 'L': return "L";
        case 'D': return "D";
        case 'C': return "Dbar";
        default: return "P";
    }
}

// Components of g restricted to (xs, ys), as (xs, ys) pairs in original ids.
std::vector<std::pair<std::vector<int>, std::vector<int>>> split_components(const BiGraph& g, const std::vector<int>& xs,
                                                                           const std::vector<int>& ys, bool co) {
    InducedBi ib = induced_subgraph(g, xs, ys);
    BiGraph h = co ? bipartite_complement(ib.g) : ib.g;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    for (const auto& comp : components(h)) {
        std::vector<int> cx, cy;
        for (int v : comp) {
            if (v < h.nx())
                cx.push_back(ib.xorig[v]);
            else
                cy.push_back(ib.yorig[v - h.nx()]);
        }
        std::sort(cx.begin(), cx.end());
        std::sort(cy.begin(), cy.end());
        out.emplace_back(cx, cy);
    }
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        int ka = a.first.empty() ? g.nx() + a.second.front() : a.first.front();
        int kb = b.first.empty() ? g.nx() + b.second.front() : b.first.front();
        return ka < kb;
    });
    return out;
}

int find_part(const std::vector<std::vector<int>>& parts, int v) {
    for (size_t i = 0; i < parts.size(); ++i)
        if (std::binary_search(parts[i].begin(), parts[i].end(), v)) return static_cast<int>(i);
    return -1;
}

bool contains(const std::vector<int>& sorted, int v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

}  // namespace

EqualityScheme add_vertices_scheme(const Graph& g, const std::vector<int>& W, int c, const EqualityScheme& base) {
    if (static_cast<int>(W.size()) > c) throw FamilyViolation("add_vertices: |W| > c");
    std::vector<int> w = W;
    std::sort(w.begin(), w.end());
    if (std::unique(w.begin(), w.end()) != w.end()) throw std::invalid_argument("add_vertices: repeated vertex in W");
    std::vector<int> widx(g.n(), -1);
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= g.n()) throw std::invalid_argument("add_vertices: vertex out of range");
        widx[w[i]] = static_cast<int>(i);
    }
    if (base.labels.size() != size_t(g.n()) - w.size()) throw std::invalid_argument("add_vertices: base size mismatch");
    auto mask = [&](int v) {
        uint64_t m = 0;
        for (int i = 0; i < c; ++i) m = (m << 1) | (i < int(w.size()) && g.adj(v, w[i]) ? 1 : 0);
        return m;
    };
    EqualityScheme out;
    out.name = base.name;
    out.labels.resize(g.n());
    size_t next = 0;
    for (int v = 0; v < g.n(); ++v) {
        Label& l = out.labels[v];
        if (widx[v] >= 0) {
            l.bit(true);
            l.bits(widx[v], bits_for(c));
            l.bits(mask(v), c);
        } else {
            l.bit(false);
            l.bits(mask(v), c);
            l.append(base.labels[next++]);
        }
    }
    out.decoder = std::make_shared<AddVerticesDecoder>(c, base.decoder);
    return out;
}

EqualityScheme complementation_scheme(const EqualityScheme& base, const std::vector<int>& part, int k,
                                      const std::vector<std::vector<bool>>& flip) {
    if (part.size() != base.labels.size()) throw std::invalid_argument("complementation: partition does not cover V");
    if (k < 1 || flip.size() != size_t(k)) throw std::invalid_argument("complementation: flip matrix is not k x k");
    for (int a = 0; a < k; ++a) {
        if (flip[a].size() != size_t(k)) throw std::invalid_argument("complementation: flip matrix is not k x k");
        for (int b = 0; b < k; ++b)
            if (flip[a][b] != flip[b][a]) throw std::invalid_argument("complementation: flip matrix not symmetric");
    }
    EqualityScheme out;
    out.name = base.name;
    for (size_t v = 0; v < part.size(); ++v) {
        int p = part[v];
        if (p < 0 || p >= k) throw std::invalid_argument("complementation: part index out of range");
        Label l;
        l.bits(p, bits_for(k));
        for (int b = 0; b < k; ++b) l.bit(flip[p][b]);
        l.append(base.labels[v]);
        out.labels.push_back(std::move(l));
    }
    out.decoder = std::make_shared<ComplementationDecoder>(k, base.decoder);
    return out;
}

Graph apply_complementation(const Graph& h, const std::vector<int>& part, const std::vector<std::vector<bool>>& flip) {
    std::vector<Edge> es;
    for (int u = 0; u < h.n(); ++u)
        for (int v = u + 1; v < h.n(); ++v)
            if (h.adj(u, v) != bool(flip.at(part.at(u)).at(part.at(v)))) es.emplace_back(u, v);
    Graph g(h.n(), es);
    g.name = h.name;
    return g;
}

TwinReduced twin_reduce_scheme(const Graph& g, bool true_twins,
                               const std::function<EqualityScheme(const Graph&)>& quotient_labeler) {
    TwinReduced r;
    r.twins = twin_partition(g, true_twins);
    r.quotient = induced_subgraph(g, r.twins.rep());
    EqualityScheme base = quotient_labeler(r.quotient.g);
    if (base.labels.size() != r.twins.classes.size()) throw std::invalid_argument("twin_reduce: quotient labels size");
    r.scheme.name = g.name;
    for (int v = 0; v < g.n(); ++v) {
        Label l;
        l.code(r.twins.cls[v]);
        l.append(base.labels[r.twins.cls[v]]);
        r.scheme.labels.push_back(std::move(l));
    }
    r.scheme.decoder = std::make_shared<TwinDecoder>(true_twins, base.decoder);
    return r;
}

EqualityScheme bip_lift(const EqualityScheme& base) {
    int n = static_cast<int>(base.labels.size());
    EqualityScheme out;
    out.name = base.name;
    for (int side = 0; side < 2; ++side)
        for (int v = 0; v < n; ++v) {
            Label l;
            l.bit(side == 1);
            l.code(v);
            l.append(base.labels[v]);
            out.labels.push_back(std::move(l));
        }
    out.decoder = std::make_shared<BipLiftDecoder>(base.decoder);
    return out;
}

EqualityScheme bip_lower(const EqualityScheme& bip_scheme, int n) {
    if (bip_scheme.labels.size() != size_t(2 * n)) throw std::invalid_argument("bip_lower: expected 2n labels");
    EqualityScheme out;
    out.name = bip_scheme.name;
    for (int v = 0; v < n; ++v) {
        Label l;
        l.sub(bip_scheme.labels[v]);
        l.sub(bip_scheme.labels[n + v]);
        out.labels.push_back(std::move(l));
    }
    out.decoder = std::make_shared<BipLowerDecoder>(bip_scheme.decoder);
    return out;
}

int DecompositionTree::depth() const {
    if (nodes.empty()) return 0;
    std::function<int(int)> d = [&](int i) {
        int best = 0;
        for (int c : nodes[i].children) best = std::max(best, 1 + d(c));
        return best;
    };
    return d(0);
}

int DecompositionTree::max_parts() const {
    int k = 1;
    for (const auto& nd : nodes)
        if (nd.tag == 'P') k = std::max({k, int(nd.xparts.size()), int(nd.yparts.size())});
    return k;
}

std::string DecompositionTree::str() const {
    std::ostringstream out;
    std::function<void(int, int)> rec = [&](int i, int ind) {
        const DecompNode& nd = nodes[i];
        out << std::string(2 * ind, ' ') << "node " << tag_name(nd.tag) << " verts=x:" << join_ids(nd.xs)
            << "|y:" << join_ids(nd.ys);
        if (nd.tag == 'P') out << " parts=x:" << join_parts(nd.xparts) << "|y:" << join_parts(nd.yparts);
        out << '\n';
        for (int c : nd.children) rec(c, ind + 1);
    };
    if (!nodes.empty()) rec(0, 0);
    return out.str();
}

DecompositionTree DecompositionTree::parse(const std::string& text) {
    DecompositionTree t;
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<int, int>> stack;  // (indent, node index)
    while (std::getline(in, line)) {
        if (line.find_first_not_of(' ') == std::string::npos) continue;
        size_t ind = line.find_first_not_of(' ');
        std::istringstream ls(line.substr(ind));
        std::string kw, tag, verts, parts;
        ls >> kw >> tag >> verts >> parts;
        if (kw != "node" || verts.rfind("verts=x:", 0) != 0) throw FormatError("bad tree line '" + line + "'");
        DecompNode nd;
        if (tag == "L") nd.tag = 'L';
        else if (tag == "D") nd.tag = 'D';
        else if (tag == "Dbar") nd.tag = 'C';
        else if (tag == "P") nd.tag = 'P';
        else throw FormatError("bad node tag '" + tag + "'");
        auto bar = verts.find("|y:");
        if (bar == std::string::npos) throw FormatError("bad verts field");
        nd.xs = parse_ids(verts.substr(8, bar - 8));
        nd.ys = parse_ids(verts.substr(bar + 3));
        if (nd.tag == 'P') {
            auto pb = parts.find("|y:");
            if (parts.rfind("parts=x:", 0) != 0 || pb == std::string::npos) throw FormatError("bad parts field");
            nd.xparts = parse_parts(parts.substr(8, pb - 8));
            nd.yparts = parse_parts(parts.substr(pb + 3));
        }
        int level = static_cast<int>(ind);
        while (!stack.empty() && stack.back().first >= level) stack.pop_back();
        int idx = static_cast<int>(t.nodes.size());
        if (stack.empty() && idx != 0) throw FormatError("tree has more than one root");
        if (!stack.empty()) t.nodes[stack.back().second].children.push_back(idx);
        t.nodes.push_back(std::move(nd));
        stack.emplace_back(level, idx);
    }
    if (t.nodes.empty()) throw FormatError("empty tree");
    return t;
}

bool check_decomposition(const BiGraph& g, const DecompositionTree& t,
                         const std::function<bool(const BiGraph&)>& leaf_ok, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (t.nodes.empty()) return fail("empty tree");
    std::vector<int> allx(g.nx()), ally(g.ny());
    for (int i = 0; i < g.nx(); ++i) allx[i] = i;
    for (int i = 0; i < g.ny(); ++i) ally[i] = i;
    if (t.nodes[0].xs != allx || t.nodes[0].ys != ally) return fail("root does not cover the graph");
    std::vector<int> seen(t.nodes.size(), 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (seen[i]++) return fail("node reached twice");
        const DecompNode& nd = t.nodes[i];
        if (!std::is_sorted(nd.xs.begin(), nd.xs.end()) || !std::is_sorted(nd.ys.begin(), nd.ys.end()))
            return fail("unsorted vertex set");
        for (int c : nd.children)
            if (c <= 0 || c >= int(t.nodes.size())) return fail("bad child index");
        if (nd.tag == 'L') {
            if (!nd.children.empty()) return fail("leaf with children");
            if (!leaf_ok(induced_subgraph(g, nd.xs, nd.ys).g)) return fail("leaf outside leaf family");
            return true;
        }
        if (nd.tag == 'D' || nd.tag == 'C') {
            auto comps = split_components(g, nd.xs, nd.ys, nd.tag == 'C');
            if (comps.size() != nd.children.size()) return fail("children are not the (co-)components");
            for (size_t j = 0; j < comps.size(); ++j) {
                const DecompNode& ch = t.nodes[nd.children[j]];
                if (ch.xs != comps[j].first || ch.ys != comps[j].second)
                    return fail("children are not the (co-)components");
            }
        } else {
            std::vector<int> ux, uy;
            for (const auto& p : nd.xparts) ux.insert(ux.end(), p.begin(), p.end());
            for (const auto& p : nd.yparts) uy.insert(uy.end(), p.begin(), p.end());
            std::sort(ux.begin(), ux.end());
            std::sort(uy.begin(), uy.end());
            if (ux != nd.xs || uy != nd.ys) return fail("P parts do not partition the node");
            for (const auto& p : nd.xparts)
                if (p.empty() || !std::is_sorted(p.begin(), p.end())) return fail("empty or unsorted part");
            for (const auto& p : nd.yparts)
                if (p.empty() || !std::is_sorted(p.begin(), p.end())) return fail("empty or unsorted part");
            size_t q = nd.yparts.size();
            if (nd.children.size() != nd.xparts.size() * q) return fail("P node needs all cross children");
            for (size_t a = 0; a < nd.xparts.size(); ++a)
                for (size_t b = 0; b < q; ++b) {
                    const DecompNode& ch = t.nodes[nd.children[a * q + b]];
                    if (ch.xs != nd.xparts[a] || ch.ys != nd.yparts[b]) return fail("P child mismatch");
                }
        }
        for (int c : nd.children)
            if (!rec(c)) return false;
        return true;
    };
    return rec(0);
}

DecompositionTree build_decomposition(const BiGraph& g, const std::function<bool(const BiGraph&)>& is_leaf,
                                      const std::function<PartitionPair(const BiGraph&)>& split, bool use_co,
                                      int max_depth) {
    DecompositionTree t;
    std::function<int(std::vector<int>, std::vector<int>, int)> rec = [&](std::vector<int> xs, std::vector<int> ys,
                                                                          int depth) -> int {
        if (depth > max_depth) throw FamilyViolation("decomposition depth exceeds " + std::to_string(max_depth));
        int idx = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[idx].xs = xs;
        t.nodes[idx].ys = ys;
        InducedBi ib = induced_subgraph(g, xs, ys);
        if (is_leaf(ib.g)) {
            t.nodes[idx].tag = 'L';
            return idx;
        }
        auto comps = split_components(g, xs, ys, false);
        char tag = 'D';
        if (comps.size() <= 1 && use_co) {
            comps = split_components(g, xs, ys, true);
            tag = 'C';
        }
        std::vector<int> kids;
        if (comps.size() > 1) {
            t.nodes[idx].tag = tag;
            for (auto& [cx, cy] : comps) kids.push_back(rec(cx, cy, depth + 1));
        } else {
            PartitionPair pp = split(ib.g);
            if (pp.xparts.size() <= 1 && pp.yparts.size() <= 1)
                throw FamilyViolation("P-node split makes no progress");
            std::vector<std::vector<int>> xparts, yparts;
            for (const auto& p : pp.xparts) {
                std::vector<int> o;
                for (int v : p) o.push_back(ib.xorig.at(v));
                std::sort(o.begin(), o.end());
                if (!o.empty()) xparts.push_back(o);
            }
            for (const auto& p : pp.yparts) {
                std::vector<int> o;
                for (int v : p) o.push_back(ib.yorig.at(v));
                std::sort(o.begin(), o.end());
                if (!o.empty()) yparts.push_back(o);
            }
            t.nodes[idx].tag = 'P';
            t.nodes[idx].xparts = xparts;
            t.nodes[idx].yparts = yparts;
            for (const auto& px : xparts)
                for (const auto& py : yparts) kids.push_back(rec(px, py, depth + 1));
        }
        t.nodes[idx].children = kids;
        return idx;
    };
    rec([&] {
        std::vector<int> v(g.nx());
        for (int i = 0; i < g.nx(); ++i) v[i] = i;
        return v;
    }(),
        [&] {
            std::vector<int> v(g.ny());
            for (int i = 0; i < g.ny(); ++i) v[i] = i;
            return v;
        }(),
        0);
    return t;
}

EqualityScheme assemble_decomposition_labels(const BiGraph& g, const DecompositionTree& t, const LeafScheme& leaf) {
    int kb = bits_for(t.max_parts());
    std::map<int, std::vector<Label>> leaf_labels;
    auto leaf_label = [&](int node, bool side, int v) -> const Label& {
        const DecompNode& nd = t.nodes[node];
        auto it = leaf_labels.find(node);
        if (it == leaf_labels.end()) {
            auto ls = leaf.labels(induced_subgraph(g, nd.xs, nd.ys).g);
            if (ls.size() != nd.xs.size() + nd.ys.size()) throw std::logic_error("leaf labeler size mismatch");
            it = leaf_labels.emplace(node, std::move(ls)).first;
        }
        const auto& vs = side ? nd.ys : nd.xs;
        size_t pos = std::lower_bound(vs.begin(), vs.end(), v) - vs.begin();
        return it->second[side ? nd.xs.size() + pos : pos];
    };
    // component id: smallest member, Y shifted by nx
    auto comp_id = [&](const DecompNode& ch) -> uint64_t {
        return ch.xs.empty() ? uint64_t(g.nx() + ch.ys.front()) : uint64_t(ch.xs.front());
    };
    std::function<void(int, bool, int, Label&)> write = [&](int node, bool side, int v, Label& out) {
        const DecompNode& nd = t.nodes[node];
        switch (nd.tag) {
            case 'L':
                out.bits(kTagL, 2);
                out.append(leaf_label(node, side, v));
                return;
            case 'D':
            case 'C': {
                out.bits(nd.tag == 'D' ? kTagD : kTagC, 2);
                for (int c : nd.children) {
                    const DecompNode& ch = t.nodes[c];
                    if (contains(side ? ch.ys : ch.xs, v)) {
                        out.code(comp_id(ch));
                        write(c, side, v, out);
                        return;
                    }
                }
                throw std::logic_error("vertex missing from every component");
            }
            default: {
                out.bits(kTagP, 2);
                int own = find_part(side ? nd.yparts : nd.xparts, v);
                const auto& opp = side ? nd.xparts : nd.yparts;
                if (own < 0) throw std::logic_error("vertex missing from every part");
                out.bits(own, kb);
                out.bits(opp.size() - 1, kb);
                size_t q = nd.yparts.size();
                for (size_t j = 0; j < opp.size(); ++j) {
                    int c = side ? nd.children[j * q + own] : nd.children[own * q + j];
                    Label sub;
                    write(c, side, v, sub);
                    out.sub(sub);
                }
            }
        }
    };
    EqualityScheme out;
    out.name = g.name;
    for (int side = 0; side < 2; ++side)
        for (int v = 0; v < (side ? g.ny() : g.nx()); ++v) {
            Label l;
            l.bit(side == 1);
            write(0, side == 1, v, l);
            out.labels.push_back(std::move(l));
        }
    out.decoder = std::make_shared<DecompDecoder>(kb, leaf.decoder);
    return out;
}

void register_combinator_decoders() {
    register_decoder("add_vertices", [](const json& j) -> DecoderPtr {
        return std::make_shared<AddVerticesDecoder>(j.at("c").get<int>(), decoder_from_json(j.at("base")));
    });
    register_decoder("complementation", [](const json& j) -> DecoderPtr {
        return std::make_shared<ComplementationDecoder>(j.at("k").get<int>(), decoder_from_json(j.at("base")));
    });
    register_decoder("twin", [](const json& j) -> DecoderPtr {
        return std::make_shared<TwinDecoder>(j.at("true_twins").get<bool>(), decoder_from_json(j.at("base")));
    });
    register_decoder("bip_lift",
                     [](const json& j) -> DecoderPtr { return std::make_shared<BipLiftDecoder>(decoder_from_json(j.at("base"))); });
    register_decoder("bip_lower", [](const json& j) -> DecoderPtr {
        return std::make_shared<BipLowerDecoder>(decoder_from_json(j.at("base")));
    });
    register_decoder("decomp", [](const json& j) -> DecoderPtr {
        return std::make_shared<DecompDecoder>(j.at("kb").get<int>(), decoder_from_json(j.at("leaf")));
    });
}

}  // namespace pugkit

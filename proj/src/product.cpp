#include "pugkit/product.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pugkit {

// ---- finite family ----

FamilyDistanceScheme::FamilyDistanceScheme(std::vector<Graph> family, int k) : family_(std::move(family)), k_(k) {
    if (k < 1) throw std::invalid_argument("distance sketch: k < 1");
    if (family_.empty()) throw std::invalid_argument("distance sketch: empty family");
    int maxn = 1;
    for (size_t gi = 0; gi < family_.size(); ++gi) {
        const Graph& g = family_[gi];
        offsets_.push_back(static_cast<int>(owner_.size()));
        owner_.insert(owner_.end(), g.n(), static_cast<int>(gi));
        maxn = std::max(maxn, g.n());
        if (static_cast<long long>(g.n()) * g.n() > (1LL << 26))
            throw std::invalid_argument("distance sketch: graph too large for a table");
        std::vector<int> tab(size_t(g.n()) * g.n());
        for (int v = 0; v < g.n(); ++v) {
            auto d = bfs_distances(g, v);
            std::copy(d.begin(), d.end(), tab.begin() + size_t(v) * g.n());
        }
        dist_.push_back(std::move(tab));
    }
    gbits_ = bits_for(family_.size());
    vbits_ = bits_for(maxn);
    if (gbits_ + vbits_ > 62) throw std::invalid_argument("distance sketch: id overflow");
}

namespace {

class FixedSample : public SketchSample {
   public:
    explicit FixedSample(const FamilyDistanceScheme* s) : s_(s) {}
    BitString sketch(int v) const override { return s_->label(v); }

   private:
    const FamilyDistanceScheme* s_;
};

}  // namespace

BitString FamilyDistanceScheme::label(int v) const {
    if (v < 0 || v >= n()) throw std::out_of_range("distance sketch: vertex out of range");
    BitString b;
    b.push_bits(owner_[v], gbits_);
    b.push_bits(v - offsets_[owner_[v]], vbits_);
    return b;
}

std::unique_ptr<SketchSample> FamilyDistanceScheme::sample(uint64_t) const {
    return std::make_unique<FixedSample>(this);
}

int FamilyDistanceScheme::decode(const BitString& a, const BitString& b) const {
    if (a.size() != size_t(width()) || b.size() != size_t(width())) throw FormatError("sketch width mismatch");
    uint64_t ga = a.get_bits(0, gbits_), gb = b.get_bits(0, gbits_);
    if (ga != gb || ga >= family_.size()) return kBottom;
    const Graph& g = family_[ga];
    uint64_t u = a.get_bits(gbits_, vbits_), v = b.get_bits(gbits_, vbits_);
    if (u >= uint64_t(g.n()) || v >= uint64_t(g.n())) return kBottom;
    int d = dist_[ga][u * g.n() + v];
    return d < 0 || d > k_ ? kBottom : d;
}

json FamilyDistanceScheme::describe() const {
    json gs = json::array();
    for (const auto& g : family_) gs.push_back({{"n", g.n()}, {"edges", g.edges()}});
    return {{"kind", "family_distance"}, {"k", k_}, {"graphs", gs}};
}

std::shared_ptr<FamilyDistanceScheme> FamilyDistanceScheme::from_json(const json& j) {
    std::vector<Graph> gs;
    for (const auto& g : j.at("graphs")) gs.emplace_back(g.at("n").get<int>(), g.at("edges").get<std::vector<Edge>>());
    return std::make_shared<FamilyDistanceScheme>(std::move(gs), j.at("k").get<int>());
}

// ---- parameters ----

ProductParams default_product_params(int k) {
    if (k < 1) throw std::invalid_argument("product sketch: k < 1");
    ProductParams p;
    p.m = 9 * k * k;
    long long need = 27LL * (k + 1) * (k + 1);
    p.t = std::max<long long>(9LL * k, (need + p.m - 1) / p.m);
    return p;
}

bool product_params_ok(int k, const ProductParams& p) {
    return k >= 1 && p.m >= 9LL * k * k && p.t >= 9LL * k && 1LL * p.m * p.t >= 27LL * (k + 1) * (k + 1);
}

// ---- product scheme ----

ProductScheme::ProductScheme(std::vector<int> dims, SketchPtr base, std::vector<std::vector<int>> base_ids, int k,
                             ProductParams p)
    : dims_(std::move(dims)), base_(std::move(base)), ids_(std::move(base_ids)), k_(k), p_(p) {
    if (p_.m == 0 && p_.t == 0) p_ = default_product_params(k);
    if (!product_params_ok(k, p_)) throw std::invalid_argument("product sketch: need m >= 9k^2, t >= 9k, mt >= 27(k+1)^2");
    if (dims_.empty() || ids_.size() != dims_.size()) throw std::invalid_argument("product sketch: factor mismatch");
    for (size_t i = 0; i < dims_.size(); ++i)
        if (dims_[i] < 1 || ids_[i].size() != size_t(dims_[i]))
            throw std::invalid_argument("product sketch: factor mismatch");
    s_ = base_->width();
    if (1LL * p_.m * p_.t * (s_ + 1) > (1LL << 31)) throw std::invalid_argument("product sketch: label too wide");
}

int ProductScheme::n() const {
    long long total = 1;
    for (int d : dims_) {
        total *= d;
        if (total > INT_MAX) throw std::overflow_error("product sketch: too many vertices to enumerate");
    }
    return static_cast<int>(total);
}

long long ProductScheme::vertex_id(const std::vector<int>& c) const {
    if (c.size() != dims_.size()) throw std::invalid_argument("product vertex: wrong number of coordinates");
    long long id = 0;
    for (size_t i = 0; i < dims_.size(); ++i) {
        if (c[i] < 0 || c[i] >= dims_[i]) throw std::out_of_range("product vertex: coordinate out of range");
        id = id * dims_[i] + c[i];
    }
    return id;
}

std::vector<int> ProductScheme::coords(long long id) const {
    std::vector<int> c(dims_.size());
    for (size_t i = dims_.size(); i-- > 0;) {
        c[i] = static_cast<int>(id % dims_[i]);
        id /= dims_[i];
    }
    return c;
}

std::unique_ptr<ProductSample> ProductScheme::sample_product(uint64_t seed) const {
    auto s = std::unique_ptr<ProductSample>(new ProductSample());
    s->sch_ = this;
    s->seed_ = seed;
    for (size_t i = 0; i < dims_.size(); ++i) {
        s->ell_.push_back(base_->sample(hash3(seed, kTagProduct, i)));
        s->b_.push_back(static_cast<int>(hash3(seed, kTagProduct ^ 0xb0, i) % uint64_t(p_.m)));
    }
    return s;
}

std::unique_ptr<SketchSample> ProductScheme::sample(uint64_t seed) const { return sample_product(seed); }

int ProductSample::slot(int i, int v) const {
    return static_cast<int>(hash3(hash3(seed_, kTagProduct ^ 0xc0, i), 0, v) % uint64_t(sch_->p_.t));
}

BitString ProductSample::factor_label(int i, int v) const { return ell_[i]->sketch(sch_->ids_[i][v]); }

BitString ProductSample::sketch(int v) const { return sketch_coords(sch_->coords(v)); }

BitString ProductSample::sketch_coords(const std::vector<int>& x) const {
    sch_->vertex_id(x);  // range check
    const int s = sch_->s_, t = sch_->p_.t;
    BitString out(size_t(sch_->width()));
    for (size_t i = 0; i < x.size(); ++i) {
        size_t cell = (size_t(b_[i]) * t + slot(int(i), x[i])) * (s + 1);
        BitString l = factor_label(int(i), x[i]);
        for (int j = 0; j < s; ++j)
            if (l.get(j)) out.set(cell + j, !out.get(cell + j));
        out.set(cell + s, !out.get(cell + s));
    }
    return out;
}

int product_decode(const SketchDecoder& base, int s, int k, ProductParams p, const BitString& a, const BitString& b) {
    size_t w = size_t(p.m) * p.t * (s + 1);
    if (a.size() != w || b.size() != w) throw FormatError("sketch width mismatch");
    auto cell = [&](int i, int j) { return (size_t(i) * p.t + j) * (s + 1); };
    struct Row {
        int i, j1, j2;
    };
    std::vector<Row> rows;
    std::vector<int> hit;
    int total = 0;
    for (int i = 0; i < p.m; ++i) {
        hit.clear();
        for (int j = 0; j < p.t; ++j) {
            size_t c = cell(i, j) + s;
            if (a.get(c) != b.get(c)) hit.push_back(j);
        }
        if (hit.empty()) continue;
        if (hit.size() != 2) return kBottom;
        total += 2;
        if (total > 2 * k) return kBottom;
        rows.push_back({i, hit[0], hit[1]});
    }
    int sum = 0;
    for (auto [i, j1, j2] : rows) {
        BitString z1(s), z2(s);
        for (int q = 0; q < s; ++q) {
            z1.set(q, a.get(cell(i, j1) + q) != b.get(cell(i, j1) + q));
            z2.set(q, a.get(cell(i, j2) + q) != b.get(cell(i, j2) + q));
        }
        int d = base(z1, z2);
        if (d == kBottom) return kBottom;
        sum += d;
    }
    return sum > k ? kBottom : sum;
}

int ProductScheme::decode(const BitString& a, const BitString& b) const {
    return product_decode([this](const BitString& x, const BitString& y) { return base_->decode(x, y); }, s_, k_, p_, a,
                          b);
}

json ProductScheme::describe() const {
    return {{"kind", "product"}, {"k", k_},           {"m", p_.m},
            {"t", p_.t},         {"base_width", s_}, {"dims", dims_},
            {"base", base_->describe()}};
}

std::shared_ptr<ProductScheme> product_distance_scheme(const std::vector<Graph>& factors, int k, ProductParams p) {
    auto fam = std::make_shared<FamilyDistanceScheme>(factors, k);
    std::vector<int> dims;
    std::vector<std::vector<int>> ids;
    for (size_t i = 0; i < factors.size(); ++i) {
        dims.push_back(factors[i].n());
        std::vector<int> row(factors[i].n());
        for (int v = 0; v < factors[i].n(); ++v) row[v] = fam->offset(int(i)) + v;
        ids.push_back(std::move(row));
    }
    SketchPtr base = fam;
    if (base->delta() > 1.0 / (10.0 * k)) base = boost(base, 1.0 / (10.0 * k));
    return std::make_shared<ProductScheme>(std::move(dims), base, std::move(ids), k, p);
}

bool product_good_events(const ProductScheme& sch, const std::vector<Graph>& factors, const ProductSample& s,
                         const std::vector<int>& x, const std::vector<int>& y) {
    std::vector<int> buckets;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == y[i]) continue;
        if (s.slot(int(i), x[i]) == s.slot(int(i), y[i])) return false;
        buckets.push_back(s.bucket(int(i)));
        int got = sch.base().decode(s.factor_label(int(i), x[i]), s.factor_label(int(i), y[i]));
        int d = bfs_distances(factors[i], x[i])[y[i]];
        if (got != (d < 0 || d > sch.k() ? kBottom : d)) return false;
    }
    std::sort(buckets.begin(), buckets.end());
    return std::adjacent_find(buckets.begin(), buckets.end()) == buckets.end();
}

Rate hamming_spread_check(long long u, int n, int k, double delta, long long trials, uint64_t seed) {
    if (!(delta > 0 && delta < 1) || n <= k || k < 0 || u < 1 || double(u) < 9.0 * (k + 1) * (k + 1) / delta)
        throw std::invalid_argument("spread check: need u >= 9(k+1)^2/delta and n > k");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> pick(0, u - 1);
    Rate r;
    std::vector<long long> draws(n);
    for (long long tr = 0; tr < trials; ++tr) {
        for (auto& d : draws) d = pick(rng);
        std::sort(draws.begin(), draws.end());
        int weight = 0;
        for (int i = 0; i < n;) {
            int j = i;
            while (j < n && draws[j] == draws[i]) ++j;
            weight += (j - i) & 1;
            i = j;
        }
        r.errors += weight <= k;
        ++r.trials;
    }
    return r;
}

json DistanceAdjacency::describe() const { return {{"kind", "distance_adjacency"}, {"inner", inner_->describe()}}; }

std::shared_ptr<DistanceAdjacency> adjacency_from_distance1(const std::vector<Graph>& factors) {
    return std::make_shared<DistanceAdjacency>(product_distance_scheme(factors, 1));
}

SketchDecoder product_decoder_from_json(const json& j) {
    std::string kind = j.at("kind");
    if (kind == "family_distance") {
        std::shared_ptr<const FamilyDistanceScheme> f = FamilyDistanceScheme::from_json(j);
        return [f](const BitString& a, const BitString& b) { return f->decode(a, b); };
    }
    if (kind == "product") {
        int k = j.at("k"), s = j.at("base_width");
        ProductParams p{j.at("m").get<int>(), j.at("t").get<int>()};
        if (!product_params_ok(k, p)) throw FormatError("product sketch parameters violate the inequalities");
        auto base = sketch_decoder_from_json(j.at("base"));
        return [base, s, k, p](const BitString& a, const BitString& b) { return product_decode(base, s, k, p, a, b); };
    }
    if (kind == "distance_adjacency") {
        auto inner = product_decoder_from_json(j.at("inner"));
        return [inner](const BitString& a, const BitString& b) { return inner(a, b) == 1 ? 1 : 0; };
    }
    throw FormatError("unknown sketch kind " + kind);
}

}  // namespace pugkit

#include "pugkit/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

namespace pugkit {

int LabelLayout::width() const {
    int h = header ? bits_for(S + 1) + bits_for(K + 1) : 0;
    return h + S + K * cb;
}

BitString LabelLayout::pack(const Label& l) const {
    BitString b;
    if (header) {
        b.push_bits(l.prefix.size(), bits_for(S + 1));
        b.push_bits(l.codes.size(), bits_for(K + 1));
    }
    BitString p = l.prefix;
    p.resize(S);
    b.append(p);
    for (int i = 0; i < K; ++i) b.push_bits(i < static_cast<int>(l.codes.size()) ? l.codes[i] : 0, cb);
    return b;
}

Label LabelLayout::unpack(const BitString& b) const {
    if (static_cast<int>(b.size()) != width()) throw FormatError("sketch width mismatch");
    size_t pos = 0;
    size_t sl = S, kl = K;
    if (header) {
        sl = b.get_bits(pos, bits_for(S + 1));
        pos += bits_for(S + 1);
        kl = b.get_bits(pos, bits_for(K + 1));
        pos += bits_for(K + 1);
        if (static_cast<int>(sl) > S || static_cast<int>(kl) > K) throw FormatError("sketch header out of range");
    }
    Label l;
    l.prefix = b.slice(pos, sl);
    pos += S;
    for (size_t i = 0; i < kl; ++i) l.codes.push_back(b.get_bits(pos + i * cb, cb));
    return l;
}

json LabelLayout::to_json() const { return {{"header", header}, {"S", S}, {"K", K}, {"cb", cb}}; }

LabelLayout LabelLayout::from_json(const json& j) {
    LabelLayout l;
    l.header = j.at("header");
    l.S = j.at("S");
    l.K = j.at("K");
    l.cb = j.at("cb");
    return l;
}

LabelLayout layout_for(const std::vector<Label>& labels, int code_bits) {
    LabelLayout lay;
    lay.cb = code_bits;
    bool uniform = true;
    for (size_t i = 0; i < labels.size(); ++i) {
        lay.S = std::max(lay.S, static_cast<int>(labels[i].prefix.size()));
        lay.K = std::max(lay.K, static_cast<int>(labels[i].codes.size()));
        if (labels[i].prefix.size() != labels[0].prefix.size() || labels[i].codes.size() != labels[0].codes.size())
            uniform = false;
    }
    lay.header = !uniform;
    return lay;
}

namespace {

class FnSample : public SketchSample {
   public:
    explicit FnSample(std::function<BitString(int)> f) : f_(std::move(f)) {}
    BitString sketch(int v) const override { return f_(v); }

   private:
    std::function<BitString(int)> f_;
};


}  // namespace

CompressedScheme::CompressedScheme(const EqualityScheme& base) : dec_(base.decoder) {
    labels_ = canonical_codes(base.labels);
    uint64_t K = 0;
    for (const auto& l : labels_) K = std::max<uint64_t>(K, l.codes.size());
    alphabet_ = 3 * K * K;
    layout_ = layout_for(labels_, bits_for(std::max<uint64_t>(alphabet_, 1)));
}

Label CompressedScheme::compressed(uint64_t seed, int v) const {
    Label l = labels_.at(v);
    for (auto& c : l.codes) c = hash3(seed, kTagCompress, c) % alphabet_;
    return l;
}

namespace {

class CompressedSample : public SketchSample {
   public:
    CompressedSample(const CompressedScheme& s, uint64_t seed, const LabelLayout& lay)
        : s_(s), seed_(seed), lay_(lay) {}
    BitString sketch(int v) const override { return lay_.pack(s_.compressed(seed_, v)); }
    uint64_t seed() const { return seed_; }

   private:
    const CompressedScheme& s_;
    uint64_t seed_;
    LabelLayout lay_;
};

}  // namespace

std::unique_ptr<SketchSample> CompressedScheme::sample(uint64_t seed) const {
    return std::make_unique<CompressedSample>(*this, seed, layout_);
}

int CompressedScheme::decode(const BitString& a, const BitString& b) const {
    return decode_labels(*dec_, layout_.unpack(a), layout_.unpack(b)) ? 1 : 0;
}

int CompressedScheme::query(const SketchSample& s, int u, int v) const {
    if (auto* cs = dynamic_cast<const CompressedSample*>(&s))
        return decode_labels(*dec_, compressed(cs->seed(), u), compressed(cs->seed(), v)) ? 1 : 0;
    return SketchScheme::query(s, u, v);
}

json CompressedScheme::describe() const {
    return {{"kind", "compressed"}, {"layout", layout_.to_json()}, {"decoder", decoder_to_json(*dec_)}};
}

int boost_copies(double delta) {
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("boost: delta must be in (0, 1)");
    if (delta >= 1.0 / 3.0) return 1;
    return static_cast<int>(std::ceil(3.0 * std::log(1.0 / delta) - 1e-12));
}

BoostedScheme::BoostedScheme(SketchPtr base, int copies) : base_(std::move(base)), copies_(copies) {
    if (copies < 1) throw std::invalid_argument("boost: copies < 1");
}

namespace {

class BoostedSample : public SketchSample {
   public:
    std::vector<std::unique_ptr<SketchSample>> parts;
    BitString sketch(int v) const override {
        BitString b;
        for (const auto& p : parts) b.append(p->sketch(v));
        return b;
    }
};

}  // namespace

std::unique_ptr<SketchSample> BoostedScheme::sample(uint64_t seed) const {
    auto s = std::make_unique<BoostedSample>();
    for (int i = 0; i < copies_; ++i) s->parts.push_back(base_->sample(hash3(seed, kTagBoost, i)));
    return s;
}

int majority_vote(const std::vector<int>& votes) {
    std::map<int, int> count;
    bool binary = true;
    for (int v : votes) {
        if (2 * ++count[v] > int(votes.size())) return v;
        binary = binary && (v == 0 || v == 1);
    }
    return binary ? 0 : kBottom;
}

int BoostedScheme::decode(const BitString& a, const BitString& b) const {
    int w = base_->width();
    std::vector<int> votes;
    for (int i = 0; i < copies_; ++i) votes.push_back(base_->decode(a.slice(size_t(i) * w, w), b.slice(size_t(i) * w, w)));
    return majority_vote(votes);
}

int BoostedScheme::query(const SketchSample& s, int u, int v) const {
    auto* bs = dynamic_cast<const BoostedSample*>(&s);
    if (!bs) return SketchScheme::query(s, u, v);
    std::vector<int> votes;
    for (const auto& p : bs->parts) {
        votes.push_back(base_->query(*p, u, v));
        if (2 * std::count(votes.begin(), votes.end(), votes.back()) > copies_) return votes.back();
    }
    return majority_vote(votes);
}

json BoostedScheme::describe() const {
    return {{"kind", "boosted"}, {"copies", copies_}, {"base_width", base_->width()}, {"base", base_->describe()}};
}

SketchPtr boost(SketchPtr base, double delta_target) {
    auto b = std::make_shared<BoostedScheme>(std::move(base), boost_copies(delta_target));
    b->set_target(delta_target);
    return b;
}

NaiveScheme::NaiveScheme(const EqualityScheme& base) : dec_(base.decoder) {
    uint64_t distinct = 0;
    auto labels = canonical_codes(base.labels, &distinct);
    uint64_t range = std::max<uint64_t>(distinct, base.labels.size());
    layout_ = layout_for(labels, bits_for(std::max<uint64_t>(range, 1)));
    for (const auto& l : labels) packed_.push_back(layout_.pack(l));
}

std::unique_ptr<SketchSample> NaiveScheme::sample(uint64_t) const {
    return std::make_unique<FnSample>([this](int v) { return packed_.at(v); });
}

int NaiveScheme::decode(const BitString& a, const BitString& b) const {
    return decode_labels(*dec_, layout_.unpack(a), layout_.unpack(b)) ? 1 : 0;
}

json NaiveScheme::describe() const {
    return {{"kind", "naive"}, {"layout", layout_.to_json()}, {"decoder", decoder_to_json(*dec_)}};
}

std::shared_ptr<NaiveScheme> naive_derandomize(const EqualityScheme& base) { return std::make_shared<NaiveScheme>(base); }

namespace {

class ForestDecoder : public EqDecoder {
   public:
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        uint32_t x0 = x.code(), y0 = y.code();
        while (x.codes_left() && y.codes_left()) {
            uint32_t xj = x.code(), yj = y.code();
            if (eq.eq(x0, yj) || eq.eq(xj, y0)) return true;
        }
        return false;
    }
    std::string kind() const override { return "forest"; }
};

class EquivalenceDecoder : public EqDecoder {
   public:
    bool decode(Reader x, Reader y, const EqOracle& eq) const override { return eq.eq(x.code(), y.code()); }
    std::string kind() const override { return "equivalence"; }
};

}  // namespace

void register_sketch_decoders() {
    register_decoder("forest", [](const json&) -> DecoderPtr { return std::make_shared<ForestDecoder>(); });
    register_decoder("equivalence", [](const json&) -> DecoderPtr { return std::make_shared<EquivalenceDecoder>(); });
}

EqualityScheme forest_labels(const Graph& g) {
    ForestPartition fp = forest_partition(g);
    int a = std::max(1, fp.alpha);
    EqualityScheme sch;
    sch.name = g.name;
    sch.decoder = std::make_shared<ForestDecoder>();
    for (int v = 0; v < g.n(); ++v) {
        Label l;
        l.code(v);
        for (int j = 0; j < a; ++j) l.code(j < fp.alpha && fp.parent[j][v] >= 0 ? fp.parent[j][v] : v);
        sch.labels.push_back(std::move(l));
    }
    return sch;
}

EqualityScheme equivalence_labels(const Graph& g) {
    if (!is_equivalence_graph(g)) throw FamilyViolation("graph is not an equivalence graph (contains induced P3)");
    EqualityScheme sch;
    sch.name = g.name;
    sch.decoder = std::make_shared<EquivalenceDecoder>();
    auto comps = components(g);
    std::vector<int> id(g.n());
    for (const auto& c : comps)
        for (int v : c) id[v] = c.front();
    for (int v = 0; v < g.n(); ++v) {
        Label l;
        l.code(id[v]);
        sch.labels.push_back(std::move(l));
    }
    return sch;
}

BloomForestScheme::BloomForestScheme(const Graph& g) {
    ForestPartition fp = forest_partition(g);
    alpha_ = std::max(1, fp.alpha);
    buckets_ = 6 * alpha_;
    rbits_ = bits_for(buckets_);
    parents_.resize(g.n());
    for (int f = 0; f < fp.alpha; ++f)
        for (int v = 0; v < g.n(); ++v)
            if (fp.parent[f][v] >= 0) parents_[v].push_back(fp.parent[f][v]);
}

namespace {

class BloomSample : public SketchSample {
   public:
    BloomSample(const BloomForestScheme& s, uint64_t seed, const std::vector<std::vector<int>>& parents, int buckets,
                int rbits)
        : s_(s), seed_(seed), parents_(parents), buckets_(buckets), rbits_(rbits) {}
    int r(int v) const { return static_cast<int>(hash3(seed_, kTagBloom, v) % buckets_); }
    bool has(int v, int bucket) const {
        for (int p : parents_[v])
            if (r(p) == bucket) return true;
        return false;
    }
    BitString sketch(int v) const override {
        BitString b;
        b.push_bits(r(v), rbits_);
        BitString f(buckets_);
        for (int p : parents_[v]) f.set(r(p), true);
        b.append(f);
        return b;
    }

   private:
    const BloomForestScheme& s_;
    uint64_t seed_;
    const std::vector<std::vector<int>>& parents_;
    int buckets_, rbits_;
};

}  // namespace

std::unique_ptr<SketchSample> BloomForestScheme::sample(uint64_t seed) const {
    return std::make_unique<BloomSample>(*this, seed, parents_, buckets_, rbits_);
}

int BloomForestScheme::decode(const BitString& a, const BitString& b) const {
    if (static_cast<int>(a.size()) != width() || static_cast<int>(b.size()) != width())
        throw FormatError("sketch width mismatch");
    uint64_t ra = a.get_bits(0, rbits_), rb = b.get_bits(0, rbits_);
    bool hit = (rb < static_cast<uint64_t>(buckets_) && a.get(rbits_ + rb)) ||
               (ra < static_cast<uint64_t>(buckets_) && b.get(rbits_ + ra));
    return hit ? 1 : 0;
}

int BloomForestScheme::query(const SketchSample& s, int u, int v) const {
    auto* bs = dynamic_cast<const BloomSample*>(&s);
    if (!bs) return SketchScheme::query(s, u, v);
    return bs->has(u, bs->r(v)) || bs->has(v, bs->r(u)) ? 1 : 0;
}

json BloomForestScheme::describe() const { return {{"kind", "bloom_forest"}, {"alpha", alpha_}}; }

DerandResult derandomize(SketchPtr sch, const std::function<bool(int, int)>& adj, uint64_t seed, int max_retries) {
    DerandResult res;
    int n = sch->n();
    double target = n >= 2 ? 1.0 / (double(n) * n * n) : 0.5;
    SketchPtr boosted = sch->delta() == 0 ? sch : boost(sch, target);
    res.scheme = boosted;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        uint64_t s = hash3(seed, kTagDerand, attempt);
        auto smp = boosted->sample(s);
        long long bad = 0;
        for (int u = 0; u < n && (attempt == 0 || bad == 0); ++u)
            for (int v = u + 1; v < n; ++v)
                if ((boosted->query(*smp, u, v) == 1) != adj(u, v) || (boosted->query(*smp, v, u) == 1) != adj(u, v)) {
                    ++bad;
                    if (attempt > 0) break;
                }
        if (attempt == 0) res.bad_pairs_first = bad;
        res.attempts = attempt + 1;
        if (bad == 0) {
            res.ok = true;
            res.seed = s;
            for (int v = 0; v < n; ++v) res.labels.push_back(smp->sketch(v));
            return res;
        }
    }
    return res;
}

std::pair<double, double> wilson(long long errors, long long trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    double n = double(trials), p = errors / n;
    double den = 1 + z * z / n;
    double centre = (p + z * z / (2 * n)) / den;
    double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double Rate::lo() const { return wilson(errors, trials).first; }
double Rate::hi() const { return wilson(errors, trials).second; }

ErrorReport evaluate_error(const SketchScheme& sch, const std::function<bool(int, int)>& adj,
                           const std::vector<Edge>& pairs, int trials, uint64_t seed, int jobs) {
    if (trials < 1) throw std::invalid_argument("evaluate_error: trials < 1");
    jobs = std::max(1, jobs);
    std::vector<std::vector<long long>> err(jobs, std::vector<long long>(pairs.size(), 0));
    auto work = [&](int j) {
        for (int t = j; t < trials; t += jobs) {
            auto smp = sch.sample(hash3(seed, kTagEval, t));
            for (size_t i = 0; i < pairs.size(); ++i) {
                auto [u, v] = pairs[i];
                if ((sch.query(*smp, u, v) == 1) != adj(u, v)) ++err[j][i];
            }
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (int j = 0; j < jobs; ++j) th.emplace_back(work, j);
        for (auto& t : th) t.join();
    }
    ErrorReport rep;
    for (size_t i = 0; i < pairs.size(); ++i) {
        long long e = 0;
        for (int j = 0; j < jobs; ++j) e += err[j][i];
        Rate& r = adj(pairs[i].first, pairs[i].second) ? rep.adjacent : rep.nonadjacent;
        r.errors += e;
        r.trials += trials;
        rep.worst_pair = std::max(rep.worst_pair, double(e) / trials);
    }
    return rep;
}

std::vector<Edge> sample_pairs(int n, int count, uint64_t seed, const std::function<bool(int, int)>& adj) {
    // half adjacent, half non-adjacent where available
    std::mt19937_64 rng(seed);
    std::vector<Edge> yes, no;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) (adj(u, v) ? yes : no).emplace_back(u, v);
    std::shuffle(yes.begin(), yes.end(), rng);
    std::shuffle(no.begin(), no.end(), rng);
    std::vector<Edge> out;
    size_t want_yes = std::min(yes.size(), size_t(count / 2));
    size_t want_no = std::min(no.size(), size_t(count) - want_yes);
    want_yes = std::min(yes.size(), size_t(count) - want_no);
    out.insert(out.end(), yes.begin(), yes.begin() + want_yes);
    out.insert(out.end(), no.begin(), no.begin() + want_no);
    return out;
}

bool PugView::adj(uint64_t a, uint64_t b) const {
    BitString x, y;
    x.push_bits(a, c);
    y.push_bits(b, c);
    try {
        return dec(x, y) == 1;
    } catch (const FormatError&) {
        return false;
    }
}

uint64_t PugView::node_of(const BitString& s) { return s.get_bits(0, static_cast<int>(s.size())); }

Graph PugView::to_graph() const {
    if (c > 12) throw std::invalid_argument("PUG too large to materialize");
    std::vector<Edge> es;
    for (uint64_t a = 0; a < nodes(); ++a)
        for (uint64_t b = a + 1; b < nodes(); ++b)
            if (adj(a, b)) es.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return Graph(static_cast<int>(nodes()), es);
}

PugView export_pug(const SketchScheme& sch) {
    if (sch.width() > 24) throw std::invalid_argument("export_pug: width exceeds 24 bits");
    PugView p;
    p.c = sch.width();
    p.dec = [&sch](const BitString& a, const BitString& b) { return sch.decode(a, b); };
    return p;
}

}  // namespace pugkit

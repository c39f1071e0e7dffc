#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pugkit/labels.hpp"
#include "pugkit/structure.hpp"

namespace pugkit {

inline constexpr int kBottom = -1;  // distance sketches: "farther than k"

// Stream tags for hash3
enum : uint64_t {
    kTagCompress = 0x636f6d70,
    kTagBoost = 0x626f6f73,
    kTagBloom = 0x626c6f6d,
    kTagDerand = 0x64657261,
    kTagEval = 0x6576616c,
    kTagProduct = 0x70726f64,
};

class SketchSample {
   public:
    virtual ~SketchSample() = default;
    virtual BitString sketch(int v) const = 0;
};

class SketchScheme {
   public:
    virtual ~SketchScheme() = default;
    virtual int n() const = 0;
    virtual int width() const = 0;
    virtual std::unique_ptr<SketchSample> sample(uint64_t seed) const = 0;
    // 0/1 for adjacency sketches; a distance or kBottom for distance sketches.
    virtual int decode(const BitString& a, const BitString& b) const = 0;
    // Same value as decode(sketch(u), sketch(v)); schemes may shortcut.
    virtual int query(const SketchSample& s, int u, int v) const { return decode(s.sketch(u), s.sketch(v)); }
    virtual json describe() const = 0;
    virtual double delta() const { return 1.0 / 3.0; }
};

using SketchPtr = std::shared_ptr<const SketchScheme>;

// Decoder rebuilt from a sketch file's scheme description (n and samples are not needed to decode).
std::function<int(const BitString&, const BitString&)> sketch_decoder_from_json(const json& j);

// Fixed-width packing of equality labels: optional header with the prefix
// length and code count, prefix padded to S bits, then K codes of cb bits.
struct LabelLayout {
    bool header = false;
    int S = 0, K = 0, cb = 0;
    int width() const;
    BitString pack(const Label& l) const;
    Label unpack(const BitString& b) const;
    json to_json() const;
    static LabelLayout from_json(const json& j);
};

LabelLayout layout_for(const std::vector<Label>& labels, int code_bits);

// Codes replaced by r(t) ~ [3K^2], K the maximum code count.
class CompressedScheme : public SketchScheme {
   public:
    explicit CompressedScheme(const EqualityScheme& base);
    int n() const override { return static_cast<int>(labels_.size()); }
    int width() const override { return layout_.width(); }
    std::unique_ptr<SketchSample> sample(uint64_t seed) const override;
    int decode(const BitString& a, const BitString& b) const override;
    int query(const SketchSample& s, int u, int v) const override;
    json describe() const override;
    double delta() const override { return alphabet_ > 0 ? 1.0 / 3.0 : 0.0; }

    uint64_t alphabet() const { return alphabet_; }
    Label compressed(uint64_t seed, int v) const;
    const std::vector<Label>& labels() const { return labels_; }
    DecoderPtr decoder() const { return dec_; }

   private:
    std::vector<Label> labels_;  // canonical codes
    DecoderPtr dec_;
    uint64_t alphabet_;
    LabelLayout layout_;
};

int boost_copies(double delta);
// Value held by a strict majority; otherwise 0 when every vote is 0/1, else kBottom.
int majority_vote(const std::vector<int>& votes);

class BoostedScheme : public SketchScheme {
   public:
    BoostedScheme(SketchPtr base, int copies);
    int n() const override { return base_->n(); }
    int width() const override { return copies_ * base_->width(); }
    std::unique_ptr<SketchSample> sample(uint64_t seed) const override;
    int decode(const BitString& a, const BitString& b) const override;
    int query(const SketchSample& s, int u, int v) const override;
    json describe() const override;
    int copies() const { return copies_; }
    double delta() const override { return base_->delta() == 0 ? 0.0 : target_; }
    void set_target(double d) { target_ = d; }

   private:
    SketchPtr base_;
    int copies_;
    double target_ = 1.0 / 3.0;
};

SketchPtr boost(SketchPtr base, double delta_target);

// Deterministic sketch: the naive derandomization of an equality scheme.
class NaiveScheme : public SketchScheme {
   public:
    explicit NaiveScheme(const EqualityScheme& base);
    int n() const override { return static_cast<int>(packed_.size()); }
    int width() const override { return layout_.width(); }
    std::unique_ptr<SketchSample> sample(uint64_t seed) const override;
    int decode(const BitString& a, const BitString& b) const override;
    json describe() const override;
    double delta() const override { return 0.0; }
    const std::vector<BitString>& labels() const { return packed_; }

   private:
    std::vector<BitString> packed_;
    DecoderPtr dec_;
    LabelLayout layout_;
};

std::shared_ptr<NaiveScheme> naive_derandomize(const EqualityScheme& base);

// Arboricity labels: codes (x, parent_1(x), ..., parent_a(x)), roots repeat x.
EqualityScheme forest_labels(const Graph& g);
// Equivalence graphs: one code, the clique id.
EqualityScheme equivalence_labels(const Graph& g);

// Bloom-filter sketch for graphs of degeneracy alpha: r(x) ~ [6a] and a 6a-bit
// filter holding r(p) for each parent p of x.
class BloomForestScheme : public SketchScheme {
   public:
    explicit BloomForestScheme(const Graph& g);
    int n() const override { return static_cast<int>(parents_.size()); }
    int width() const override { return rbits_ + buckets_; }
    std::unique_ptr<SketchSample> sample(uint64_t seed) const override;
    int decode(const BitString& a, const BitString& b) const override;
    int query(const SketchSample& s, int u, int v) const override;
    json describe() const override;
    int alpha() const { return alpha_; }

   private:
    int alpha_, buckets_, rbits_;
    std::vector<std::vector<int>> parents_;
};

struct DerandResult {
    bool ok = false;
    int attempts = 0;
    uint64_t seed = 0;          // accepted sample seed
    SketchPtr scheme;           // boosted scheme whose sample is fixed
    std::vector<BitString> labels;
    long long bad_pairs_first = 0;  // violating pairs in the first sample
};

// Boost to 1/n^3, sample, verify every pair, retry with the next derived seed.
DerandResult derandomize(SketchPtr sch, const std::function<bool(int, int)>& adj, uint64_t seed, int max_retries);

struct Rate {
    long long errors = 0, trials = 0;
    double rate() const { return trials ? double(errors) / trials : 0.0; }
    double lo() const;
    double hi() const;
    double halfwidth() const { return (hi() - lo()) / 2; }
};

// Wilson score interval, z = 1.96
std::pair<double, double> wilson(long long errors, long long trials, double z = 1.96);

struct ErrorReport {
    Rate adjacent, nonadjacent;
    double worst_pair = 0;  // largest per-pair error fraction
    Rate overall() const {
        return {adjacent.errors + nonadjacent.errors, adjacent.trials + nonadjacent.trials};
    }
};

// Fresh encoding per trial for every listed pair.
ErrorReport evaluate_error(const SketchScheme& sch, const std::function<bool(int, int)>& adj,
                           const std::vector<Edge>& pairs, int trials, uint64_t seed, int jobs = 1);
std::vector<Edge> sample_pairs(int n, int count, uint64_t seed, const std::function<bool(int, int)>& adj);

// Explicit PUG: nodes {0,1}^c with the decoder as edge relation.
struct PugView {
    int c = 0;
    std::function<int(const BitString&, const BitString&)> dec;
    uint64_t nodes() const { return 1ULL << c; }
    bool adj(uint64_t a, uint64_t b) const;
    static uint64_t node_of(const BitString& s);
    Graph to_graph() const;  // c <= 12
};

PugView export_pug(const SketchScheme& sch);

}  // namespace pugkit

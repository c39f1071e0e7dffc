#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pugkit/sketch.hpp"

namespace pugkit {

// Exact distance-k sketch for a small explicit family: label = (graph id, vertex id),
// decoded against stored BFS tables. Vertex ids are global: offset(g) + v.
class FamilyDistanceScheme : public SketchScheme {
   public:
    FamilyDistanceScheme(std::vector<Graph> family, int k);
    int n() const override { return static_cast<int>(owner_.size()); }
    int width() const override { return gbits_ + vbits_; }
    std::unique_ptr<SketchSample> sample(uint64_t seed) const override;
    int decode(const BitString& a, const BitString& b) const override;
    json describe() const override;
    double delta() const override { return 0.0; }

    int k() const { return k_; }
    int offset(int graph) const { return offsets_[graph]; }
    const std::vector<Graph>& family() const { return family_; }
    BitString label(int v) const;
    static std::shared_ptr<FamilyDistanceScheme> from_json(const json& j);

   private:
    std::vector<Graph> family_;
    int k_, gbits_, vbits_;
    std::vector<int> offsets_, owner_;
    std::vector<std::vector<int>> dist_;  // per graph, row-major n x n
};

struct ProductParams {
    int m = 0, t = 0;
};

// Smallest m with m >= 9k^2, then the smallest t with t >= 9k and mt >= 27(k+1)^2.
ProductParams default_product_params(int k);
bool product_params_ok(int k, const ProductParams& p);

class ProductSample;

// XOR-bucket sketch of a Cartesian product. base_ids[i][v] is the base-scheme vertex of factor i's v.
class ProductScheme : public SketchScheme {
   public:
    ProductScheme(std::vector<int> dims, SketchPtr base, std::vector<std::vector<int>> base_ids, int k,
                  ProductParams p = {});
    int n() const override;
    int width() const override { return p_.m * p_.t * (s_ + 1); }
    std::unique_ptr<SketchSample> sample(uint64_t seed) const override;
    int decode(const BitString& a, const BitString& b) const override;
    json describe() const override;

    int k() const { return k_; }
    int s() const { return s_; }
    ProductParams params() const { return p_; }
    const std::vector<int>& dims() const { return dims_; }
    const SketchScheme& base() const { return *base_; }
    long long vertex_id(const std::vector<int>& coords) const;
    std::vector<int> coords(long long id) const;
    std::unique_ptr<ProductSample> sample_product(uint64_t seed) const;

   private:
    std::vector<int> dims_;
    SketchPtr base_;
    std::vector<std::vector<int>> ids_;
    int k_, s_;
    ProductParams p_;
    friend class ProductSample;
};

// The shared random draws of one encoding; sketches of arbitrary coordinate vectors.
class ProductSample : public SketchSample {
   public:
    BitString sketch(int v) const override;
    BitString sketch_coords(const std::vector<int>& x) const;
    int bucket(int i) const { return b_[i]; }
    int slot(int i, int v) const;
    BitString factor_label(int i, int v) const;

   private:
    friend class ProductScheme;
    const ProductScheme* sch_ = nullptr;
    uint64_t seed_ = 0;
    std::vector<int> b_;
    std::vector<std::unique_ptr<SketchSample>> ell_;
};

using SketchDecoder = std::function<int(const BitString&, const BitString&)>;

// The grid decoder given the base decoder and base width s.
int product_decode(const SketchDecoder& base, int s, int k, ProductParams p, const BitString& a, const BitString& b);

// Family sketch over the factor list (boosted to 1/(10k) only if its error exceeds that).
std::shared_ptr<ProductScheme> product_distance_scheme(const std::vector<Graph>& factors, int k,
                                                       ProductParams p = {});

// Good events for the pair (x, y) in one sample: every differing coordinate decodes
// correctly, the buckets of differing coordinates are distinct, and no slot collides.
bool product_good_events(const ProductScheme& sch, const std::vector<Graph>& factors, const ProductSample& s,
                         const std::vector<int>& x, const std::vector<int>& y);

// Monte Carlo estimate of Pr[|e_R1 + ... + e_Rn| <= k] for R_i ~ [u].
Rate hamming_spread_check(long long u, int n, int k, double delta, long long trials, uint64_t seed);

// k = 1 product sketch read as adjacency: 1 -> 1, 0 and bottom -> 0.
class DistanceAdjacency : public SketchScheme {
   public:
    explicit DistanceAdjacency(std::shared_ptr<const ProductScheme> inner) : inner_(std::move(inner)) {}
    int n() const override { return inner_->n(); }
    int width() const override { return inner_->width(); }
    std::unique_ptr<SketchSample> sample(uint64_t seed) const override { return inner_->sample(seed); }
    int decode(const BitString& a, const BitString& b) const override { return inner_->decode(a, b) == 1 ? 1 : 0; }
    json describe() const override;
    const ProductScheme& inner() const { return *inner_; }

   private:
    std::shared_ptr<const ProductScheme> inner_;
};

std::shared_ptr<DistanceAdjacency> adjacency_from_distance1(const std::vector<Graph>& factors);

// Decoders for "family_distance", "product" and "distance_adjacency" descriptions.
SketchDecoder product_decoder_from_json(const json& j);

}  // namespace pugkit

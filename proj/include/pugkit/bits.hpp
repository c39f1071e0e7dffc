#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pugkit {

// splitmix64 finalizer
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream value for (seed, purpose tag, id).
inline uint64_t hash3(uint64_t seed, uint64_t tag, uint64_t id) {
    return mix64(mix64(mix64(seed) ^ tag) ^ id);
}

// ceil(log2(x)) for x >= 1; 0 for x <= 1.
inline int ceil_log2(uint64_t x) {
    int r = 0;
    while (r < 64 && (1ULL << r) < x) ++r;
    return r;
}

// Bits needed to store values 0..x-1 (at least 1 when x > 1).
inline int bits_for(uint64_t x) { return ceil_log2(x); }

class BitString {
   public:
    BitString() = default;
    explicit BitString(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }
    bool get(size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
    void set(size_t i, bool b) {
        if (b)
            w_[i / 64] |= 1ULL << (i % 64);
        else
            w_[i / 64] &= ~(1ULL << (i % 64));
    }
    void push(bool b) {
        if (n_ % 64 == 0) w_.push_back(0);
        if (b) w_[n_ / 64] |= 1ULL << (n_ % 64);
        ++n_;
    }
    // Most significant bit first.
    void push_bits(uint64_t v, int width) {
        for (int i = width - 1; i >= 0; --i) push((v >> i) & 1);
    }
    uint64_t get_bits(size_t pos, int width) const {
        uint64_t v = 0;
        for (int i = 0; i < width; ++i) v = (v << 1) | (get(pos + i) ? 1 : 0);
        return v;
    }
    void append(const BitString& o) {
        for (size_t i = 0; i < o.n_; ++i) push(o.get(i));
    }
    void resize(size_t n) {
        n_ = n;
        w_.resize((n + 63) / 64, 0);
        if (n % 64) w_.back() &= (1ULL << (n % 64)) - 1;
    }
    BitString slice(size_t pos, size_t len) const {
        BitString r;
        for (size_t i = 0; i < len; ++i) r.push(get(pos + i));
        return r;
    }
    bool operator==(const BitString& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitString& o) const { return !(*this == o); }

    std::string str() const;  // "0110", "-" when empty
    static BitString from_str(const std::string& s);
    std::string hex() const;  // bit i of the string is bit (3 - i % 4) of hex digit i / 4
    static BitString from_hex(const std::string& h, size_t nbits);

   private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace pugkit

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "pugkit/bits.hpp"
#include "pugkit/graph.hpp"

namespace pugkit {

using json = nlohmann::json;

// Prefix bits plus equality codes. Labels of one scheme may differ in length;
// s and k of a scheme are the maxima.
struct Label {
    BitString prefix;
    std::vector<uint64_t> codes;

    void bit(bool b) { prefix.push(b); }
    void bits(uint64_t v, int w) { prefix.push_bits(v, w); }
    void code(uint64_t c) { codes.push_back(c); }
    // Nested label: 16-bit prefix length and 16-bit code count, then the child.
    void sub(const Label& child);
    // Inline concatenation: the child's bits and codes follow directly.
    void append(const Label& o) {
        prefix.append(o.prefix);
        codes.insert(codes.end(), o.codes.begin(), o.codes.end());
    }
    bool operator==(const Label& o) const { return prefix == o.prefix && codes == o.codes; }
};

inline constexpr int kSubHeaderBits = 32;

// Cursor over a (sub)label. Codes are handed out as absolute indices into the
// underlying label so decoders can only compare them through an EqOracle.
class Reader {
   public:
    explicit Reader(const Label& l) : l_(&l), b_(0), be_(l.prefix.size()), c_(0), ce_(l.codes.size()) {}
    Reader(const Label& l, size_t b0, size_t b1, size_t c0, size_t c1) : l_(&l), b_(b0), be_(b1), c_(c0), ce_(c1) {}

    bool bit();
    uint64_t bits(int w);
    uint32_t code();
    Reader sub();
    void skip_sub();
    size_t bits_left() const { return be_ - b_; }
    size_t codes_left() const { return ce_ - c_; }
    size_t code_pos() const { return c_; }

   private:
    const Label* l_;
    size_t b_, be_, c_, ce_;
};

struct EqOracle {
    virtual ~EqOracle() = default;
    // Equality of code ix of the first label and code iy of the second.
    virtual bool eq(uint32_t ix, uint32_t iy) const = 0;
};

struct CodeEq : EqOracle {
    const Label& x;
    const Label& y;
    CodeEq(const Label& a, const Label& b) : x(a), y(b) {}
    bool eq(uint32_t ix, uint32_t iy) const override { return x.codes[ix] == y.codes[iy]; }
};

// Equality answers taken from an explicit k_x by k_y matrix.
struct MatrixEq : EqOracle {
    std::vector<std::vector<bool>> q;
    bool eq(uint32_t ix, uint32_t iy) const override { return q.at(ix).at(iy); }
};

// The same oracle with the roles of the two labels exchanged.
struct SwappedEq : EqOracle {
    const EqOracle& e;
    explicit SwappedEq(const EqOracle& o) : e(o) {}
    bool eq(uint32_t ix, uint32_t iy) const override { return e.eq(iy, ix); }
};

class EqDecoder {
   public:
    virtual ~EqDecoder() = default;
    virtual bool decode(Reader x, Reader y, const EqOracle& eq) const = 0;
    virtual std::string kind() const = 0;
    virtual json params() const { return json::object(); }
};

using DecoderPtr = std::shared_ptr<const EqDecoder>;

json decoder_to_json(const EqDecoder& d);
DecoderPtr decoder_from_json(const json& j);
using DecoderFactory = std::function<DecoderPtr(const json&)>;
void register_decoder(const std::string& kind, DecoderFactory f);

bool decode_labels(const EqDecoder& d, const Label& x, const Label& y);

struct EqualityScheme {
    std::string name = "g";
    std::vector<Label> labels;
    DecoderPtr decoder;

    bool query(int u, int v) const { return decode_labels(*decoder, labels.at(u), labels.at(v)); }
    int s() const;
    int k() const;
    size_t n() const { return labels.size(); }
};

// Exhaustive comparison against an adjacency oracle over all ordered pairs u != v.
// Returns the number of mismatching ordered pairs.
long long count_errors(const EqualityScheme& sch, const std::function<bool(int, int)>& adj);
long long count_errors(const EqualityScheme& sch, const Graph& g);

// Renumber codes to [0, #distinct) by first appearance over all labels.
std::vector<Label> canonical_codes(const std::vector<Label>& labels, uint64_t* distinct = nullptr);

// Decision table over (prefix x, prefix y, Q) when every label has the same
// prefix length s and code count k with 2s + k*k <= 16.
DecoderPtr tabulate(const EqualityScheme& sch);

// Label file:
//   labels <name> s=<s> k=<k> width=<bits>
//   v <id> <prefix-bits|-> <code,code,...|->
//   decoder tree <json>   |   decoder table <json>
void write_labels(std::ostream& out, const EqualityScheme& sch, bool prefer_table = true);
EqualityScheme read_labels(std::istream& in);

// Raw sketches: `v <id> <hex>` lines under a `labels` header; decoder line names the scheme.
struct SketchFile {
    std::string name;
    int width = 0;
    std::vector<BitString> sketches;
    json scheme;
};
void write_sketches(std::ostream& out, const SketchFile& f);
SketchFile read_sketches(std::istream& in);

}  // namespace pugkit

#include "pugkit/labels.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace pugkit {

std::string BitString::str() const {
    if (n_ == 0) return "-";
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitString BitString::from_str(const std::string& s) {
    BitString b;
    if (s == "-") return b;
    for (char c : s) {
        if (c != '0' && c != '1') throw FormatError("bad bit string '" + s + "'");
        b.push(c == '1');
    }
    return b;
}

std::string BitString::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string h;
    for (size_t i = 0; i < n_; i += 4) {
        int d = 0;
        for (size_t j = 0; j < 4; ++j) d = (d << 1) | (i + j < n_ && get(i + j) ? 1 : 0);
        h.push_back(digits[d]);
    }
    if (h.empty()) h = "-";
    return h;
}

BitString BitString::from_hex(const std::string& h, size_t nbits) {
    BitString b;
    if (h == "-") {
        if (nbits) throw FormatError("empty hex for nonzero width");
        return b;
    }
    if (h.size() != (nbits + 3) / 4) throw FormatError("hex length does not match width");
    for (char c : h) {
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (c >= 'a' && c <= 'f')
            d = c - 'a' + 10;
        else
            throw FormatError("bad hex digit");
        for (int j = 3; j >= 0; --j)
            if (b.size() < nbits) b.push((d >> j) & 1);
    }
    return b;
}

void Label::sub(const Label& child) {
    if (child.prefix.size() >= (1u << 16) || child.codes.size() >= (1u << 16))
        throw std::length_error("sub-label too large");
    prefix.push_bits(child.prefix.size(), 16);
    prefix.push_bits(child.codes.size(), 16);
    prefix.append(child.prefix);
    codes.insert(codes.end(), child.codes.begin(), child.codes.end());
}

bool Reader::bit() {
    if (b_ >= be_) throw FormatError("label prefix exhausted");
    return l_->prefix.get(b_++);
}

uint64_t Reader::bits(int w) {
    if (b_ + w > be_) throw FormatError("label prefix exhausted");
    uint64_t v = l_->prefix.get_bits(b_, w);
    b_ += w;
    return v;
}

uint32_t Reader::code() {
    if (c_ >= ce_) throw FormatError("label codes exhausted");
    return static_cast<uint32_t>(c_++);
}

Reader Reader::sub() {
    size_t pl = bits(16), cl = bits(16);
    if (b_ + pl > be_ || c_ + cl > ce_) throw FormatError("sub-label overruns parent");
    Reader r(*l_, b_, b_ + pl, c_, c_ + cl);
    b_ += pl;
    c_ += cl;
    return r;
}

void Reader::skip_sub() { sub(); }

namespace {

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, DecoderFactory>& registry() {
    static std::map<std::string, DecoderFactory> r;
    return r;
}

}  // namespace

void register_decoder(const std::string& kind, DecoderFactory f) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[kind] = std::move(f);
}

void register_builtin_decoders();  // registry.cpp

json decoder_to_json(const EqDecoder& d) {
    json j = d.params();
    j["kind"] = d.kind();
    return j;
}

DecoderPtr decoder_from_json(const json& j) {
    static std::once_flag once;
    std::call_once(once, register_builtin_decoders);
    if (!j.is_object() || !j.contains("kind")) throw FormatError("decoder json lacks 'kind'");
    DecoderFactory f;
    {
        std::lock_guard<std::mutex> lock(registry_mutex());
        auto it = registry().find(j["kind"].get<std::string>());
        if (it == registry().end()) throw FormatError("unknown decoder kind " + j["kind"].dump());
        f = it->second;
    }
    try {
        return f(j);
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad decoder parameters: ") + e.what());
    }
}

bool decode_labels(const EqDecoder& d, const Label& x, const Label& y) {
    CodeEq eq(x, y);
    return d.decode(Reader(x), Reader(y), eq);
}

int EqualityScheme::s() const {
    size_t s = 0;
    for (const auto& l : labels) s = std::max(s, l.prefix.size());
    return static_cast<int>(s);
}

int EqualityScheme::k() const {
    size_t k = 0;
    for (const auto& l : labels) k = std::max(k, l.codes.size());
    return static_cast<int>(k);
}

long long count_errors(const EqualityScheme& sch, const std::function<bool(int, int)>& adj) {
    long long bad = 0;
    int n = static_cast<int>(sch.n());
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && sch.query(u, v) != adj(u, v)) ++bad;
    return bad;
}

long long count_errors(const EqualityScheme& sch, const Graph& g) {
    if (static_cast<int>(sch.n()) != g.n()) throw std::invalid_argument("label count differs from vertex count");
    return count_errors(sch, [&](int u, int v) { return g.adj(u, v); });
}

std::vector<Label> canonical_codes(const std::vector<Label>& labels, uint64_t* distinct) {
    std::unordered_map<uint64_t, uint64_t> ren;
    std::vector<Label> out = labels;
    for (auto& l : out)
        for (auto& c : l.codes) {
            auto it = ren.emplace(c, ren.size()).first;
            c = it->second;
        }
    if (distinct) *distinct = ren.size();
    return out;
}

namespace {

class TableDecoder : public EqDecoder {
   public:
    TableDecoder(int s, int k, BitString table) : s_(s), k_(k), table_(std::move(table)) {}
    bool decode(Reader x, Reader y, const EqOracle& eq) const override {
        uint64_t px = x.bits(s_), py = y.bits(s_);
        uint64_t q = 0;
        std::vector<uint32_t> cx(k_), cy(k_);
        for (int i = 0; i < k_; ++i) cx[i] = x.code();
        for (int i = 0; i < k_; ++i) cy[i] = y.code();
        for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j) q = (q << 1) | (eq.eq(cx[i], cy[j]) ? 1 : 0);
        size_t idx = (((px << s_) | py) << (k_ * k_)) | q;
        return table_.get(idx);
    }
    std::string kind() const override { return "table"; }
    json params() const override { return {{"s", s_}, {"k", k_}, {"bits", table_.hex()}}; }

   private:
    int s_, k_;
    BitString table_;
};

}  // namespace

DecoderPtr tabulate(const EqualityScheme& sch) {
    if (sch.labels.empty()) return nullptr;
    size_t s = sch.labels[0].prefix.size(), k = sch.labels[0].codes.size();
    for (const auto& l : sch.labels)
        if (l.prefix.size() != s || l.codes.size() != k) return nullptr;
    if (2 * s + k * k > 16) return nullptr;
    size_t entries = size_t(1) << (2 * s + k * k);
    BitString table(entries);
    Label lx, ly;
    lx.codes.assign(k, 0);
    ly.codes.assign(k, 0);
    MatrixEq eq;
    eq.q.assign(k, std::vector<bool>(k));
    for (size_t idx = 0; idx < entries; ++idx) {
        uint64_t q = idx & ((size_t(1) << (k * k)) - 1);
        uint64_t py = (idx >> (k * k)) & ((size_t(1) << s) - 1);
        uint64_t px = idx >> (k * k + s);
        lx.prefix = BitString();
        lx.prefix.push_bits(px, static_cast<int>(s));
        ly.prefix = BitString();
        ly.prefix.push_bits(py, static_cast<int>(s));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) eq.q[i][j] = (q >> (k * k - 1 - (i * k + j))) & 1;
        bool out = false;
        try {
            out = sch.decoder->decode(Reader(lx), Reader(ly), eq);
        } catch (const FormatError&) {
            out = false;  // prefix pair that no label produces
        }
        table.set(idx, out);
    }
    return std::make_shared<TableDecoder>(static_cast<int>(s), static_cast<int>(k), table);
}

void register_table_decoder() {
    register_decoder("table", [](const json& j) -> DecoderPtr {
        int s = j.at("s"), k = j.at("k");
        size_t entries = size_t(1) << (2 * s + k * k);
        return std::make_shared<TableDecoder>(s, k, BitString::from_hex(j.at("bits").get<std::string>(), entries));
    });
}

namespace {

std::string join_codes(const std::vector<uint64_t>& c) {
    if (c.empty()) return "-";
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
    }
    return s;
}

std::vector<uint64_t> split_codes(const std::string& s) {
    std::vector<uint64_t> out;
    if (s == "-") return out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw FormatError("bad code list '" + s + "'");
        out.push_back(std::stoull(tok));
    }
    return out;
}

bool content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

struct Header {
    std::string name;
    int s = 0, k = 0, width = 0;
};

Header parse_header(const std::string& line) {
    std::istringstream hs(line);
    std::string tag;
    Header h;
    hs >> tag >> h.name;
    if (tag != "labels" || h.name.empty()) throw FormatError("expected 'labels <name> ...' header");
    std::string kv;
    while (hs >> kv) {
        auto eqp = kv.find('=');
        if (eqp == std::string::npos) throw FormatError("bad header field " + kv);
        std::string key = kv.substr(0, eqp);
        int val;
        try {
            val = std::stoi(kv.substr(eqp + 1));
        } catch (...) {
            throw FormatError("bad header value " + kv);
        }
        if (key == "s")
            h.s = val;
        else if (key == "k")
            h.k = val;
        else if (key == "width")
            h.width = val;
        else
            throw FormatError("unknown header field " + key);
    }
    return h;
}

}  // namespace

void write_labels(std::ostream& out, const EqualityScheme& sch, bool prefer_table) {
    uint64_t distinct = 0;
    canonical_codes(sch.labels, &distinct);
    int width = sch.s() + sch.k() * bits_for(std::max<uint64_t>(distinct, 2));
    out << "labels " << sch.name << " s=" << sch.s() << " k=" << sch.k() << " width=" << width << '\n';
    for (size_t v = 0; v < sch.labels.size(); ++v)
        out << "v " << v << ' ' << sch.labels[v].prefix.str() << ' ' << join_codes(sch.labels[v].codes) << '\n';
    DecoderPtr t = prefer_table ? tabulate(sch) : nullptr;
    if (t)
        out << "decoder table " << decoder_to_json(*t).dump() << '\n';
    else
        out << "decoder tree " << decoder_to_json(*sch.decoder).dump() << '\n';
}

EqualityScheme read_labels(std::istream& in) {
    std::string line;
    if (!content_line(in, line)) throw FormatError("empty label file");
    Header h = parse_header(line);
    EqualityScheme sch;
    sch.name = h.name;
    while (content_line(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            long long id;
            std::string bits, codes, extra;
            if (!(ls >> id >> bits >> codes) || (ls >> extra)) throw FormatError("bad label line: " + line);
            if (id != static_cast<long long>(sch.labels.size())) throw FormatError("label ids must be dense and ordered");
            Label l;
            l.prefix = BitString::from_str(bits);
            l.codes = split_codes(codes);
            sch.labels.push_back(std::move(l));
        } else if (tag == "decoder") {
            std::string form;
            ls >> form;
            if (form != "tree" && form != "table") throw FormatError("decoder must be 'tree' or 'table'");
            std::string rest;
            std::getline(ls, rest);
            json j;
            try {
                j = json::parse(rest);
            } catch (const json::exception& e) {
                throw FormatError(std::string("bad decoder json: ") + e.what());
            }
            sch.decoder = decoder_from_json(j);
        } else {
            throw FormatError("unexpected line: " + line);
        }
    }
    if (!sch.decoder) throw FormatError("label file has no decoder line");
    if (sch.s() != h.s || sch.k() != h.k) throw FormatError("header s/k disagree with labels");
    return sch;
}

void write_sketches(std::ostream& out, const SketchFile& f) {
    out << "labels " << f.name << " s=" << f.width << " k=0 width=" << f.width << '\n';
    for (size_t v = 0; v < f.sketches.size(); ++v) out << "v " << v << ' ' << f.sketches[v].hex() << '\n';
    out << "decoder sketch " << f.scheme.dump() << '\n';
}

SketchFile read_sketches(std::istream& in) {
    std::string line;
    if (!content_line(in, line)) throw FormatError("empty sketch file");
    Header h = parse_header(line);
    SketchFile f;
    f.name = h.name;
    f.width = h.width;
    while (content_line(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            long long id;
            std::string hex, extra;
            if (!(ls >> id >> hex) || (ls >> extra)) throw FormatError("bad sketch line: " + line);
            if (id != static_cast<long long>(f.sketches.size())) throw FormatError("sketch ids must be dense and ordered");
            f.sketches.push_back(BitString::from_hex(hex, f.width));
        } else if (tag == "decoder") {
            std::string form, rest;
            ls >> form;
            std::getline(ls, rest);
            if (form != "sketch") throw FormatError("sketch file needs 'decoder sketch'");
            try {
                f.scheme = json::parse(rest);
            } catch (const json::exception& e) {
                throw FormatError(std::string("bad scheme json: ") + e.what());
            }
        } else {
            throw FormatError("unexpected line: " + line);
        }
    }
    return f;
}

}  // namespace pugkit

#include "pugkit/product.hpp"
#include "pugkit/sketch.hpp"

namespace pugkit {

void register_table_decoder();
void register_sketch_decoders();
void register_combinator_decoders();
void register_bipartite_decoders();
void register_geometric_decoders();
void register_twinwidth_decoders();
void register_communication_decoders();

void register_builtin_decoders() {
    register_table_decoder();
    register_sketch_decoders();
    register_combinator_decoders();
    register_bipartite_decoders();
    register_geometric_decoders();
    register_twinwidth_decoders();
    register_communication_decoders();
}

std::function<int(const BitString&, const BitString&)> sketch_decoder_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw FormatError("sketch scheme json lacks 'kind'");
    try {
        std::string kind = j.at("kind");
        if (kind == "compressed" || kind == "naive") {
            LabelLayout lay = LabelLayout::from_json(j.at("layout"));
            DecoderPtr dec = decoder_from_json(j.at("decoder"));
            return [lay, dec](const BitString& a, const BitString& b) {
                return decode_labels(*dec, lay.unpack(a), lay.unpack(b)) ? 1 : 0;
            };
        }
        if (kind == "boosted") {
            int copies = j.at("copies"), w = j.at("base_width");
            auto base = sketch_decoder_from_json(j.at("base"));
            return [copies, w, base](const BitString& a, const BitString& b) {
                if (a.size() != size_t(copies) * w || b.size() != size_t(copies) * w)
                    throw FormatError("sketch width mismatch");
                std::vector<int> votes;
                for (int i = 0; i < copies; ++i) votes.push_back(base(a.slice(size_t(i) * w, w), b.slice(size_t(i) * w, w)));
                return majority_vote(votes);
            };
        }
        if (kind == "bloom_forest") {
            int alpha = j.at("alpha");
            int buckets = 6 * alpha, rbits = bits_for(buckets);
            return [buckets, rbits](const BitString& a, const BitString& b) {
                if (a.size() != size_t(rbits + buckets) || b.size() != size_t(rbits + buckets))
                    throw FormatError("sketch width mismatch");
                uint64_t ra = a.get_bits(0, rbits), rb = b.get_bits(0, rbits);
                bool hit = (rb < uint64_t(buckets) && a.get(rbits + rb)) || (ra < uint64_t(buckets) && b.get(rbits + ra));
                return hit ? 1 : 0;
            };
        }
        return product_decoder_from_json(j);
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad sketch description: ") + e.what());
    }
}

}  // namespace pugkit

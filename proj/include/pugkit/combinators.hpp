#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pugkit/labels.hpp"
#include "pugkit/structure.hpp"

namespace pugkit {

// Bounded vertex addition. `base` labels G[V \ W] in increasing vertex order.
EqualityScheme add_vertices_scheme(const Graph& g, const std::vector<int>& W, int c, const EqualityScheme& base);

// Bounded complementation: part[v] in [0, k), flip symmetric k x k.
EqualityScheme complementation_scheme(const EqualityScheme& base, const std::vector<int>& part, int k,
                                      const std::vector<std::vector<bool>>& flip);
Graph apply_complementation(const Graph& h, const std::vector<int>& part, const std::vector<std::vector<bool>>& flip);

// Twin reduction: `quotient_labeler` labels G[T] for T the class representatives.
struct TwinReduced {
    EqualityScheme scheme;
    TwinPartition twins;
    Induced quotient;
};
TwinReduced twin_reduce_scheme(const Graph& g, bool true_twins,
                               const std::function<EqualityScheme(const Graph&)>& quotient_labeler);

// Scheme for G -> scheme for bip(G) (vertex ids as in bip_transform(g).to_graph()).
EqualityScheme bip_lift(const EqualityScheme& base);
// Scheme for bip(G) on 2n vertices -> scheme for G on n vertices.
EqualityScheme bip_lower(const EqualityScheme& bip_scheme, int n);

// Decomposition trees over a colored bipartite graph. Vertices are original ids.
struct DecompNode {
    char tag = 'L';  // 'L', 'D', 'C' (co-component node), 'P'
    std::vector<int> xs, ys;
    std::vector<int> children;
    std::vector<std::vector<int>> xparts, yparts;  // P: children ordered i * |yparts| + j
};

struct DecompositionTree {
    std::vector<DecompNode> nodes;  // nodes[0] is the root
    int depth() const;
    int max_parts() const;
    std::string str() const;
    static DecompositionTree parse(const std::string& text);
};

// Structural check: D children are the components, C children the co-components,
// P children the cross pairs of two partitions, L nodes pass leaf_ok.
bool check_decomposition(const BiGraph& g, const DecompositionTree& t,
                         const std::function<bool(const BiGraph&)>& leaf_ok, std::string* why = nullptr);

struct PartitionPair {
    std::vector<std::vector<int>> xparts, yparts;  // local ids of the node's graph
};

// Generic builder: leaf test, then D, then C (if allowed), then P via `split`.
DecompositionTree build_decomposition(const BiGraph& g, const std::function<bool(const BiGraph&)>& is_leaf,
                                      const std::function<PartitionPair(const BiGraph&)>& split, bool use_co,
                                      int max_depth);

struct LeafScheme {
    DecoderPtr decoder;
    // Labels for the leaf graph's vertices in to_graph() order.
    std::function<std::vector<Label>(const BiGraph&)> labels;
};

// Labels for g.to_graph() vertex ids.
EqualityScheme assemble_decomposition_labels(const BiGraph& g, const DecompositionTree& t, const LeafScheme& leaf);

void register_combinator_decoders();

}  // namespace pugkit

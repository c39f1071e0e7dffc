#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pugkit/combinators.hpp"

namespace pugkit {

// A bounded search gave up before finding what it was looking for.
struct SearchLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Side bit plus block id. Vertex ids as in g.to_graph().
EqualityScheme bipartite_equivalence_labels(const BiGraph& g);

// Prefix-only labels (side bit, threshold index of w = bits_for(k + 1) bits);
// x ~ y iff index(x) > index(y).
EqualityScheme chain_graph_labels(const BiGraph& g, int k);
std::vector<Label> chain_label_list(const BiGraph& g, int k);
// The threshold indices alone, X then Y.
std::vector<int> chain_values(const BiGraph& g, int k);
DecoderPtr chain_decoder(int k);

bool is_one_sided_tp_free(const BiGraph& g, int p);
bool is_one_sided_fpp_free(const BiGraph& g, int p);
bool is_p7_free(const BiGraph& g);

struct TpStructure {
    int m = 0;
    std::vector<std::vector<int>> A;  // A[0..m]
    std::vector<std::vector<int>> B;  // B[1..m+1]; B[0] unused
    std::vector<int> anchors;         // a_1..a_m
    std::vector<int> xpart, ypart;    // vertex -> index
    std::string str() const;
};

// The iterative procedure with ties broken by lowest id; throws FamilyViolation
// if conditions (1)-(3) fail for the given p.
TpStructure tp_structure(const BiGraph& g, int k, int p);
bool check_tp_structure(const BiGraph& g, const TpStructure& s, int k, int p, std::string* why = nullptr);

// x_i ~ Y_j iff j <= i
struct ZWitness {
    std::vector<int> x;
    std::vector<std::vector<int>> y;
};
ZWitness z_witness(const BiGraph& g, const TpStructure& s, int q);
bool verify_z_witness(const BiGraph& g, const ZWitness& w, int s);

// k = qp + 1; FamilyViolation when m >= q.
EqualityScheme tp_free_labels(const BiGraph& g, int p, int q);
LeafScheme tp_leaf(int p, int q);

// k = (q + 1)p; leaves one-sided T_k-free, depth at most 2q.
DecompositionTree fpp_decomposition(const BiGraph& g, int p, int q);
EqualityScheme fpp_labels(const BiGraph& g, int p, int q, DecompositionTree* tree = nullptr);

// X = X1 u X2, Y = Y1 u Y2 with |Y2| <= 1; G[X1,Y1] and bc(G[X2,Y1]) one-sided F_pp-free.
struct AllenPartition {
    std::vector<bool> in_x2;
    int y2 = -1;
};
bool check_allen_partition(const BiGraph& g, const AllenPartition& a, int p);
// Exact: every choice of Y2, then a 2-SAT over the X split.
std::optional<AllenPartition> allen_partition(const BiGraph& g, int p);
EqualityScheme fstar_labels(const BiGraph& g, int p, int q, const AllenPartition* declared = nullptr);

// Parts of one side: A_1..A_k, C_1..C_k; other side B_1..B_k, D_1..D_k (index 0 = set 1).
// `flipped`: A and C live in Y. `complemented`: the decomposition is of bc(G).
struct ChainDecomposition {
    int k = 0;
    bool flipped = false, complemented = false;
    std::vector<std::vector<int>> A, B, C, D;
    std::string str() const;
    static ChainDecomposition parse(const std::string& text);
};

bool verify_chain_decomposition(const BiGraph& g, const ChainDecomposition& cd, std::string* why = nullptr);
// Bounded exhaustive assignment over k = 2..k_max, both orientations, G then bc(G).
// `accept` may reject a valid decomposition to continue the search.
std::optional<ChainDecomposition> chain_decomposition_search(
    const BiGraph& g, int k_max, const std::function<bool(const ChainDecomposition&)>& accept = {},
    long long budget = 2'000'000);

// P-node partition from a chain decomposition (with the split of B_1 / D_1 when k = 2).
PartitionPair chain_decomposition_parts(const BiGraph& g, const ChainDecomposition& cd);

LeafScheme constant_leaf();
DecompositionTree p7_decomposition(const BiGraph& g, int c);
EqualityScheme p7_labels(const BiGraph& g, int c, DecompositionTree* tree = nullptr);
// (ch, ch of bc) strictly decreases from every node to its descendants three levels down.
bool check_p7_tree(const BiGraph& g, const DecompositionTree& t, std::string* why = nullptr);

void register_bipartite_decoders();

namespace gen {
// Block structure with at most (p - 1) / 2 removals and forward edges per X vertex.
BiGraph tp_free_instance(int blocks, int block_size, int per_block, int p, uint64_t seed);
// Nested hubs over disjoint T_p-free pieces; one-sided F_pp-free.
BiGraph fpp_free_instance(int levels, int fanout, int p, uint64_t seed);
// F_pp-free part on (X1, Y1), complement of one on (X2, Y1), one extra Y vertex.
BiGraph fstar_free_instance(int levels, int p, uint64_t seed);
// Random instance admitting a k-chain decomposition (returned in *cd).
BiGraph chain_decomposed(int k, int max_set, uint64_t seed, ChainDecomposition* cd = nullptr);
// Unions and bipartite complements of chain graphs; P7-free by construction.
BiGraph p7_free_instance(int n, uint64_t seed);
}  // namespace gen

}  // namespace pugkit

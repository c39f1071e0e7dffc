#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pugkit/labels.hpp"
#include "pugkit/structure.hpp"

namespace pugkit {

// Node of an equality-based communication tree over inputs [n].
struct ProtocolNode {
    enum class Kind { Leaf, Comm, Eq };
    Kind kind = Kind::Leaf;
    bool out = false;            // leaf value
    bool bob = false;            // comm node: true for B
    std::vector<uint64_t> a, b;  // eq: a(x), b(y); comm: a holds m (0/1)
    int child[2] = {-1, -1};
};

// Root is nodes[0].
//   protocol <n>
//   eq <a-array> <b-array>
//   comm A|B <m-array>
//   leaf 0|1
// Nodes in preorder, the 0-child's subtree first. Arrays are comma separated.
struct EqProtocolTree {
    int n = 0;
    std::vector<ProtocolNode> nodes;

    int depth() const;
    bool equality_only() const;
    void validate() const;  // FormatError on malformed trees
    std::string str() const;
    static EqProtocolTree parse(const std::string& text);
};

struct ProtocolRun {
    bool out = false;
    std::vector<bool> transcript;  // one bit per inner node visited
};

ProtocolRun run_protocol(const EqProtocolTree& t, int x, int y);
// table[x][y] = T(x, y)
std::vector<std::vector<bool>> protocol_table(const EqProtocolTree& t);

// Comm nodes (A, m) -> (m, 1), (B, m) -> (1, m). Same shape, same outputs.
EqProtocolTree normalize_to_equality_nodes(const EqProtocolTree& t);

// Alice sends the index of her (prefix, code count) class, k^2 equality nodes build Q,
// and Bob answers with the decoder's output when it depends on his own prefix.
// Depth is s + k^2 for uniform schemes whose output needs no answer from Bob.
// irreflexive adds a leading identity test so that T(x, x) = 0.
EqProtocolTree labels_to_protocol(const EqualityScheme& sch, bool irreflexive = false);

// Alice sends x, Bob answers adj(x, y). T(x, x) = 0.
EqProtocolTree adjacency_protocol(const Graph& g);

// Pads every leaf to the given depth with constant equality nodes. Equality nodes only.
EqProtocolTree complete_tree(const EqProtocolTree& t, int depth);

// Labels on bip(g) (ids of bip_transform(g).to_graph()): x gets a_1(x)..a_t(x), 0 and
// y gets b_1(y)..b_t(y), 1, t = 2^d - 1 the inner nodes of the completed tree.
// The tree must output adj(x, y) on every pair, 0 on x = y; otherwise invalid_argument.
EqualityScheme protocol_to_diagonal_labels(const EqProtocolTree& t, const Graph& g);

// Slice i holds the pairs whose i-th colour bit is 1; eta is indexed by sum of kappa_i << i.
struct EquivalenceInterpretation {
    int t = 0;
    std::vector<bool> eta;
    std::vector<BiGraph> slices;
};

bool verify_equivalence_interpretation(const BiGraph& g, const EquivalenceInterpretation& in, std::string* why = nullptr);
// Smallest t <= t_max with an interpretation; nx + ny <= 10, t_max <= 2.
std::optional<EquivalenceInterpretation> search_interpretation(const BiGraph& g, int t_max);
// kappa_i(x, y) = Eq(q_i(x), q_i(y)) from diagonal labels of bip(g); at most 20 codes.
EquivalenceInterpretation interpretation_from_diagonal(const EqualityScheme& diag, int n);

// Protocol for GT on [k] from an adjacency protocol and a witness a_i ~ b_j iff i <= j.
EqProtocolTree gt_from_adjacency(const EqProtocolTree& t, const ChainWitness& w);

void register_communication_decoders();

namespace gen {
// Random mixed tree of the given depth; message values drawn from [n].
EqProtocolTree random_protocol(int n, int depth, uint64_t seed);
}  // namespace gen

}  // namespace pugkit

#pragma once

#include <string>
#include <vector>

#include "pugkit/labels.hpp"

namespace pugkit {

using Partition = std::vector<std::vector<int>>;

// P_1 = {V}, ..., P_m = singletons; each step splits one part in two.
struct UncontractionSequence {
    std::vector<Partition> steps;
};

// Largest number of impure partners of a part over all steps.
// Malformed sequences throw std::invalid_argument.
int verify_width(const Graph& g, const UncontractionSequence& seq);
// Impure partners of the worst part of one partition.
int partition_width(const Graph& g, const Partition& p);

// Exact twin-width by bottleneck search over partitions (n <= 8).
int twin_width_exact(const Graph& g, UncontractionSequence* best = nullptr);
// Minimum of verify_width over every uncontraction sequence (n <= 7).
int min_width_by_enumeration(const Graph& g);

// Bipartite graph with a total order on its vertices (ids as in g.to_graph()).
struct OrderedBiGraph {
    BiGraph g;
    std::vector<int> order;
};

// Parts must be side-pure and convex in the order restricted to their side;
// the first step is {X, Y}.
int verify_convex_width(const OrderedBiGraph& og, const UncontractionSequence& seq);
// Exact convex twin-width over interval partitions of both sides (n <= 20).
int convex_twin_width_exact(const OrderedBiGraph& og, UncontractionSequence* best = nullptr);

// Negate the edges on A x B; A holds X ids, B holds Y ids (to_graph numbering).
struct Flip {
    std::vector<int> A, B;
};

// Sequential flips. f[v][j] is 1 iff v lies in the j-th flipped set.
BiGraph apply_flips(const BiGraph& g, const std::vector<Flip>& flips, std::vector<std::vector<bool>>* f = nullptr);

// Quotient on division parts: vertex i of the result is part i; parts adjacent iff some cross pair is.
Graph quotient_graph(const BiGraph& g, const Partition& division);

struct Star {
    int center = -1;
    std::vector<int> leaves;  // part indices
};

// Ids are those of the whole graph; the node's vertex set is the union of the division.
//   order <ids>
//   flip <X ids> | <Y ids>
//   part <ids>                 (parts numbered from 0 in file order)
//   uset <part indices>        (forests numbered from 0 in file order)
//   star <forest> <center part> <leaf parts>
struct TwCertificate {
    std::vector<int> order;
    std::vector<Flip> flips;
    Partition division;
    std::vector<std::vector<int>> usets;
    std::vector<std::vector<Star>> stars;  // per forest

    int q() const { return static_cast<int>(flips.size()); }
    int r() const { return static_cast<int>(usets.size()); }
    std::vector<int> vertices() const;  // sorted
    std::string str() const;
    static TwCertificate parse(const std::string& text);
};

// Checks the division, the flips, that every edge of H = (flipped G)/D lies in exactly one
// uset, that each uset slice is the listed star forest, and (when the node has at most
// qch_limit vertices) that every star's quasi-chain number is below the node's.
bool verify_certificate(const BiGraph& g, const TwCertificate& c, std::string* why = nullptr, Graph* H = nullptr,
                        int qch_limit = 16);

// Preorder node list. A certificate node's children are its stars, forest by forest.
struct TwCertTree {
    struct Node {
        bool leaf = true;
        TwCertificate cert;
    };
    std::vector<Node> nodes;
    int depth() const;
    std::string str() const;
    static TwCertTree parse(const std::string& text);
};

// Every certificate verifies on its node, leaves are P4-free, the root covers g.
bool verify_tree(const BiGraph& g, const TwCertTree& t, std::string* why = nullptr, int qch_limit = 16);

// Labels for g.to_graph() ids; FamilyViolation when the tree does not verify.
EqualityScheme tw_labels(const BiGraph& g, const TwCertTree& t, int qch_limit = 16);

void register_twinwidth_decoders();

namespace gen {
// Random bipartite graph built together with a certificate tree of the given depth.
BiGraph tw_certified(int nx, int ny, int depth, uint64_t seed, TwCertTree* tree);
}  // namespace gen

}  // namespace pugkit

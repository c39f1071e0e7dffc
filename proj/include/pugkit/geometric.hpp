#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pugkit/labels.hpp"
#include "pugkit/structure.hpp"

namespace pugkit {

struct IntervalRealization {
    std::string name = "g";
    std::vector<Interval> iv;
};

// Adjacent iff the points are comparable in the product order.
struct PermutationRealization {
    std::string name = "g";
    std::vector<std::pair<double, double>> pts;
};

// `intervals <name>` then `i <id> <l> <r>`; `points <name>` then `p <id> <x> <y>`.
IntervalRealization read_intervals(std::istream& in);
void write_intervals(std::ostream& out, const IntervalRealization& r);
PermutationRealization read_points(std::istream& in);
void write_points(std::ostream& out, const PermutationRealization& r);

Graph permutation_graph(const PermutationRealization& r);
// Distinct integer coordinates per axis, same comparability graph. Repeated points throw FormatError.
PermutationRealization normalize_points(const PermutationRealization& r);

// Throw FormatError when the realization's intersection/comparability graph differs from g.
void validate_realization(const Graph& g, const IntervalRealization& r);
void validate_realization(const Graph& g, const PermutationRealization& r);

// True-twin reduction, clique bound 4(k+1)^2 on the quotient, forest labels.
EqualityScheme interval_scheme(const Graph& g, const IntervalRealization& r, int k, int* quotient_clique = nullptr);

struct PermutationPartition {
    bool mirrored = false;                 // parts built on the complement; non-J pairs are bicliques
    std::vector<std::vector<int>> parts;   // vertex ids of the input realization
    std::vector<std::vector<int>> J;       // per part, indices of the parts it meets non-uniformly
    std::vector<int> a, b;                 // anchor sequences a(1).., b(1)..
};

// Requires the graph and its complement to be connected (std::invalid_argument otherwise).
PermutationPartition permutation_decompose(const PermutationRealization& r);

struct PermutationTreeStats {
    int depth = 0, nodes = 0, leaves = 0, pnodes = 0, mirrored = 0;
};

// FamilyViolation when the tree gets deeper than 2(2k + 1) or a chain part exceeds k.
EqualityScheme permutation_labels(const PermutationRealization& r, int k, PermutationTreeStats* stats = nullptr);

void register_geometric_decoders();

namespace gen {
IntervalRealization random_intervals(int n, int span, int max_len, uint64_t seed);
// Intervals drawn from a few lengths and anchor points; many true twins, small chain number.
IntervalRealization stable_intervals(int n, int anchors, uint64_t seed);
PermutationRealization random_permutation(int n, uint64_t seed);
// Points near a few increasing and decreasing runs, which keeps the chain number small.
PermutationRealization stable_permutation(int n, int runs, uint64_t seed);
}  // namespace gen

}  // namespace pugkit

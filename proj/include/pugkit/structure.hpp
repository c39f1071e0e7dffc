#pragma once

#include <string>
#include <vector>

#include "pugkit/graph.hpp"

namespace pugkit {

// a_i ~ b_j iff i <= j
struct ChainWitness {
    std::vector<int> a, b;
    int k() const { return static_cast<int>(a.size()); }
    std::string str() const;  // "chain k: a=1,2 b=3,4"
    static ChainWitness parse(const std::string& s);
};

bool verify_chain_witness(const Graph& g, const ChainWitness& w);

struct ChainResult {
    int k = 0;
    bool exact = true;  // false: k == cap + 1 is only a lower bound
    ChainWitness witness;
};

// Branch and bound over ordered pairs; stops once a witness of size cap + 1 exists.
ChainResult chain_number(const Graph& g, int cap);
inline ChainResult chain_number(const BiGraph& g, int cap) { return chain_number(g.to_graph(), cap); }

// Exhaustive over sequences with repetitions; result capped at cap + 1.
int quasi_chain_number(const BiGraph& g, int cap);

struct TwinPartition {
    bool true_twins = true;
    std::vector<std::vector<int>> classes;  // ordered by smallest member
    std::vector<int> cls;                   // vertex -> class index
    std::vector<int> rep() const;           // class -> smallest member
};

TwinPartition twin_partition(const Graph& g, bool true_twins);

struct ForestPartition {
    int alpha = 0;
    std::vector<int> order;                 // peeling order
    std::vector<std::vector<int>> parent;   // parent[f][v], -1 if none
};

int degeneracy(const Graph& g);
// Peel a minimum-degree vertex (lowest id on ties); a vertex's parents are its
// neighbours still present when it is peeled, one per forest slot.
ForestPartition forest_partition(const Graph& g);
bool check_forest_partition(const Graph& g, const ForestPartition& fp);

struct Interval {
    double l = 0, r = 0;
};

Graph interval_graph(const std::vector<Interval>& iv);
int interval_clique_number(const std::vector<Interval>& iv);

// Cheap recognizers.
bool is_equivalence_graph(const Graph& g);              // P3-free
bool is_bipartite_equivalence(const BiGraph& g);        // P4-free
bool is_chain_graph(const BiGraph& g);                  // 2K2-free
bool is_biclique(const BiGraph& g);
bool is_cobiclique(const BiGraph& g);
bool is_connected(const Graph& g);
bool is_left_connected(const BiGraph& g);

}  // namespace pugkit

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pugkit {

// Input does not belong to the family a scheme was asked to handle.
struct FamilyViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file or text input.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Edge = std::pair<int, int>;

inline constexpr int kBitsetLimit = 4096;
inline constexpr long long kDefaultVertexCap = 1LL << 22;

class Graph {
   public:
    Graph() = default;
    explicit Graph(int n);
    // Duplicate edges are merged; self-loops and out-of-range ids throw.
    Graph(int n, const std::vector<Edge>& edges);

    int n() const { return n_; }
    long long m() const { return m_; }
    const std::vector<int>& nbrs(int v) const { return adj_[v]; }
    int deg(int v) const { return static_cast<int>(adj_[v].size()); }
    bool adj(int u, int v) const;
    std::vector<Edge> edges() const;  // u < v, sorted

    std::string name = "g";

   private:
    int n_ = 0;
    long long m_ = 0;
    int words_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<uint64_t> bits_;
};

// Colored bipartite graph (X, Y, E). X ids 0..nx-1, Y ids 0..ny-1.
class BiGraph {
   public:
    BiGraph() = default;
    BiGraph(int nx, int ny);
    BiGraph(int nx, int ny, const std::vector<Edge>& edges);  // (x, y) pairs

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int n() const { return nx_ + ny_; }
    long long m() const { return m_; }
    const std::vector<int>& xnbrs(int x) const { return xadj_[x]; }
    const std::vector<int>& ynbrs(int y) const { return yadj_[y]; }
    bool adj(int x, int y) const;
    std::vector<Edge> edges() const;

    // Uncolored view: X keeps ids, Y vertex y becomes nx + y.
    Graph to_graph() const;

    std::string name = "g";

   private:
    int nx_ = 0, ny_ = 0;
    long long m_ = 0;
    std::vector<std::vector<int>> xadj_, yadj_;
    std::vector<uint64_t> bits_;
};

struct Induced {
    Graph g;
    std::vector<int> orig;  // new id -> old id
};

struct InducedBi {
    BiGraph g;
    std::vector<int> xorig, yorig;
};

Induced induced_subgraph(const Graph& g, const std::vector<int>& vs);
InducedBi induced_subgraph(const BiGraph& g, const std::vector<int>& xs, const std::vector<int>& ys);

Graph complement(const Graph& g);
BiGraph bipartite_complement(const BiGraph& g);
// bip(G): X = V, Y = copy of V, (x, y') iff xy in E.
BiGraph bip_transform(const Graph& g);
// Colored view of a graph given a side per vertex (false = X). Throws if an edge is monochromatic.
BiGraph to_bigraph(const Graph& g, const std::vector<bool>& side, std::vector<int>* xid = nullptr,
                   std::vector<int>* yid = nullptr);
// 2-colouring by BFS, lowest id coloured X in each component; empty if not bipartite.
std::vector<bool> two_coloring(const Graph& g);

std::vector<std::vector<int>> components(const Graph& g);
std::vector<std::vector<int>> components(const BiGraph& g);  // ids: X as-is, Y as nx + y
std::vector<int> bfs_distances(const Graph& g, int src);

struct Product {
    Graph g;
    std::vector<int> dims;
    long long id(const std::vector<int>& coords) const;
    std::vector<int> coords(long long id) const;
};

Product cartesian_product(const std::vector<Graph>& gs, long long cap = kDefaultVertexCap);
Graph strong_product(const Graph& a, const Graph& b, long long cap = kDefaultVertexCap);
Graph direct_product(const Graph& a, const Graph& b, long long cap = kDefaultVertexCap);
Graph lexicographic_product(const Graph& a, const Graph& b, long long cap = kDefaultVertexCap);

namespace gen {
Graph path(int n);
Graph cycle(int n);
Graph complete(int n);
Graph edgeless(int n);
Graph hypercube(int d);
Graph star(int leaves);
// a_i = i - 1, b_j = k + j - 1 (1-based i, j).
Graph half_graph(int k);
Graph threshold(int k);    // half graph plus clique on A
Graph co_half_graph(int k);  // threshold plus clique on B
BiGraph half_bigraph(int k);
BiGraph biclique(int a, int b);
BiGraph z_graph(int q, int s);
BiGraph fstar(int p, int q);  // X = {a, b}; Y = a_1..a_p, c, b_1..b_q, d
BiGraph f_graph(int p, int q);
BiGraph t_graph(int p);
BiGraph s123();
BiGraph p7();
Graph equivalence(const std::vector<int>& class_sizes);
BiGraph bipartite_equivalence(const std::vector<std::pair<int, int>>& blocks);
// profile[i] = number of Y vertices adjacent to x_i, neighbourhoods nested as prefixes of Y.
BiGraph chain_graph(int ny, const std::vector<int>& profile);
Graph gnp(int n, double p, uint64_t seed);
BiGraph random_bigraph(int nx, int ny, double p, uint64_t seed);
Graph random_tree(int n, uint64_t seed);
Graph random_forest(int n, int trees, uint64_t seed);
}  // namespace gen

// Text format: `graph <name> <n>` / `bigraph <name> <nx> <ny>`, then `e u v` lines.
struct GraphDoc {
    bool bipartite = false;
    Graph g;
    BiGraph bg;
    const std::string& name() const { return bipartite ? bg.name : g.name; }
};

GraphDoc read_graph(std::istream& in);
GraphDoc read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph(std::ostream& out, const BiGraph& g);

}  // namespace pugkit

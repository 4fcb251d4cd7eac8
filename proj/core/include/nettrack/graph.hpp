#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nettrack/matrix.hpp"

namespace nettrack {

/// Undirected simple graph on vertices 0..N-1. Edges are stored (i, j)
/// with i < j, sorted, without duplicates; no self-loops. Neighborhoods
/// used elsewhere always include the vertex itself.
struct Graph {
    int N = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Every vertex adjacent to its m nearest on each side around the ring.
/// Requires N >= 2 and 1 <= m <= N-1.
Graph circulant(int N, int m);

Graph complete(int N);

/// Builds a graph from an explicit edge list; vertex count is given
/// explicitly so isolated trailing vertices are representable.
Graph from_edges(int N, std::vector<std::pair<int, int>> edges);

/// Parses a graph grammar string:
///   circulant:N=<n>,m=<m>
///   complete:N=<n>
///   edges:<i-j,...>          (N inferred as max vertex id + 1)
Graph parse_graph(const std::string& s);

std::string format_graph(const Graph& g);

Matrix adjacency(const Graph& g);

/// L = D - Adj; symmetric PSD with zero row sums.
Matrix laplacian(const Graph& g);

bool has_edge(const Graph& g, int i, int j);

std::vector<int> degrees(const Graph& g);

/// Closed neighborhoods {i} ∪ {j : (i,j) in E}, each sorted ascending.
std::vector<std::vector<int>> closed_neighborhoods(const Graph& g);

bool is_connected(const Graph& g);

/// lambda_2 of the Laplacian; positive exactly when the graph is connected.
double algebraic_connectivity(const Graph& g);

/// Checks a candidate relabeling perm (new label of vertex v is perm[v])
/// carries g exactly onto circulant(g.N, m).
bool verify_circulant_isomorphism(const Graph& g, int m, const std::vector<int>& perm);

/// Searches for a relabeling onto circulant(N, m) by adjacency-preserving
/// backtracking. Exhaustive search is limited to N <= 10; beyond that a
/// candidate permutation must be supplied for verification instead.
std::optional<std::vector<int>> circulant_isomorphism(const Graph& g, int m);

struct CycleDecomposition {
    std::vector<int> cycle_order;  // simple N-cycle through every vertex
    Matrix L_cycle;                // Laplacian of the cycle edges
    Matrix L1;                     // Laplacian of the remaining edges; L = L_cycle + L1 exactly
};

/// Splits the Laplacian along a supplied Hamiltonian cycle. Every
/// consecutive pair in cycle_order (wrapping around) must be an edge.
CycleDecomposition cycle_decompose(const Graph& g, const std::vector<int>& cycle_order);

}  // namespace nettrack

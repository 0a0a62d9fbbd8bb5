#pragma once

#include "gembed/types.hpp"

#include <vector>

namespace gembed {

// Undirected weighted graph in CSR form. The adjacency is stored fully
// symmetric (both triangles), with zero diagonal and nonnegative weights.
struct SparseGraph {
    SpMat adjacency;
    Vec degrees;

    Index n_vertices() const { return adjacency.rows(); }
    Index n_edges() const { return adjacency.nonZeros() / 2; }
};

enum class Weighting { binary, gaussian };

enum class LaplacianVariant { combinatorial, normalized };

struct LaplacianOperator {
    LaplacianVariant variant = LaplacianVariant::combinatorial;
    SpMat matrix;
    double lambda_max_bound = 0.0;

    Index size() const { return matrix.rows(); }
};

// Builds a graph from undirected edges (i, j, w); each pair is stored in both
// triangles. Duplicate edges are summed, self loops rejected.
SparseGraph graph_from_edges(Index n,
                             const std::vector<Eigen::Triplet<double>>& edges);

// kNN similarity graph: every vertex is linked to its k nearest Euclidean
// neighbors, ties broken toward the lower vertex index, and the directed
// selections are symmetrized by union (max of the two directed weights).
// Gaussian weights use W_ij = exp(-|xi-xj|^2 / sigma^2) with sigma^2 the mean
// squared distance to the k-th neighbor over all vertices.
SparseGraph build_knn_graph(const PointCloud& data, int k, Weighting weighting);

// L = D - W, or the symmetric normalized form I - D^-1/2 W D^-1/2.
// lambda_max_bound is filled via estimate_lambda_max.
LaplacianOperator laplacian(const SparseGraph& graph, LaplacianVariant variant);

// Upper bound on the largest eigenvalue: power iteration to relative
// tolerance 1e-3 times a 1.01 safety factor, Gershgorin fallback on
// non-convergence. Never throws.
double estimate_lambda_max(const SpMat& matrix, LaplacianVariant variant);

// Component id per vertex, ids dense starting at 0.
std::vector<int> connected_components(const SparseGraph& graph);

// Diameter lower bound by double-sweep BFS (hop metric) from a seeded vertex.
Index approx_diameter(const SparseGraph& graph, std::uint64_t seed);

} // namespace gembed

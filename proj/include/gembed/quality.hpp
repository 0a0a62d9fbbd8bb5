#pragma once

#include "gembed/graph.hpp"
#include "gembed/kernels.hpp"
#include "gembed/types.hpp"

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

namespace gembed {

// An embedding with class ids and the kNN graph built on the embedded points.
struct LabeledEmbedding {
    Mat embedding;
    std::vector<int> labels;
    SparseGraph graph; // G_e

    Index size() const { return embedding.rows(); }
    std::vector<int> class_ids() const; // distinct labels, ascending
    std::vector<Index> class_vertices(int label) const;
};

LabeledEmbedding make_labeled_embedding(Mat embedding, std::vector<int> labels,
                                        int k_neighbors = 10);

// Total edge weight leaving the subset.
double graph_cut(const SparseGraph& graph, const std::vector<Index>& subset);

// Sum of degrees over the subset.
double volume(const SparseGraph& graph, const std::vector<Index>& subset);

// Cut over the smaller of the two volumes.
double cheeger_score(const SparseGraph& graph, const std::vector<Index>& class_vertices);

// Class-cardinality-weighted mean Cheeger score; small means well separated.
double aci(const LabeledEmbedding& labeled);

struct AccResult {
    double total = 0.0;
    std::map<int, double> per_class;
};

// Lazily filled atoms of g(L_e); shared across randomized evaluations.
class AtomCache {
  public:
    AtomCache(const LaplacianOperator& laplacian, const SpectralKernel& kernel, int cheb_order);
    const Vec& atom(Index vertex);

  private:
    const LaplacianOperator& laplacian_;
    SpectralKernel kernel_;
    int order_;
    std::unordered_map<Index, Vec> atoms_;
};

// Exact double sums of kdd over each class (the i = j zero terms counted by
// the 1/Nc^2 normalization). Guarded to N <= 5000.
AccResult acc_exact(const LaplacianOperator& laplacian_e, const SpectralKernel& kernel,
                    int cheb_order, const LabeledEmbedding& labeled);

// Per class, pairs_per_point * Nc uniform ordered pairs with i != j; the
// off-diagonal mean estimate is scaled by (Nc-1)/Nc to match acc_exact.
AccResult acc_randomized(const LaplacianOperator& laplacian_e, const SpectralKernel& kernel,
                         int cheb_order, const LabeledEmbedding& labeled, int pairs_per_point,
                         std::uint64_t seed, AtomCache* cache = nullptr);

// Heat kernel with tau = 10 / lambda_max of G_e.
SpectralKernel default_acc_kernel(const LaplacianOperator& laplacian_e);

} // namespace gembed

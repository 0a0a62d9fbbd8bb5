#include "gembed/quality.hpp"

#include "gembed/errors.hpp"
#include "gembed/filtering.hpp"
#include "gembed/metrics.hpp"
#include "gembed/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gembed {

std::vector<int> LabeledEmbedding::class_ids() const {
    std::set<int> ids;
    for (const int l : labels)
        if (l != kUnlabeled) ids.insert(l);
    return {ids.begin(), ids.end()};
}

std::vector<Index> LabeledEmbedding::class_vertices(int label) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) out.push_back(static_cast<Index>(i));
    return out;
}

LabeledEmbedding make_labeled_embedding(Mat embedding, std::vector<int> labels,
                                        int k_neighbors) {
    if (embedding.rows() != static_cast<Index>(labels.size()))
        throw invalid_parameter("make_labeled_embedding: label count mismatch");
    LabeledEmbedding le;
    PointCloud cloud;
    cloud.points = embedding;
    le.graph = build_knn_graph(cloud, std::min<Index>(k_neighbors, embedding.rows() - 1),
                               Weighting::gaussian);
    le.embedding = std::move(embedding);
    le.labels = std::move(labels);
    return le;
}

double graph_cut(const SparseGraph& graph, const std::vector<Index>& subset) {
    std::vector<char> in_set(static_cast<std::size_t>(graph.n_vertices()), 0);
    for (const Index v : subset) {
        if (v < 0 || v >= graph.n_vertices())
            throw invalid_parameter("graph_cut: vertex out of range");
        in_set[static_cast<std::size_t>(v)] = 1;
    }
    double cut = 0.0;
    for (const Index v : subset)
        for (SpMat::InnerIterator it(graph.adjacency, v); it; ++it)
            if (!in_set[static_cast<std::size_t>(it.col())]) cut += it.value();
    return cut;
}

double volume(const SparseGraph& graph, const std::vector<Index>& subset) {
    double vol = 0.0;
    for (const Index v : subset) {
        if (v < 0 || v >= graph.n_vertices())
            throw invalid_parameter("volume: vertex out of range");
        vol += graph.degrees[v];
    }
    return vol;
}

double cheeger_score(const SparseGraph& graph, const std::vector<Index>& class_vertices) {
    const double vol = volume(graph, class_vertices);
    const double vol_c = graph.degrees.sum() - vol;
    const double denom = std::min(vol, vol_c);
    if (!(denom > 0.0))
        throw degenerate_input("cheeger_score: class or complement has zero volume");
    return graph_cut(graph, class_vertices) / denom;
}

double aci(const LabeledEmbedding& labeled) {
    const auto ids = labeled.class_ids();
    if (ids.size() < 2) throw invalid_parameter("aci: need at least two classes");
    double acc = 0.0;
    for (const int c : ids) {
        const auto members = labeled.class_vertices(c);
        acc += static_cast<double>(members.size()) * cheeger_score(labeled.graph, members);
    }
    return acc / static_cast<double>(labeled.size());
}

AtomCache::AtomCache(const LaplacianOperator& laplacian, const SpectralKernel& kernel,
                     int cheb_order)
    : laplacian_(laplacian), kernel_(kernel), order_(cheb_order) {}

const Vec& AtomCache::atom(Index vertex) {
    auto it = atoms_.find(vertex);
    if (it == atoms_.end()) {
        const ChebyshevFilter filter = chebyshev_coeffs(
            kernel_, order_, std::max(laplacian_.lambda_max_bound, 1e-12));
        it = atoms_.emplace(vertex, localize(laplacian_, filter, vertex).values).first;
    }
    return it->second;
}

AccResult acc_exact(const LaplacianOperator& laplacian_e, const SpectralKernel& kernel,
                    int cheb_order, const LabeledEmbedding& labeled) {
    if (labeled.size() > 5000)
        throw invalid_parameter(
            "acc_exact: graph too large for exact double sums; use acc_randomized");

    const ChebyshevFilter filter =
        chebyshev_coeffs(kernel, cheb_order, std::max(laplacian_e.lambda_max_bound, 1e-12));
    AccResult result;
    double weighted = 0.0;
    for (const int c : labeled.class_ids()) {
        const auto members = labeled.class_vertices(c);
        const Index nc = static_cast<Index>(members.size());
        double mean;
        if (nc == 1) {
            mean = 0.0;
        } else {
            const Mat d = kdd_matrix(laplacian_e, filter, members);
            mean = d.sum() / static_cast<double>(nc * nc);
        }
        result.per_class[c] = mean;
        weighted += static_cast<double>(nc) * mean;
    }
    result.total = weighted / static_cast<double>(labeled.size());
    return result;
}

AccResult acc_randomized(const LaplacianOperator& laplacian_e, const SpectralKernel& kernel,
                         int cheb_order, const LabeledEmbedding& labeled, int pairs_per_point,
                         std::uint64_t seed, AtomCache* cache) {
    if (pairs_per_point < 1)
        throw invalid_parameter("acc_randomized: pairs_per_point must be >= 1");

    AtomCache local(laplacian_e, kernel, cheb_order);
    AtomCache& atoms = cache ? *cache : local;

    AccResult result;
    Rng rng(seed);
    double weighted = 0.0;
    for (const int c : labeled.class_ids()) {
        const auto members = labeled.class_vertices(c);
        const Index nc = static_cast<Index>(members.size());
        double mean = 0.0;
        if (nc > 1) {
            const Index n_pairs = static_cast<Index>(pairs_per_point) * nc;
            double acc = 0.0;
            for (Index t = 0; t < n_pairs; ++t) {
                const Index a = static_cast<Index>(rng.below(static_cast<std::uint64_t>(nc)));
                Index b = a;
                while (b == a)
                    b = static_cast<Index>(rng.below(static_cast<std::uint64_t>(nc)));
                acc += (atoms.atom(members[static_cast<std::size_t>(a)]) -
                        atoms.atom(members[static_cast<std::size_t>(b)]))
                           .norm();
            }
            // Off-diagonal mean, scaled to the inclusive-diagonal definition.
            mean = acc / static_cast<double>(n_pairs) * static_cast<double>(nc - 1) /
                   static_cast<double>(nc);
        }
        result.per_class[c] = mean;
        weighted += static_cast<double>(nc) * mean;
    }
    result.total = weighted / static_cast<double>(labeled.size());
    return result;
}

SpectralKernel default_acc_kernel(const LaplacianOperator& laplacian_e) {
    const double lmax = std::max(laplacian_e.lambda_max_bound, 1e-12);
    return SpectralKernel::heat(10.0 / lmax);
}

} // namespace gembed

#pragma once

#include "gembed/graph.hpp"
#include "gembed/rng.hpp"
#include "gembed/types.hpp"

#include <vector>

namespace gembed::test {

// Connected random weighted graph: a cycle backbone plus random chords with
// uniform weights in (0.2, 1.2). Continuous weights keep the spectrum simple.
inline SparseGraph random_graph(Index n, std::uint64_t seed, double chord_factor = 2.0) {
    Rng rng(seed);
    std::vector<Eigen::Triplet<double>> edges;
    for (Index i = 0; i < n; ++i)
        edges.emplace_back(i, (i + 1) % n, 0.2 + rng.uniform());
    const Index chords = static_cast<Index>(chord_factor * static_cast<double>(n));
    for (Index t = 0; t < chords; ++t) {
        const Index a = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
        const Index b = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
        if (a == b) continue;
        edges.emplace_back(a, b, 0.2 + rng.uniform());
    }
    return graph_from_edges(n, edges);
}

// Path graph with unit weights.
inline SparseGraph path_graph(Index n) {
    std::vector<Eigen::Triplet<double>> edges;
    for (Index i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, 1.0);
    return graph_from_edges(n, edges);
}

// Single edge of weight one.
inline SparseGraph edge_graph() { return path_graph(2); }

// Two gaussian blobs of n/2 points each in dimension k, centers +-separation/2
// along every axis.
inline PointCloud two_blobs(Index n, Index k, double separation, std::uint64_t seed) {
    Rng rng(seed);
    PointCloud cloud;
    cloud.points.resize(n, k);
    cloud.labels.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const int label = i < n / 2 ? 0 : 1;
        const double center = (label == 0 ? -0.5 : 0.5) * separation;
        for (Index c = 0; c < k; ++c) cloud.points(i, c) = center + rng.normal();
        cloud.labels[static_cast<std::size_t>(i)] = label;
    }
    return cloud;
}

// Random unit vector.
inline Vec random_unit(Index n, std::uint64_t seed) {
    Rng rng(seed);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    v.normalize();
    return v;
}

} // namespace gembed::test

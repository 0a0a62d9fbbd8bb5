#include "gembed/graph.hpp"

#include "gembed/errors.hpp"
#include "gembed/parallel.hpp"
#include "gembed/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace gembed {

namespace {

Vec row_sums(const SpMat& m) {
    Vec d = Vec::Zero(m.rows());
    for (Index r = 0; r < m.outerSize(); ++r)
        for (SpMat::InnerIterator it(m, r); it; ++it) d[r] += it.value();
    return d;
}

} // namespace

SparseGraph graph_from_edges(Index n, const std::vector<Eigen::Triplet<double>>& edges) {
    std::vector<Eigen::Triplet<double>> sym;
    sym.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.row() == e.col()) throw invalid_input("graph_from_edges: self loop");
        if (e.row() < 0 || e.col() < 0 || e.row() >= n || e.col() >= n)
            throw invalid_input("graph_from_edges: vertex out of range");
        if (e.value() < 0.0) throw invalid_input("graph_from_edges: negative weight");
        sym.emplace_back(e.row(), e.col(), e.value());
        sym.emplace_back(e.col(), e.row(), e.value());
    }
    SparseGraph g;
    g.adjacency.resize(n, n);
    g.adjacency.setFromTriplets(sym.begin(), sym.end());
    g.adjacency.prune(0.0, 0.0);
    g.adjacency.makeCompressed();
    g.degrees = row_sums(g.adjacency);
    return g;
}

SparseGraph build_knn_graph(const PointCloud& data, int k, Weighting weighting) {
    const Index n = data.size();
    if (n < 1) throw invalid_input("build_knn_graph: empty point cloud");
    if (k < 1 || k >= n) throw invalid_parameter("build_knn_graph: need 1 <= k < N");
    if (!data.points.allFinite()) throw invalid_input("build_knn_graph: non-finite feature");

    const Mat& x = data.points;
    std::vector<std::vector<std::pair<Index, double>>> picked(n); // (neighbor, dist^2)

    // Exact search; ties go to the lower index so construction is
    // deterministic and independent of thread count.
    parallel_for(n, [&](Index begin, Index end) {
        std::vector<std::pair<double, Index>> cand;
        for (Index i = begin; i < end; ++i) {
            cand.clear();
            cand.reserve(n - 1);
            for (Index j = 0; j < n; ++j) {
                if (j == i) continue;
                cand.emplace_back((x.row(i) - x.row(j)).squaredNorm(), j);
            }
            // Lexicographic (distance, index) order makes equal distances
            // resolve toward the lower vertex index.
            std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
            std::sort(cand.begin(), cand.begin() + k);
            picked[i].reserve(k);
            for (int t = 0; t < k; ++t) picked[i].emplace_back(cand[t].second, cand[t].first);
        }
    });

    double sigma2 = 1.0;
    if (weighting == Weighting::gaussian) {
        double acc = 0.0;
        for (Index i = 0; i < n; ++i) acc += picked[i].back().second;
        sigma2 = acc / static_cast<double>(n);
        if (!(sigma2 > 0.0)) sigma2 = 1.0; // all duplicates; weights become 1
    }

    std::vector<Eigen::Triplet<double>> directed;
    directed.reserve(static_cast<std::size_t>(n) * k);
    for (Index i = 0; i < n; ++i)
        for (const auto& [j, d2] : picked[i]) {
            const double w =
                weighting == Weighting::binary ? 1.0 : std::exp(-d2 / sigma2);
            directed.emplace_back(i, j, w);
        }

    // Union symmetrization, keeping the max of the two directed weights.
    SpMat dir(n, n);
    dir.setFromTriplets(directed.begin(), directed.end(),
                        [](double a, double b) { return std::max(a, b); });
    SpMat dirT = SpMat(dir.transpose());
    std::vector<Eigen::Triplet<double>> sym;
    sym.reserve(dir.nonZeros() * 2);
    for (Index r = 0; r < dir.outerSize(); ++r)
        for (SpMat::InnerIterator it(dir, r); it; ++it)
            sym.emplace_back(it.row(), it.col(), it.value());
    for (Index r = 0; r < dirT.outerSize(); ++r)
        for (SpMat::InnerIterator it(dirT, r); it; ++it)
            sym.emplace_back(it.row(), it.col(), it.value());

    SparseGraph g;
    g.adjacency.resize(n, n);
    g.adjacency.setFromTriplets(sym.begin(), sym.end(),
                                [](double a, double b) { return std::max(a, b); });
    g.adjacency.makeCompressed();
    g.degrees = row_sums(g.adjacency);
    return g;
}

LaplacianOperator laplacian(const SparseGraph& graph, LaplacianVariant variant) {
    const Index n = graph.n_vertices();
    LaplacianOperator lap;
    lap.variant = variant;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(graph.adjacency.nonZeros() + n);
    if (variant == LaplacianVariant::combinatorial) {
        for (Index r = 0; r < graph.adjacency.outerSize(); ++r)
            for (SpMat::InnerIterator it(graph.adjacency, r); it; ++it)
                trip.emplace_back(it.row(), it.col(), -it.value());
        for (Index i = 0; i < n; ++i) trip.emplace_back(i, i, graph.degrees[i]);
    } else {
        for (Index i = 0; i < n; ++i)
            if (!(graph.degrees[i] > 0.0))
                throw degenerate_input(
                    "laplacian: isolated vertex under the normalized variant");
        Vec inv_sqrt = graph.degrees.array().sqrt().inverse();
        for (Index r = 0; r < graph.adjacency.outerSize(); ++r)
            for (SpMat::InnerIterator it(graph.adjacency, r); it; ++it)
                trip.emplace_back(it.row(), it.col(),
                                  -it.value() * inv_sqrt[it.row()] * inv_sqrt[it.col()]);
        for (Index i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
    }
    lap.matrix.resize(n, n);
    lap.matrix.setFromTriplets(trip.begin(), trip.end());
    lap.matrix.makeCompressed();
    lap.lambda_max_bound = estimate_lambda_max(lap.matrix, variant);
    return lap;
}

double estimate_lambda_max(const SpMat& matrix, LaplacianVariant variant) {
    const Index n = matrix.rows();
    if (n == 0) return 0.0;

    double gershgorin = 0.0;
    if (variant == LaplacianVariant::combinatorial) {
        for (Index i = 0; i < n; ++i) gershgorin = std::max(gershgorin, 2.0 * matrix.coeff(i, i));
    } else {
        gershgorin = 2.0;
    }
    if (matrix.nonZeros() == 0 || gershgorin == 0.0) return 0.0;

    Rng rng(0x9db4c9a1u);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    v.normalize();

    // Residual-based stopping: for a unit iterate, |lambda - rq| <= ||Av - rq v||
    // for some eigenvalue, and the iterate converges toward the top of the
    // spectrum, so a small residual certifies rq to the requested tolerance.
    const int max_iter = 10000;
    for (int it = 0; it < max_iter; ++it) {
        Vec w = matrix * v;
        const double nw = w.norm();
        if (!(nw > 0.0)) return gershgorin; // start vector hit the null space
        const double rq = v.dot(w);
        const double residual = (w - rq * v).norm();
        if (it > 0 && residual <= 1e-3 * std::max(rq, 1e-300))
            return std::min(1.01 * rq, gershgorin);
        v = w / nw;
    }
    return gershgorin; // non-convergence fallback
}

std::vector<int> connected_components(const SparseGraph& graph) {
    const Index n = graph.n_vertices();
    std::vector<int> comp(n, -1);
    int next = 0;
    std::deque<Index> queue;
    for (Index s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        queue.push_back(s);
        while (!queue.empty()) {
            const Index v = queue.front();
            queue.pop_front();
            for (SpMat::InnerIterator it(graph.adjacency, v); it; ++it)
                if (comp[it.col()] < 0) {
                    comp[it.col()] = next;
                    queue.push_back(it.col());
                }
        }
        ++next;
    }
    return comp;
}

namespace {

std::pair<Index, Index> bfs_farthest(const SparseGraph& g, Index source) {
    const Index n = g.n_vertices();
    std::vector<Index> dist(n, -1);
    std::deque<Index> queue{source};
    dist[source] = 0;
    Index far = source, far_d = 0;
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (SpMat::InnerIterator it(g.adjacency, v); it; ++it)
            if (dist[it.col()] < 0) {
                dist[it.col()] = dist[v] + 1;
                if (dist[it.col()] > far_d) {
                    far_d = dist[it.col()];
                    far = it.col();
                }
                queue.push_back(it.col());
            }
    }
    return {far, far_d};
}

} // namespace

Index approx_diameter(const SparseGraph& graph, std::uint64_t seed) {
    const Index n = graph.n_vertices();
    if (n == 0) return 0;
    Rng rng(seed);
    const Index start = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    const auto [far, d1] = bfs_farthest(graph, start);
    const auto [far2, d2] = bfs_farthest(graph, far);
    (void)far2;
    return std::max<Index>(1, std::max(d1, d2));
}

} // namespace gembed

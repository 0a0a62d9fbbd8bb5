#include "gembed/filtering.hpp"

#include "gembed/errors.hpp"
#include "gembed/parallel.hpp"
#include "gembed/rng.hpp"

#include <cmath>

namespace gembed {

namespace {

// Recurrence on a column block: y = c0/2 x + sum_j cj Tj(A) x with
// A = (2 L - U I) / U mapping [0, U] onto [-1, 1].
void filter_block(const SpMat& L, const Vec& c, int order, double upper, const Mat& x,
                  Mat& y) {
    const double inv_u = 1.0 / upper;
    Mat tkm2 = x;
    y = (c[0] / 2.0) * x;
    if (order < 1) return;
    Mat tkm1 = (2.0 * inv_u) * (L * x) - x;
    y += c[1] * tkm1;
    for (int j = 2; j <= order; ++j) {
        Mat tk = (4.0 * inv_u) * (L * tkm1) - 2.0 * tkm1 - tkm2;
        y += c[j] * tk;
        tkm2.swap(tkm1);
        tkm1.swap(tk);
    }
}

} // namespace

Mat filter_signal(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                  const Mat& signals) {
    if (signals.rows() != laplacian.size())
        throw invalid_parameter("filter_signal: signal length must equal vertex count");

    // Empty spectrum: g(L) acts as g(0) I.
    if (laplacian.lambda_max_bound == 0.0) {
        const double g0 = filter.evaluate(0.0);
        return g0 * signals;
    }
    if (filter.interval_upper < laplacian.lambda_max_bound)
        throw invalid_parameter(
            "filter_signal: filter interval smaller than the spectral bound");

    Mat out(signals.rows(), signals.cols());
    const Index cols = signals.cols();
    if (cols == 1) {
        filter_block(laplacian.matrix, filter.coefficients, filter.order,
                     filter.interval_upper, signals, out);
        return out;
    }
    parallel_for(cols, [&](Index begin, Index end) {
        Mat block;
        filter_block(laplacian.matrix, filter.coefficients, filter.order,
                     filter.interval_upper, signals.middleCols(begin, end - begin), block);
        out.middleCols(begin, end - begin) = block;
    });
    return out;
}

Vec filter_signal(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                  const Vec& signal) {
    return filter_signal(laplacian, filter, Mat(signal)).col(0);
}

Atom localize(const LaplacianOperator& laplacian, const ChebyshevFilter& filter, Index vertex) {
    if (vertex < 0 || vertex >= laplacian.size())
        throw invalid_parameter("localize: vertex index out of range");
    Vec delta = Vec::Zero(laplacian.size());
    delta[vertex] = 1.0;
    return Atom{vertex, filter_signal(laplacian, filter, delta)};
}

Vec estimate_atom_norms(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                        int probes, std::uint64_t seed) {
    if (probes < 1) throw invalid_parameter("estimate_atom_norms: need probes >= 1");
    const Index n = laplacian.size();
    Mat r(n, probes);
    Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(probes));
    for (Index j = 0; j < probes; ++j)
        for (Index i = 0; i < n; ++i) r(i, j) = rng.rademacher() * scale;
    const Mat filtered = filter_signal(laplacian, filter, r);
    return filtered.rowwise().squaredNorm();
}

} // namespace gembed

#include "gembed/metrics.hpp"

#include "gembed/errors.hpp"
#include "gembed/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace gembed {

namespace {

double cosine_from_atoms(const Vec& ai, const Vec& aj) {
    const double ni = ai.norm();
    const double nj = aj.norm();
    if (!(ni > 0.0) || !(nj > 0.0))
        throw degenerate_input("lkd: kernel localizes to a zero atom");
    return ai.dot(aj) / (ni * nj);
}

} // namespace

double lkd_unclamped(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                     Index i, Index j) {
    const Atom ai = localize(laplacian, filter, i);
    const Atom aj = localize(laplacian, filter, j);
    return 1.0 - cosine_from_atoms(ai.values, aj.values);
}

double lkd(const LaplacianOperator& laplacian, const ChebyshevFilter& filter, Index i,
           Index j) {
    return std::clamp(lkd_unclamped(laplacian, filter, i, j), 0.0, 1.0);
}

double lkd_dense(const DenseSpectrum& spectrum, const SpectralKernel& kernel, Index i,
                 Index j) {
    const Vec g2 = kernel(spectrum.eigenvalues()).cwiseAbs2();
    const Mat& u = spectrum.eigenvectors();
    const double inner = (g2.array() * u.row(i).transpose().array() *
                          u.row(j).transpose().array())
                             .sum();
    const double ni = std::sqrt((g2.array() * u.row(i).transpose().array().square()).sum());
    const double nj = std::sqrt((g2.array() * u.row(j).transpose().array().square()).sum());
    if (!(ni > 0.0) || !(nj > 0.0))
        throw degenerate_input("lkd_dense: kernel localizes to a zero atom");
    return 1.0 - inner / (ni * nj);
}

double kdd(const LaplacianOperator& laplacian, const ChebyshevFilter& filter, Index i,
           Index j) {
    const Atom ai = localize(laplacian, filter, i);
    const Atom aj = localize(laplacian, filter, j);
    return (ai.values - aj.values).norm();
}

double kdd_dense(const DenseSpectrum& spectrum, const SpectralKernel& kernel, Index i,
                 Index j) {
    const Vec g2 = kernel(spectrum.eigenvalues()).cwiseAbs2();
    const Mat& u = spectrum.eigenvectors();
    const auto diff = u.row(i).transpose().array() - u.row(j).transpose().array();
    return std::sqrt((g2.array() * diff.square()).sum());
}

Mat kdd_matrix(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
               const std::vector<Index>& subset) {
    const Index s = static_cast<Index>(subset.size());
    Mat atoms(laplacian.size(), s);
    parallel_for(s, [&](Index begin, Index end) {
        for (Index t = begin; t < end; ++t)
            atoms.col(t) = localize(laplacian, filter, subset[t]).values;
    });

    // Gram trick: ||a_i - a_j||^2 = n_i + n_j - 2 G_ij.
    const Mat gram = atoms.transpose() * atoms;
    const Vec norms = gram.diagonal();
    Mat out(s, s);
    for (Index a = 0; a < s; ++a) {
        out(a, a) = 0.0;
        for (Index b = a + 1; b < s; ++b) {
            const double d2 = std::max(0.0, norms[a] + norms[b] - 2.0 * gram(a, b));
            const double d = std::sqrt(d2);
            out(a, b) = d;
            out(b, a) = d;
        }
    }
    return out;
}

} // namespace gembed

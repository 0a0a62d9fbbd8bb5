#include "gembed/dense.hpp"

#include "gembed/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace gembed {

DenseSpectrum::DenseSpectrum(const LaplacianOperator& laplacian) {
    const Index n = laplacian.size();
    if (n > kMaxVertices)
        throw invalid_parameter("DenseSpectrum: graph too large for the dense path");
    Mat dense = Mat(laplacian.matrix);
    Eigen::SelfAdjointEigenSolver<Mat> solver(dense);
    if (solver.info() != Eigen::Success)
        throw error("DenseSpectrum: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues().cwiseMax(0.0); // PSD up to rounding
    eigenvectors_ = solver.eigenvectors();
}

Vec DenseSpectrum::apply(const SpectralKernel& kernel, const Vec& signal) const {
    const Vec g = kernel(eigenvalues_);
    return eigenvectors_ * (g.asDiagonal() * (eigenvectors_.transpose() * signal));
}

Vec DenseSpectrum::atom(const SpectralKernel& kernel, Index vertex) const {
    const Vec g = kernel(eigenvalues_);
    return eigenvectors_ * (g.cwiseProduct(eigenvectors_.row(vertex).transpose()));
}

double DenseSpectrum::atom_norm_sq(const SpectralKernel& kernel, Index vertex) const {
    const Vec g = kernel(eigenvalues_);
    return (g.cwiseProduct(eigenvectors_.row(vertex).transpose())).squaredNorm();
}

Vec DenseSpectrum::atom_norms_sq(const SpectralKernel& kernel) const {
    const Vec g2 = kernel(eigenvalues_).cwiseAbs2();
    return eigenvectors_.cwiseAbs2() * g2;
}

Vec exact_filter_dense(const LaplacianOperator& laplacian, const SpectralKernel& kernel,
                       const Vec& signal) {
    if (signal.size() != laplacian.size())
        throw invalid_parameter("exact_filter_dense: signal length mismatch");
    DenseSpectrum spectrum(laplacian);
    return spectrum.apply(kernel, signal);
}

} // namespace gembed

#pragma once

#include "gembed/graph.hpp"
#include "gembed/kernels.hpp"
#include "gembed/types.hpp"

namespace gembed {

// Full eigendecomposition of a Laplacian, guarded to small graphs. This is
// the exact reference path: tests compare polynomial filtering against it,
// and the sampling-bound helpers read eigenvector entries off it.
class DenseSpectrum {
  public:
    static constexpr Index kMaxVertices = 2000;

    explicit DenseSpectrum(const LaplacianOperator& laplacian);

    const Vec& eigenvalues() const { return eigenvalues_; }
    const Mat& eigenvectors() const { return eigenvectors_; }
    Index size() const { return eigenvalues_.size(); }

    Vec apply(const SpectralKernel& kernel, const Vec& signal) const;
    Vec atom(const SpectralKernel& kernel, Index vertex) const;
    double atom_norm_sq(const SpectralKernel& kernel, Index vertex) const;
    Vec atom_norms_sq(const SpectralKernel& kernel) const;

  private:
    Vec eigenvalues_;
    Mat eigenvectors_;
};

// U g(Lambda) U* x. Test oracle and small-N path only.
Vec exact_filter_dense(const LaplacianOperator& laplacian, const SpectralKernel& kernel,
                       const Vec& signal);

} // namespace gembed

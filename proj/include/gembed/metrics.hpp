#pragma once

#include "gembed/dense.hpp"
#include "gembed/filtering.hpp"

#include <vector>

namespace gembed {

// Localized kernel distance: 1 - <T_i g, T_j g> / (||T_i g|| ||T_j g||).
// lkd() clamps to [0, 1]; the unclamped value is for exactness tests.
double lkd(const LaplacianOperator& laplacian, const ChebyshevFilter& filter, Index i,
           Index j);
double lkd_unclamped(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                     Index i, Index j);
double lkd_dense(const DenseSpectrum& spectrum, const SpectralKernel& kernel, Index i,
                 Index j);

// Kernelized diffusion distance: ||T_i g - T_j g||. The dense mode evaluates
// the spectral form sqrt(sum_l g(l)^2 (u_l[i] - u_l[j])^2).
double kdd(const LaplacianOperator& laplacian, const ChebyshevFilter& filter, Index i,
           Index j);
double kdd_dense(const DenseSpectrum& spectrum, const SpectralKernel& kernel, Index i,
                 Index j);

// All pairwise kdd values among a vertex subset; symmetric, zero diagonal.
Mat kdd_matrix(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
               const std::vector<Index>& subset);

} // namespace gembed

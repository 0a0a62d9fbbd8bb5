#pragma once

#include "gembed/chebyshev.hpp"
#include "gembed/graph.hpp"
#include "gembed/types.hpp"

#include <cstdint>

namespace gembed {

// One column of g(L): the kernel localized at a vertex.
struct Atom {
    Index center = 0;
    Vec values;
};

// Applies the Chebyshev recurrence with sparse matrix-vector products only;
// each column of a batch is filtered independently. The filter interval must
// cover the Laplacian's certified spectral bound.
Mat filter_signal(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                  const Mat& signals);
Vec filter_signal(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                  const Vec& signal);

Atom localize(const LaplacianOperator& laplacian, const ChebyshevFilter& filter, Index vertex);

// Unbiased per-vertex estimates of ||T_i g||^2 from P random filterings:
// squared row norms of g(L) R with R an N x P Rademacher matrix scaled 1/sqrt(P).
Vec estimate_atom_norms(const LaplacianOperator& laplacian, const ChebyshevFilter& filter,
                        int probes, std::uint64_t seed);

} // namespace gembed

#pragma once

#include "gembed/kernels.hpp"
#include "gembed/types.hpp"

namespace gembed {

// Truncated Chebyshev expansion of a kernel on [0, interval_upper], in the
// half-first-coefficient convention: p(x) = c0/2 + sum_{j>=1} cj Tj(t(x)).
struct ChebyshevFilter {
    Vec coefficients;      // c_0 .. c_m
    int order = 0;         // m
    double interval_upper = 0.0;
    double grid_error = 0.0; // max |p - g| on a 1000-point grid

    double evaluate(double lambda) const;
};

// Interpolation at the m+1 Chebyshev points of the interval.
ChebyshevFilter chebyshev_coeffs(const SpectralKernel& kernel, int order,
                                 double interval_upper);

} // namespace gembed

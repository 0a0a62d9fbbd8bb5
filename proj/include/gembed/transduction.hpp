#pragma once

#include "gembed/chebyshev.hpp"
#include "gembed/filtering.hpp"
#include "gembed/graph.hpp"
#include "gembed/kernels.hpp"

#include <memory>
#include <vector>

namespace gembed {

// Values observed on a deduplicated set of vertices; one column per
// embedding dimension.
struct ObservedSignal {
    std::vector<Index> vertices;
    Mat values;
};

enum class DiffusionVariant { tikhonov, rkhs, chd, tik_chd, rkhs_chd };

// Linear map from sketch values to all vertices. Fit once, applied to any
// column count; immutable afterwards.
struct DiffusionOperator {
    DiffusionVariant variant = DiffusionVariant::chd;
    std::shared_ptr<const LaplacianOperator> laplacian;
    std::vector<Index> samples;
    double mu = 1.0;

    // rkhs: Gram matrix of localized atoms at the samples.
    SpectralKernel kernel = SpectralKernel::heat(1.0);
    int cheb_order = 30;
    Mat gram;

    // chd: row-stochastic weights (N x M').
    Mat weights;
    int degenerate_rows = 0; // rows that fell back to uniform weights
};

// Solves argmin ||y - M x||^2 + mu x^T L x per column by conjugate gradient
// (relative residual 1e-8, at most 10 N iterations). Components holding no
// sample receive the zero solution; their count is reported through
// components_without_samples when non-null.
Mat tikhonov_diffuse(const LaplacianOperator& laplacian, const ObservedSignal& observed,
                     double mu, int* components_without_samples = nullptr);

DiffusionOperator make_tikhonov_operator(std::shared_ptr<const LaplacianOperator> laplacian,
                                         std::vector<Index> samples, double mu);

// Kernel ridge regression in the span of atoms at the samples: coefficients
// beta = (K + mu I)^-1 y with K[a,b] = T_{S_a} g [S_b], prediction by one
// batched filtering of the coefficient deltas. The kernel must be strictly
// positive on the spectrum; K gets a small jitter when the Cholesky fails.
DiffusionOperator make_rkhs_operator(std::shared_ptr<const LaplacianOperator> laplacian,
                                     const SpectralKernel& kernel, int cheb_order,
                                     std::vector<Index> samples, double mu);
Mat rkhs_fit(const LaplacianOperator& laplacian, const SpectralKernel& kernel,
             int cheb_order, const ObservedSignal& observed, double mu,
             DiffusionOperator* fitted = nullptr);

// Convex hull diffusion: weights clamp(1 - lkd(i, S_k), 0, 1) row-normalized
// to sum 1. The inner products <T_i g, T_k g> come from one filtering of
// delta_{S_k} with the squared kernel per sample.
DiffusionOperator chd_operator(std::shared_ptr<const LaplacianOperator> laplacian,
                               const SpectralKernel& kernel, int cheb_order,
                               std::vector<Index> samples, const Vec& atom_norms_sq);

// Bootstrapped variants run the chd stage first and feed its values at the
// sampled vertices to the second stage.
DiffusionOperator make_bootstrap_operator(DiffusionVariant variant, DiffusionOperator chd_stage,
                                          double mu);

Mat apply_diffusion(const DiffusionOperator& op, const Mat& sketch_values);

} // namespace gembed

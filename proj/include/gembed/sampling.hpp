#pragma once

#include "gembed/chebyshev.hpp"
#include "gembed/dense.hpp"
#include "gembed/types.hpp"

#include <cstdint>
#include <vector>

namespace gembed {

enum class SamplingKind { uniform, adapted };

struct SamplingDistribution {
    Vec p;
    SamplingKind kind = SamplingKind::uniform;

    Index size() const { return p.size(); }
};

// Vertices drawn i.i.d. with replacement; multiplicity is kept for the
// theory harness, the sketch uses the deduplicated view.
struct SampleSet {
    std::vector<Index> omega;
    SamplingDistribution distribution;

    Index count() const { return static_cast<Index>(omega.size()); }
    std::vector<Index> unique_vertices() const; // first occurrence kept
};

SamplingDistribution uniform_distribution(Index n);

// p_i proportional to ||T_i g||^2; normalized by the empirical sum so that
// stochastic norm estimates still yield a valid distribution.
SamplingDistribution adapted_distribution(const Vec& atom_norms_sq);

SampleSet draw_samples(const SamplingDistribution& distribution, Index m, std::uint64_t seed);

struct BoundInputs {
    double delta = 0.5;   // accuracy, in (0,1)
    double eps = 0.1;     // failure probability, in (0,1)
    int k = 1;            // kernel rank ||g(lambda)||_0
    double ratio2 = 1.0;  // ||g||_2^2 / ||g||_inf^2, in [1, k]
    double a_factor = 1.0;
};

// Sample count conserving filtered energy:
// M >= (2/delta^2) ratio2 (1 + delta/3) log(2k/eps).
Index bound_samples_embedding(const BoundInputs& inputs);

// Per-node energy capture:
// M >= (2 a/delta^2) (1 + delta/3) log(k/eps).
Index bound_samples_node(const BoundInputs& inputs);

// Node-dependent factor a_i = ||g||_2^2 ||g||_inf^2 ||Uk* d_i||_2^4 / ||T_i g||_2^4,
// evaluated exactly on the dense path.
Vec node_a_factors(const DenseSpectrum& spectrum, const SpectralKernel& kernel);

struct LowRankBound {
    Index samples = 0;
    Vec offsets; // per requested node: ||T_i(|g'|-|g|)||^2 / ||T_i g||^2
};

// Low-rank variant: truncated must come from low_rank_truncate(kernel, ...).
// The sample count takes the max over the requested nodes.
LowRankBound bound_samples_node_lowrank(const DenseSpectrum& spectrum,
                                        const SpectralKernel& kernel,
                                        const SpectralKernel& truncated, double delta,
                                        double eps, const std::vector<Index>& nodes);

// (1/M) sum_j atom[omega_j]^2 / p_{omega_j} divided by ||atom||^2; the
// importance-sampled energy fraction whose concentration the node bound
// guarantees.
double empirical_energy_ratio(const Vec& atom, double atom_norm_sq,
                              const SamplingDistribution& distribution,
                              const SampleSet& samples);

// Convenience form computing the atom by polynomial localization.
double empirical_energy_ratio(const LaplacianOperator& laplacian,
                              const ChebyshevFilter& filter,
                              const SamplingDistribution& distribution,
                              const SampleSet& samples, Index vertex);

} // namespace gembed

#include "gembed/sampling.hpp"

#include "gembed/errors.hpp"
#include "gembed/filtering.hpp"
#include "gembed/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace gembed {

std::vector<Index> SampleSet::unique_vertices() const {
    std::vector<Index> out;
    out.reserve(omega.size());
    std::unordered_set<Index> seen;
    for (const Index v : omega)
        if (seen.insert(v).second) out.push_back(v);
    return out;
}

SamplingDistribution uniform_distribution(Index n) {
    if (n < 1) throw invalid_parameter("uniform_distribution: need N >= 1");
    SamplingDistribution d;
    d.kind = SamplingKind::uniform;
    d.p = Vec::Constant(n, 1.0 / static_cast<double>(n));
    return d;
}

SamplingDistribution adapted_distribution(const Vec& atom_norms_sq) {
    if (atom_norms_sq.size() < 1) throw invalid_parameter("adapted_distribution: empty input");
    if ((atom_norms_sq.array() < 0.0).any())
        throw invalid_input("adapted_distribution: negative atom norm");
    const double total = atom_norms_sq.sum();
    if (!(total > 0.0)) throw invalid_input("adapted_distribution: all atom norms are zero");
    SamplingDistribution d;
    d.kind = SamplingKind::adapted;
    d.p = atom_norms_sq / total;
    return d;
}

SampleSet draw_samples(const SamplingDistribution& distribution, Index m, std::uint64_t seed) {
    if (m < 1) throw invalid_parameter("draw_samples: need M >= 1");
    const Index n = distribution.size();
    Vec cdf(n);
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        acc += distribution.p[i];
        cdf[i] = acc;
    }
    cdf[n - 1] = 1.0; // guard the last bin against rounding

    SampleSet s;
    s.distribution = distribution;
    s.omega.resize(m);
    Rng rng(seed);
    for (Index j = 0; j < m; ++j) {
        const double u = rng.uniform();
        const double* hit = std::upper_bound(cdf.data(), cdf.data() + n, u);
        s.omega[j] = std::min<Index>(hit - cdf.data(), n - 1);
    }
    return s;
}

namespace {

void check_bound_inputs(const BoundInputs& in) {
    if (!(in.delta > 0.0 && in.delta < 1.0))
        throw invalid_parameter("sample bound: delta must lie in (0,1)");
    if (!(in.eps > 0.0 && in.eps < 1.0))
        throw invalid_parameter("sample bound: eps must lie in (0,1)");
    if (in.k < 1) throw invalid_parameter("sample bound: kernel rank must be >= 1");
}

Index at_least_one(double value) {
    return std::max<Index>(1, static_cast<Index>(std::ceil(value)));
}

} // namespace

Index bound_samples_embedding(const BoundInputs& in) {
    check_bound_inputs(in);
    // ratio2 lies in [1, k] mathematically; allow rounding slack at the ends.
    if (!(in.ratio2 >= 1.0 - 1e-9 && in.ratio2 <= static_cast<double>(in.k) * (1.0 + 1e-9)))
        throw invalid_parameter("sample bound: ratio2 must lie in [1, k]");
    const double m = 2.0 / (in.delta * in.delta) * in.ratio2 * (1.0 + in.delta / 3.0) *
                     std::log(2.0 * in.k / in.eps);
    return at_least_one(m);
}

Index bound_samples_node(const BoundInputs& in) {
    check_bound_inputs(in);
    if (!(in.a_factor >= 1.0 - 1e-9))
        throw invalid_parameter("sample bound: the node factor a is always >= 1");
    const double m = 2.0 * in.a_factor / (in.delta * in.delta) * (1.0 + in.delta / 3.0) *
                     std::log(in.k / in.eps);
    return at_least_one(m);
}

Vec node_a_factors(const DenseSpectrum& spectrum, const SpectralKernel& kernel) {
    const Vec g = kernel(spectrum.eigenvalues());
    const Vec g2 = g.cwiseAbs2();
    const double norm2_sq = g2.sum();
    const double norm_inf_sq = g2.maxCoeff();
    const Mat& u = spectrum.eigenvectors();
    const Index n = spectrum.size();

    Vec support = Vec::Zero(n);
    for (Index l = 0; l < n; ++l) support[l] = g[l] != 0.0 ? 1.0 : 0.0;

    Vec out(n);
    const Mat u2 = u.cwiseAbs2();
    const Vec uk_sq = u2 * support;      // ||Uk* delta_i||_2^2
    const Vec atom_sq = u2 * g2;         // ||T_i g||_2^2
    for (Index i = 0; i < n; ++i) {
        if (!(atom_sq[i] > 0.0)) {
            out[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        out[i] = norm2_sq * norm_inf_sq * uk_sq[i] * uk_sq[i] / (atom_sq[i] * atom_sq[i]);
    }
    return out;
}

LowRankBound bound_samples_node_lowrank(const DenseSpectrum& spectrum,
                                        const SpectralKernel& kernel,
                                        const SpectralKernel& truncated, double delta,
                                        double eps, const std::vector<Index>& nodes) {
    const Vec& lam = spectrum.eigenvalues();
    const Vec g = kernel(lam);
    const Vec gp = truncated(lam);

    int rank = 0;
    for (Index l = 0; l < lam.size(); ++l) {
        if (gp[l] == 0.0) continue;
        ++rank;
        if (gp[l] != g[l])
            throw invalid_input(
                "bound_samples_node_lowrank: kernel is not a truncation of the original");
    }
    if (rank < 1)
        throw invalid_input("bound_samples_node_lowrank: truncation has empty support");

    const Vec gp2 = gp.cwiseAbs2();
    const double gp_norm2_sq = gp2.sum();
    const double gp_norm_inf_sq = gp2.maxCoeff();

    const Mat u2 = spectrum.eigenvectors().cwiseAbs2();
    Vec support = Vec::Zero(lam.size());
    for (Index l = 0; l < lam.size(); ++l) support[l] = gp[l] != 0.0 ? 1.0 : 0.0;
    const Vec uk_sq = u2 * support;
    const Vec atom_sq = u2 * g.cwiseAbs2();
    const Vec diff_sq = u2 * (gp.cwiseAbs() - g.cwiseAbs()).cwiseAbs2();

    LowRankBound out;
    out.offsets.resize(static_cast<Index>(nodes.size()));
    double worst = 0.0;
    for (std::size_t t = 0; t < nodes.size(); ++t) {
        const Index i = nodes[t];
        if (i < 0 || i >= lam.size())
            throw invalid_parameter("bound_samples_node_lowrank: node out of range");
        if (!(atom_sq[i] > 0.0))
            throw degenerate_input("bound_samples_node_lowrank: zero atom norm at node");
        out.offsets[static_cast<Index>(t)] = diff_sq[i] / atom_sq[i];
        const double a = gp_norm2_sq * gp_norm_inf_sq * uk_sq[i] * uk_sq[i] /
                         (atom_sq[i] * atom_sq[i]);
        worst = std::max(worst, a);
    }
    // Same shape as the node bound, but the factor divides by the original
    // kernel's atom norms and may drop below 1.
    BoundInputs in;
    in.delta = delta;
    in.eps = eps;
    in.k = rank;
    check_bound_inputs(in);
    out.samples = at_least_one(2.0 * worst / (delta * delta) * (1.0 + delta / 3.0) *
                               std::log(rank / eps));
    return out;
}

double empirical_energy_ratio(const Vec& atom, double atom_norm_sq,
                              const SamplingDistribution& distribution,
                              const SampleSet& samples) {
    if (!(atom_norm_sq > 0.0))
        throw degenerate_input("empirical_energy_ratio: zero atom norm");
    double acc = 0.0;
    for (const Index v : samples.omega) {
        const double p = distribution.p[v];
        if (!(p > 0.0))
            throw invalid_input("empirical_energy_ratio: sample with zero probability");
        acc += atom[v] * atom[v] / p;
    }
    return acc / (static_cast<double>(samples.count()) * atom_norm_sq);
}

double empirical_energy_ratio(const LaplacianOperator& laplacian,
                              const ChebyshevFilter& filter,
                              const SamplingDistribution& distribution,
                              const SampleSet& samples, Index vertex) {
    const Atom atom = localize(laplacian, filter, vertex);
    return empirical_energy_ratio(atom.values, atom.values.squaredNorm(), distribution,
                                  samples);
}

} // namespace gembed

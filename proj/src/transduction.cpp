#include "gembed/transduction.hpp"

#include "gembed/errors.hpp"
#include "gembed/parallel.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace gembed {

namespace {

void check_observed(const LaplacianOperator& laplacian, const ObservedSignal& obs) {
    if (obs.vertices.empty()) throw invalid_input("diffusion: empty sample set");
    if (static_cast<Index>(obs.vertices.size()) != obs.values.rows())
        throw invalid_parameter("diffusion: sample count does not match value rows");
    std::unordered_set<Index> seen;
    for (const Index v : obs.vertices) {
        if (v < 0 || v >= laplacian.size())
            throw invalid_parameter("diffusion: sample vertex out of range");
        if (!seen.insert(v).second)
            throw invalid_input("diffusion: duplicate sample vertex");
    }
    if (!obs.values.allFinite()) throw invalid_input("diffusion: non-finite observed value");
}

// CG on the SPD operator x -> mask .* x + mu L x.
Vec solve_tikhonov_column(const SpMat& laplacian, const Vec& mask, double mu, const Vec& rhs) {
    const Index n = rhs.size();
    const auto apply = [&](const Vec& v) -> Vec {
        return mask.cwiseProduct(v) + mu * (laplacian * v);
    };

    Vec x = Vec::Zero(n);
    Vec r = rhs;
    const double rhs_norm = rhs.norm();
    if (!(rhs_norm > 0.0)) return x;
    Vec p = r;
    double rs = r.squaredNorm();
    const double tol = 1e-8 * rhs_norm;
    const long max_iter = 10 * static_cast<long>(n);
    for (long it = 0; it < max_iter; ++it) {
        if (std::sqrt(rs) <= tol) return x;
        const Vec ap = apply(p);
        const double pap = p.dot(ap);
        if (!(pap > 0.0)) break; // operator singular along p
        const double alpha = rs / pap;
        x += alpha * p;
        r -= alpha * ap;
        const double rs_new = r.squaredNorm();
        p = r + (rs_new / rs) * p;
        rs = rs_new;
    }
    if (std::sqrt(rs) <= tol) return x;
    throw solver_error("tikhonov_diffuse: conjugate gradient did not converge",
                       std::sqrt(rs) / rhs_norm, max_iter);
}

} // namespace

Mat tikhonov_diffuse(const LaplacianOperator& laplacian, const ObservedSignal& observed,
                     double mu, int* components_without_samples) {
    if (!(mu > 0.0)) throw invalid_parameter("tikhonov_diffuse: mu must be > 0");
    check_observed(laplacian, observed);

    if (components_without_samples) {
        // Count components the data term never touches; CG leaves them at zero.
        SparseGraph g;
        g.adjacency = laplacian.matrix;
        std::vector<int> comp = connected_components(g);
        const int n_comp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
        std::vector<char> hit(static_cast<std::size_t>(n_comp), 0);
        for (const Index v : observed.vertices) hit[static_cast<std::size_t>(comp[v])] = 1;
        *components_without_samples =
            static_cast<int>(std::count(hit.begin(), hit.end(), 0));
    }

    const Index n = laplacian.size();
    Vec mask = Vec::Zero(n);
    for (const Index v : observed.vertices) mask[v] = 1.0;

    Mat out(n, observed.values.cols());
    parallel_for(observed.values.cols(), [&](Index begin, Index end) {
        for (Index c = begin; c < end; ++c) {
            Vec rhs = Vec::Zero(n);
            for (std::size_t a = 0; a < observed.vertices.size(); ++a)
                rhs[observed.vertices[a]] = observed.values(static_cast<Index>(a), c);
            out.col(c) = solve_tikhonov_column(laplacian.matrix, mask, mu, rhs);
        }
    });
    return out;
}

DiffusionOperator make_tikhonov_operator(std::shared_ptr<const LaplacianOperator> laplacian,
                                         std::vector<Index> samples, double mu) {
    if (!(mu > 0.0)) throw invalid_parameter("tikhonov operator: mu must be > 0");
    DiffusionOperator op;
    op.variant = DiffusionVariant::tikhonov;
    op.laplacian = std::move(laplacian);
    op.samples = std::move(samples);
    op.mu = mu;
    return op;
}

DiffusionOperator make_rkhs_operator(std::shared_ptr<const LaplacianOperator> laplacian,
                                     const SpectralKernel& kernel, int cheb_order,
                                     std::vector<Index> samples, double mu) {
    if (mu < 0.0) throw invalid_parameter("rkhs operator: mu must be >= 0");
    const Index m = static_cast<Index>(samples.size());
    if (m == 0) throw invalid_input("rkhs operator: empty sample set");

    const ChebyshevFilter filter =
        chebyshev_coeffs(kernel, cheb_order,
                         std::max(laplacian->lambda_max_bound, 1e-12));

    // K[a,b] = T_{S_a} g [S_b]: one filtering per sample.
    Mat deltas = Mat::Zero(laplacian->size(), m);
    for (Index a = 0; a < m; ++a) deltas(samples[static_cast<std::size_t>(a)], a) = 1.0;
    const Mat atoms = filter_signal(*laplacian, filter, deltas);
    Mat gram(m, m);
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b)
            gram(a, b) = atoms(samples[static_cast<std::size_t>(b)], a);
    gram = ((gram + gram.transpose()) / 2.0).eval(); // kill filtering asymmetry noise

    // Positive definiteness check with one jitter retry.
    Mat k_reg = gram + mu * Mat::Identity(m, m);
    Eigen::LLT<Mat> llt(k_reg);
    if (llt.info() != Eigen::Success) {
        const double jitter = 1e-10 * k_reg.trace() / static_cast<double>(m);
        k_reg += jitter * Mat::Identity(m, m);
        llt.compute(k_reg);
        if (llt.info() != Eigen::Success)
            throw degenerate_input("rkhs operator: Gram matrix is not positive definite");
    }

    DiffusionOperator op;
    op.variant = DiffusionVariant::rkhs;
    op.laplacian = std::move(laplacian);
    op.samples = std::move(samples);
    op.mu = mu;
    op.kernel = kernel;
    op.cheb_order = cheb_order;
    op.gram = gram;
    return op;
}

Mat rkhs_fit(const LaplacianOperator& laplacian, const SpectralKernel& kernel,
             int cheb_order, const ObservedSignal& observed, double mu,
             DiffusionOperator* fitted) {
    check_observed(laplacian, observed);
    auto shared = std::make_shared<LaplacianOperator>(laplacian);
    DiffusionOperator op =
        make_rkhs_operator(shared, kernel, cheb_order, observed.vertices, mu);
    Mat prediction = apply_diffusion(op, observed.values);
    if (fitted) *fitted = std::move(op);
    return prediction;
}

DiffusionOperator chd_operator(std::shared_ptr<const LaplacianOperator> laplacian,
                               const SpectralKernel& kernel, int cheb_order,
                               std::vector<Index> samples, const Vec& atom_norms_sq) {
    const Index n = laplacian->size();
    const Index m = static_cast<Index>(samples.size());
    if (m == 0) throw invalid_input("chd_operator: empty sample set");
    if (atom_norms_sq.size() != n)
        throw invalid_parameter("chd_operator: atom norms must cover every vertex");

    const ChebyshevFilter sq_filter =
        chebyshev_coeffs(kernel.squared(), cheb_order,
                         std::max(laplacian->lambda_max_bound, 1e-12));

    // g^2(L) delta_{S_k} holds <T_i g, T_{S_k} g> for every vertex i.
    Mat deltas = Mat::Zero(n, m);
    for (Index a = 0; a < m; ++a) deltas(samples[static_cast<std::size_t>(a)], a) = 1.0;
    Mat inner = filter_signal(*laplacian, sq_filter, deltas);

    Vec norms = atom_norms_sq.cwiseMax(0.0).cwiseSqrt();
    DiffusionOperator op;
    op.variant = DiffusionVariant::chd;
    op.weights = Mat::Zero(n, m);
    op.degenerate_rows = 0;
    for (Index i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (Index a = 0; a < m; ++a) {
            const double denom = norms[i] * norms[samples[static_cast<std::size_t>(a)]];
            double alpha = denom > 0.0 ? inner(i, a) / denom : 0.0;
            alpha = std::clamp(alpha, 0.0, 1.0); // 1 - lkd with lkd clamped to [0,1]
            op.weights(i, a) = alpha;
            row_sum += alpha;
        }
        if (row_sum <= 1e-12) {
            op.weights.row(i).setConstant(1.0 / static_cast<double>(m));
            ++op.degenerate_rows;
        } else {
            op.weights.row(i) /= row_sum;
        }
    }
    op.laplacian = std::move(laplacian);
    op.samples = std::move(samples);
    op.kernel = kernel;
    op.cheb_order = cheb_order;
    return op;
}

DiffusionOperator make_bootstrap_operator(DiffusionVariant variant, DiffusionOperator chd_stage,
                                          double mu) {
    if (variant != DiffusionVariant::tik_chd && variant != DiffusionVariant::rkhs_chd)
        throw invalid_parameter("make_bootstrap_operator: variant must combine chd");
    if (chd_stage.variant != DiffusionVariant::chd)
        throw invalid_parameter("make_bootstrap_operator: inner stage must be chd");
    DiffusionOperator op = std::move(chd_stage);
    op.variant = variant;
    op.mu = mu;
    return op;
}

Mat apply_diffusion(const DiffusionOperator& op, const Mat& sketch_values) {
    if (sketch_values.rows() != static_cast<Index>(op.samples.size()))
        throw invalid_parameter("apply_diffusion: sketch rows do not match sample count");

    switch (op.variant) {
        case DiffusionVariant::chd:
            return op.weights * sketch_values;
        case DiffusionVariant::tikhonov:
            return tikhonov_diffuse(*op.laplacian, ObservedSignal{op.samples, sketch_values},
                                    op.mu);
        case DiffusionVariant::rkhs: {
            const Index m = static_cast<Index>(op.samples.size());
            Mat k_reg = op.gram + op.mu * Mat::Identity(m, m);
            Eigen::LLT<Mat> llt(k_reg);
            if (llt.info() != Eigen::Success) {
                k_reg += (1e-10 * k_reg.trace() / static_cast<double>(m)) *
                         Mat::Identity(m, m);
                llt.compute(k_reg);
                if (llt.info() != Eigen::Success)
                    throw degenerate_input("apply_diffusion: rkhs system not positive definite");
            }
            const Mat beta = llt.solve(sketch_values);
            Mat deltas = Mat::Zero(op.laplacian->size(), sketch_values.cols());
            for (Index a = 0; a < m; ++a)
                deltas.row(op.samples[static_cast<std::size_t>(a)]) += beta.row(a);
            const ChebyshevFilter filter =
                chebyshev_coeffs(op.kernel, op.cheb_order,
                                 std::max(op.laplacian->lambda_max_bound, 1e-12));
            return filter_signal(*op.laplacian, filter, deltas);
        }
        case DiffusionVariant::tik_chd:
        case DiffusionVariant::rkhs_chd: {
            const Mat full = op.weights * sketch_values;
            Mat at_samples(op.samples.size(), sketch_values.cols());
            for (std::size_t a = 0; a < op.samples.size(); ++a)
                at_samples.row(static_cast<Index>(a)) = full.row(op.samples[a]);
            if (op.variant == DiffusionVariant::tik_chd)
                return tikhonov_diffuse(*op.laplacian,
                                        ObservedSignal{op.samples, at_samples}, op.mu);
            DiffusionOperator rkhs = make_rkhs_operator(op.laplacian, op.kernel, op.cheb_order,
                                                        op.samples, op.mu);
            return apply_diffusion(rkhs, at_samples);
        }
    }
    throw invalid_parameter("apply_diffusion: unknown variant");
}

} // namespace gembed

#include "gembed/dense.hpp"
#include "gembed/errors.hpp"
#include "gembed/transduction.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace gembed;

namespace {

std::shared_ptr<const LaplacianOperator> shared_lap(const SparseGraph& g,
                                                    LaplacianVariant v) {
    return std::make_shared<LaplacianOperator>(laplacian(g, v));
}

} // namespace

TEST_CASE("tikhonov: single edge with one observation solves the 2x2 system") {
    const LaplacianOperator lap =
        laplacian(test::edge_graph(), LaplacianVariant::combinatorial);
    ObservedSignal obs;
    obs.vertices = {0};
    obs.values = Mat::Ones(1, 1);
    const Mat x = tikhonov_diffuse(lap, obs, 1.0);
    // [[2,-1],[-1,1]] x = (1,0): the smooth prior propagates the label.
    CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(x(1, 0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("tikhonov: with everything sampled and tiny mu the data term wins") {
    const SparseGraph g = test::random_graph(30, 21);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::combinatorial);
    ObservedSignal obs;
    obs.vertices.resize(30);
    std::iota(obs.vertices.begin(), obs.vertices.end(), Index{0});
    obs.values = Mat::Random(30, 2);
    const Mat x = tikhonov_diffuse(lap, obs, 1e-12);
    CHECK((x - obs.values).norm() <= 1e-6 * obs.values.norm());
}

TEST_CASE("tikhonov: constant observations reproduce the constant on connected graphs") {
    const SparseGraph g = test::random_graph(40, 22);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::combinatorial);
    ObservedSignal obs;
    obs.vertices = {2, 9, 17, 33};
    obs.values = Mat::Constant(4, 1, 3.25);
    const Mat x = tikhonov_diffuse(lap, obs, 1.0);
    for (Index i = 0; i < 40; ++i) CHECK(x(i, 0) == doctest::Approx(3.25).epsilon(1e-6));
}

TEST_CASE("tikhonov: sample-free components get the zero solution with a warning") {
    std::vector<Eigen::Triplet<double>> edges{{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}};
    const SparseGraph g = graph_from_edges(5, edges);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::combinatorial);
    ObservedSignal obs;
    obs.vertices = {0};
    obs.values = Mat::Constant(1, 1, 2.0);
    int unreached = -1;
    const Mat x = tikhonov_diffuse(lap, obs, 1.0, &unreached);
    CHECK(unreached == 1);
    CHECK(x(3, 0) == doctest::Approx(0.0));
    CHECK(x(4, 0) == doctest::Approx(0.0));
    CHECK(x(0, 0) > 0.5);
}

TEST_CASE("tikhonov: normal equations residual and objective sanity") {
    const SparseGraph g = test::random_graph(60, 23);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::combinatorial);
    Rng rng(77);
    ObservedSignal obs;
    for (Index i = 0; i < 60; i += 4) obs.vertices.push_back(i);
    obs.values.resize(static_cast<Index>(obs.vertices.size()), 1);
    for (Index a = 0; a < obs.values.rows(); ++a) obs.values(a, 0) = rng.normal();
    const double mu = 0.7;
    const Mat x = tikhonov_diffuse(lap, obs, mu);

    Vec mask = Vec::Zero(60), rhs = Vec::Zero(60);
    for (Index a = 0; a < obs.values.rows(); ++a) {
        mask[obs.vertices[static_cast<std::size_t>(a)]] = 1.0;
        rhs[obs.vertices[static_cast<std::size_t>(a)]] = obs.values(a, 0);
    }
    const Vec residual = mask.cwiseProduct(x.col(0)) + mu * (lap.matrix * x.col(0)) - rhs;
    CHECK(residual.norm() <= 1e-8 * rhs.norm());

    const auto objective = [&](const Vec& v) {
        double data = 0.0;
        for (Index a = 0; a < obs.values.rows(); ++a) {
            const double diff = obs.values(a, 0) - v[obs.vertices[static_cast<std::size_t>(a)]];
            data += diff * diff;
        }
        return data + mu * v.dot(lap.matrix * v);
    };
    CHECK(objective(x.col(0)) <= objective(rhs) + 1e-10); // beats naive padding
}

TEST_CASE("tikhonov: parameter validation") {
    const LaplacianOperator lap =
        laplacian(test::edge_graph(), LaplacianVariant::combinatorial);
    ObservedSignal obs;
    obs.vertices = {0};
    obs.values = Mat::Ones(1, 1);
    CHECK_THROWS_AS(tikhonov_diffuse(lap, obs, 0.0), invalid_parameter);
    obs.vertices = {0, 0};
    obs.values = Mat::Ones(2, 1);
    CHECK_THROWS_AS(tikhonov_diffuse(lap, obs, 1.0), invalid_input);
}

TEST_CASE("rkhs: single sample with mu=0 interpolates the observation") {
    const SparseGraph g = test::random_graph(30, 24);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::normalized);
    ObservedSignal obs;
    obs.vertices = {11};
    obs.values = Mat::Constant(1, 1, 2.5);
    const Mat x = rkhs_fit(lap, SpectralKernel::heat(1.0), 60, obs, 0.0);
    CHECK(x(11, 0) == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("rkhs: constant kernel gives ridge-shrunk values on samples, zero off") {
    const SparseGraph g = test::random_graph(20, 25);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::normalized);
    const double c = 2.0, mu = 0.5;
    ObservedSignal obs;
    obs.vertices = {3, 8};
    obs.values.resize(2, 1);
    obs.values << 1.0, -2.0;
    const Mat x = rkhs_fit(lap, SpectralKernel::constant(c), 30, obs, mu);
    CHECK(x(3, 0) == doctest::Approx(c / (c + mu) * 1.0).epsilon(1e-8));
    CHECK(x(8, 0) == doctest::Approx(c / (c + mu) * -2.0).epsilon(1e-8));
    for (const Index i : {0, 5, 12, 19}) CHECK(std::abs(x(i, 0)) <= 1e-8);
}

TEST_CASE("rkhs: ridge shrinkage kills the solution as mu grows") {
    const SparseGraph g = test::random_graph(24, 26);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::normalized);
    ObservedSignal obs;
    obs.vertices = {1, 7, 13};
    obs.values = Mat::Random(3, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (const double mu : {0.1, 10.0, 1000.0, 1e6}) {
        const Mat x = rkhs_fit(lap, SpectralKernel::heat(1.0), 40, obs, mu);
        CHECK(x.norm() < prev);
        prev = x.norm();
    }
    CHECK(prev <= 1e-4);
}

TEST_CASE("rkhs: representer structure, prediction is a combination of sample atoms") {
    const SparseGraph g = test::random_graph(26, 27);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::normalized);
    const SpectralKernel heat = SpectralKernel::heat(1.0);
    const int order = 60;
    ObservedSignal obs;
    obs.vertices = {4, 12, 20};
    obs.values = Mat::Random(3, 1);
    DiffusionOperator op;
    const Mat x = rkhs_fit(lap, heat, order, obs, 0.1, &op);

    // beta from the stored Gram matrix, then sum beta_k T_{S_k} g directly.
    const Mat k_reg = op.gram + 0.1 * Mat::Identity(3, 3);
    const Mat beta = k_reg.llt().solve(obs.values);
    const ChebyshevFilter f = chebyshev_coeffs(heat, order, lap.lambda_max_bound);
    Vec recon = Vec::Zero(26);
    for (Index a = 0; a < 3; ++a)
        recon += beta(a, 0) * localize(lap, f, obs.vertices[static_cast<std::size_t>(a)]).values;
    CHECK((x.col(0) - recon).norm() <= 1e-8);
}

TEST_CASE("chd: single sample broadcasts the sketch row") {
    const SparseGraph g = test::random_graph(18, 28);
    auto lap = shared_lap(g, LaplacianVariant::normalized);
    const SpectralKernel heat = SpectralKernel::heat(1.0);
    const Vec norms = DenseSpectrum(*lap).atom_norms_sq(heat);
    const DiffusionOperator op = chd_operator(lap, heat, 40, {7}, norms);
    Mat sketch(1, 2);
    sketch << 3.0, -1.5;
    const Mat out = apply_diffusion(op, sketch);
    for (Index i = 0; i < 18; ++i) {
        CHECK(out(i, 0) == doctest::Approx(3.0));
        CHECK(out(i, 1) == doctest::Approx(-1.5));
    }
}

TEST_CASE("chd: rows are stochastic and outputs stay in the sketch convex hull") {
    const SparseGraph g = test::random_graph(40, 29);
    auto lap = shared_lap(g, LaplacianVariant::normalized);
    const SpectralKernel heat = SpectralKernel::heat(2.0);
    const Vec norms = DenseSpectrum(*lap).atom_norms_sq(heat);
    const std::vector<Index> samples{0, 5, 11, 23, 31};
    const DiffusionOperator op = chd_operator(lap, heat, 40, samples, norms);

    for (Index i = 0; i < 40; ++i) {
        CHECK(std::abs(op.weights.row(i).sum() - 1.0) <= 1e-10);
        CHECK(op.weights.row(i).minCoeff() >= 0.0);
    }

    Mat sketch = Mat::Random(5, 2);
    const Mat out = apply_diffusion(op, sketch);
    for (Index c = 0; c < 2; ++c) {
        CHECK(out.col(c).minCoeff() >= sketch.col(c).minCoeff() - 1e-12);
        CHECK(out.col(c).maxCoeff() <= sketch.col(c).maxCoeff() + 1e-12);
    }

    // Equal sketch rows broadcast exactly.
    Mat equal = Mat::Zero(5, 2);
    equal.col(0).setConstant(0.7);
    equal.col(1).setConstant(-0.2);
    const Mat bc = apply_diffusion(op, equal);
    for (Index i = 0; i < 40; ++i) {
        CHECK(bc(i, 0) == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(bc(i, 1) == doctest::Approx(-0.2).epsilon(1e-12));
    }
}

TEST_CASE("chd: constant kernel reproduces sketch values at sampled vertices") {
    const SparseGraph g = test::random_graph(25, 30);
    auto lap = shared_lap(g, LaplacianVariant::normalized);
    const SpectralKernel c = SpectralKernel::constant(1.0);
    const Vec norms = DenseSpectrum(*lap).atom_norms_sq(c);
    const std::vector<Index> samples{2, 9, 16};
    const DiffusionOperator op = chd_operator(lap, c, 20, samples, norms);

    // Sampled rows are exact unit rows; unsampled rows degenerate to uniform.
    for (std::size_t a = 0; a < samples.size(); ++a) {
        CHECK(op.weights(samples[a], static_cast<Index>(a)) == doctest::Approx(1.0));
        CHECK(op.weights.row(samples[a]).sum() == doctest::Approx(1.0));
    }
    CHECK(op.degenerate_rows == 25 - 3);

    Mat sketch = Mat::Random(3, 2);
    const Mat out = apply_diffusion(op, sketch);
    for (std::size_t a = 0; a < samples.size(); ++a)
        CHECK((out.row(samples[a]) - sketch.row(static_cast<Index>(a))).norm() <= 1e-12);
}

TEST_CASE("bootstrap: rkhs+chd with everything sampled and mu=0 interpolates") {
    const SparseGraph g = test::random_graph(16, 31);
    auto lap = shared_lap(g, LaplacianVariant::normalized);
    // Constant kernel: the chd stage is the identity on a full sample and the
    // rkhs stage interpolates its observations, so both stages interpolate.
    const SpectralKernel c = SpectralKernel::constant(1.0);
    const Vec norms = DenseSpectrum(*lap).atom_norms_sq(c);
    std::vector<Index> all(16);
    std::iota(all.begin(), all.end(), Index{0});
    DiffusionOperator chd = chd_operator(lap, c, 60, all, norms);
    const DiffusionOperator op =
        make_bootstrap_operator(DiffusionVariant::rkhs_chd, std::move(chd), 0.0);

    Mat sketch = Mat::Random(16, 2);
    const Mat out = apply_diffusion(op, sketch);
    CHECK((out - sketch).norm() <= 1e-6 * sketch.norm());
}

TEST_CASE("diffusion methods commute with vertex relabeling") {
    const Index n = 30;
    const SparseGraph g = test::random_graph(n, 32);
    auto lap = shared_lap(g, LaplacianVariant::combinatorial);

    // Permutation: rotate labels by 7.
    std::vector<Index> perm(n);
    for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = (i + 7) % n;
    std::vector<Eigen::Triplet<double>> edges;
    for (Index r = 0; r < g.adjacency.outerSize(); ++r)
        for (SpMat::InnerIterator it(g.adjacency, r); it; ++it)
            if (it.row() < it.col())
                edges.emplace_back(perm[static_cast<std::size_t>(it.row())],
                                   perm[static_cast<std::size_t>(it.col())], it.value());
    const SparseGraph gp = graph_from_edges(n, edges);
    auto lap_p = shared_lap(gp, LaplacianVariant::combinatorial);

    const std::vector<Index> samples{1, 8, 15, 22};
    std::vector<Index> samples_p;
    for (const Index s : samples) samples_p.push_back(perm[static_cast<std::size_t>(s)]);
    Mat values = Mat::Random(4, 2);

    SUBCASE("tikhonov") {
        const Mat a = tikhonov_diffuse(*lap, {samples, values}, 0.5);
        const Mat b = tikhonov_diffuse(*lap_p, {samples_p, values}, 0.5);
        for (Index i = 0; i < n; ++i)
            CHECK((a.row(i) - b.row(perm[static_cast<std::size_t>(i)])).norm() <= 1e-7);
    }
    SUBCASE("rkhs") {
        const SpectralKernel heat = SpectralKernel::heat(1.0);
        const Mat a = rkhs_fit(*lap, heat, 60, {samples, values}, 0.1);
        const Mat b = rkhs_fit(*lap_p, heat, 60, {samples_p, values}, 0.1);
        for (Index i = 0; i < n; ++i)
            CHECK((a.row(i) - b.row(perm[static_cast<std::size_t>(i)])).norm() <= 1e-7);
    }
    SUBCASE("chd") {
        const SpectralKernel heat = SpectralKernel::heat(1.0);
        const Vec na = DenseSpectrum(*lap).atom_norms_sq(heat);
        const Vec nb = DenseSpectrum(*lap_p).atom_norms_sq(heat);
        const Mat a = apply_diffusion(chd_operator(lap, heat, 60, samples, na), values);
        const Mat b = apply_diffusion(chd_operator(lap_p, heat, 60, samples_p, nb), values);
        for (Index i = 0; i < n; ++i)
            CHECK((a.row(i) - b.row(perm[static_cast<std::size_t>(i)])).norm() <= 1e-7);
    }
}

#include "gembed/pipeline.hpp"

#include "gembed/errors.hpp"
#include "gembed/io.hpp"
#include "gembed/parallel.hpp"
#include "gembed/quality.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace gembed;

TEST_CASE("choose_sample_count: frozen values and passthrough") {
    CHECK(choose_sample_count(70000, SampleRule::plain_log, 0) == 112);
    CHECK(choose_sample_count(70000, SampleRule::classes, 10) == 1116);
    CHECK(choose_sample_count(5000, SampleRule::classes, 2) == 171);
    CHECK(choose_sample_count(123, SampleRule::explicit_count, 64) == 64);
    CHECK(choose_sample_count(100, SampleRule::diameter, 3) == doctest::Approx(139));
    CHECK_THROWS_AS(choose_sample_count(1, SampleRule::plain_log, 0), invalid_parameter);
}

TEST_CASE("sketch_embed_builtin: pca flattens collinear data") {
    Rng rng(3);
    Mat sketch(40, 5);
    Vec direction(5);
    for (Index c = 0; c < 5; ++c) direction[c] = rng.normal();
    direction.normalize();
    for (Index i = 0; i < 40; ++i) sketch.row(i) = (0.1 * i) * direction.transpose();
    const Mat e = sketch_embed_builtin(sketch, SketchEmbedder::pca, 2, 0);
    CHECK(e.rows() == 40);
    CHECK(e.col(1).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("sketch_embed_builtin: eigenmaps separates two sketch clusters") {
    Rng rng(5);
    Mat sketch(40, 3);
    for (Index i = 0; i < 40; ++i) {
        const double center = i < 20 ? -4.0 : 4.0;
        for (Index c = 0; c < 3; ++c) sketch(i, c) = center + 0.1 * rng.normal();
    }
    const Mat e = sketch_embed_builtin(sketch, SketchEmbedder::laplacian_eigenmaps, 1, 0);
    // Piecewise-constant sign-distinct indicator across the two clusters.
    const double a = e.block(0, 0, 20, 1).mean();
    const double b = e.block(20, 0, 20, 1).mean();
    CHECK(a * b < 0.0);
    for (Index i = 0; i < 20; ++i) CHECK(std::abs(e(i, 0) - a) <= 1e-6);
    for (Index i = 20; i < 40; ++i) CHECK(std::abs(e(i, 0) - b) <= 1e-6);
}

TEST_CASE("sketch_embed_builtin: eigenmaps columns are orthogonal") {
    Rng rng(7);
    Mat sketch(50, 4);
    for (Index i = 0; i < 50; ++i)
        for (Index c = 0; c < 4; ++c) sketch(i, c) = rng.normal();
    const Mat e = sketch_embed_builtin(sketch, SketchEmbedder::laplacian_eigenmaps, 2, 0);
    // Generalized eigenvectors are orthogonal in the degree inner product.
    PointCloud cloud;
    cloud.points = sketch;
    const SparseGraph g = build_knn_graph(cloud, 10, Weighting::gaussian);
    const double dot = e.col(0).dot(g.degrees.asDiagonal() * e.col(1));
    CHECK(std::abs(dot) <= 1e-8 * g.degrees.maxCoeff());
}

TEST_CASE("external_embedder_bridge: passthrough, bad row count, non-finite") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "gembed_test_bridge";
    fs::create_directories(dir);

    const auto write_script = [&](const std::string& name, const std::string& body) {
        const fs::path p = dir / name;
        std::ofstream out(p);
        out << "#!/bin/sh\n" << body;
        out.close();
        fs::permissions(p, fs::perms::owner_all, fs::perm_options::add);
        return p.string();
    };

    Mat sketch(3, 2);
    sketch << 1, 2, 3, 4, 5, 6;

    const std::string ok = write_script("ok.sh", "cp \"$1\" \"$2\"\n");
    const Mat out = external_embedder_bridge(sketch, ok, 2);
    CHECK((out - sketch).norm() <= 1e-12);

    const std::string short_rows =
        write_script("short.sh", "head -n 2 \"$1\" > \"$2\"\n");
    CHECK_THROWS_AS(external_embedder_bridge(sketch, short_rows, 2), bridge_error);

    const std::string nan_out =
        write_script("nan.sh", "printf '1,nan\\n2,3\\n4,5\\n' > \"$2\"\n");
    CHECK_THROWS_AS(external_embedder_bridge(sketch, nan_out, 2), bridge_error);

    const std::string fails = write_script("fail.sh", "echo boom >&2\nexit 3\n");
    try {
        external_embedder_bridge(sketch, fails, 2);
        CHECK(false);
    } catch (const bridge_error& e) {
        CHECK(e.stderr_output.find("boom") != std::string::npos);
    }

    const std::string hangs = write_script("hang.sh", "sleep 30\n");
    try {
        external_embedder_bridge(sketch, hangs, 2, 0.3);
        CHECK(false);
    } catch (const bridge_error& e) {
        CHECK(std::string(e.what()).find("timed out") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("compressive_embed: identity conditions reproduce the input geometry") {
    // Full-rank 3D data, PCA at d = K, constant kernel, chd over a sample set
    // that covers every vertex: the output is the input up to centering and
    // an orthogonal map, so pairwise distances survive.
    const Index n = 32;
    Rng rng(41);
    PointCloud data;
    data.points.resize(n, 3);
    for (Index i = 0; i < n; ++i)
        for (Index c = 0; c < 3; ++c) data.points(i, c) = rng.normal();

    PipelineConfig config;
    config.k_neighbors = 5;
    config.kernel = SpectralKernel::constant(1.0);
    config.sampling = SamplingKind::uniform;
    config.sample_rule = SampleRule::explicit_count;
    config.explicit_samples = 400; // coupon collector: covers all 32 vertices
    config.embedder = SketchEmbedder::pca;
    config.diffusion = DiffusionVariant::chd;
    config.dim = 3;
    config.seed = 9;

    const EmbedResult result = compressive_embed(data, config);
    REQUIRE(static_cast<Index>(result.sketch.sample_vertices.size()) == n);

    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double din = (data.points.row(i) - data.points.row(j)).norm();
            const double dout = (result.embedding.row(i) - result.embedding.row(j)).norm();
            CHECK(dout == doctest::Approx(din).epsilon(1e-8));
        }
}

TEST_CASE("compressive_embed: separated blobs stay separated") {
    const PointCloud data = test::two_blobs(1000, 10, 10.0, 51);

    PipelineConfig config;
    config.k_neighbors = 10;
    config.kernel = SpectralKernel::heat(5.0);
    config.sampling = SamplingKind::adapted;
    config.sample_rule = SampleRule::classes;
    config.n_classes = 2;
    config.embedder = SketchEmbedder::laplacian_eigenmaps;
    config.diffusion = DiffusionVariant::chd;
    config.dim = 2;
    config.seed = 4;

    const EmbedResult result = compressive_embed(data, config);
    const LabeledEmbedding le = make_labeled_embedding(result.embedding, data.labels, 10);
    CHECK(aci(le) <= 0.2);

    // Configuration-independence of the qualitative outcome.
    config.diffusion = DiffusionVariant::rkhs;
    config.mu = 0.01;
    config.sampling = SamplingKind::uniform;
    config.embedder = SketchEmbedder::pca;
    const EmbedResult rkhs_run = compressive_embed(data, config);
    CHECK(aci(make_labeled_embedding(rkhs_run.embedding, data.labels, 10)) <= 0.2);
}

TEST_CASE("compressive_embed: bit-identical under a fixed seed") {
    const PointCloud data = test::two_blobs(300, 6, 6.0, 61);
    PipelineConfig config;
    config.k_neighbors = 8;
    config.sample_rule = SampleRule::plain_log;
    config.seed = 123;
    const EmbedResult a = compressive_embed(data, config);
    const EmbedResult b = compressive_embed(data, config);
    CHECK(a.embedding == b.embedding);
    CHECK(a.sketch.sample_vertices == b.sketch.sample_vertices);
}

TEST_CASE("compressive_embed: sample list does not depend on the embedder") {
    const PointCloud data = test::two_blobs(300, 6, 6.0, 71);
    PipelineConfig config;
    config.k_neighbors = 8;
    config.sample_rule = SampleRule::plain_log;
    config.seed = 5;
    config.embedder = SketchEmbedder::laplacian_eigenmaps;
    const EmbedResult a = compressive_embed(data, config);
    config.embedder = SketchEmbedder::pca;
    const EmbedResult b = compressive_embed(data, config);
    CHECK(a.sketch.sample_vertices == b.sketch.sample_vertices);
}

TEST_CASE("compressive_embed: sampled chd rows reproduce sketch values end to end") {
    const PointCloud data = test::two_blobs(200, 4, 6.0, 81);
    PipelineConfig config;
    config.k_neighbors = 6;
    config.kernel = SpectralKernel::constant(1.0);
    config.sampling = SamplingKind::uniform;
    config.sample_rule = SampleRule::explicit_count;
    config.explicit_samples = 40;
    config.embedder = SketchEmbedder::pca;
    config.diffusion = DiffusionVariant::chd;
    config.seed = 31;
    const EmbedResult r = compressive_embed(data, config);
    for (std::size_t a = 0; a < r.sketch.sample_vertices.size(); ++a) {
        const Index v = r.sketch.sample_vertices[a];
        CHECK((r.embedding.row(v) - r.sketch.sketch_embedding.row(static_cast<Index>(a)))
                  .norm() <= 1e-10);
    }
}

TEST_CASE("compressive_embed: results are independent of the thread cap") {
    const PointCloud data = test::two_blobs(400, 5, 6.0, 93);
    PipelineConfig config;
    config.k_neighbors = 8;
    config.sample_rule = SampleRule::plain_log;
    config.seed = 77;

    set_max_threads(1);
    const EmbedResult serial = compressive_embed(data, config);
    set_max_threads(4);
    const EmbedResult parallel = compressive_embed(data, config);
    set_max_threads(0);
    CHECK(serial.embedding == parallel.embedding);
    CHECK(serial.sketch.sample_vertices == parallel.sketch.sample_vertices);
}

TEST_CASE("compressive_embed: separate diffusion kernel override") {
    const PointCloud data = test::two_blobs(200, 4, 6.0, 95);
    PipelineConfig config;
    config.k_neighbors = 6;
    config.kernel = SpectralKernel::heat(5.0); // sampling kernel
    config.sampling = SamplingKind::adapted;
    config.sample_rule = SampleRule::explicit_count;
    config.explicit_samples = 40;
    config.embedder = SketchEmbedder::pca;
    config.diffusion = DiffusionVariant::chd;
    config.diffusion_kernel = SpectralKernel::constant(1.0);
    config.seed = 21;

    // With a constant diffusion kernel, chd reproduces sketch values at the
    // sampled vertices even though sampling used the heat kernel.
    const EmbedResult r = compressive_embed(data, config);
    for (std::size_t a = 0; a < r.sketch.sample_vertices.size(); ++a) {
        const Index v = r.sketch.sample_vertices[a];
        CHECK((r.embedding.row(v) - r.sketch.sketch_embedding.row(static_cast<Index>(a)))
                  .norm() <= 1e-10);
    }
}

TEST_CASE("compressive_embed: timing breakdown covers the six steps") {
    const PointCloud data = test::two_blobs(200, 4, 6.0, 91);
    PipelineConfig config;
    config.k_neighbors = 6;
    config.sample_rule = SampleRule::plain_log;
    const EmbedResult r = compressive_embed(data, config);
    for (const char* key :
         {"graph", "sampling", "sketch", "sketch_embed", "diffusion_fit", "diffusion_apply"})
        CHECK(r.sketch.step_seconds.count(key) == 1);
}

#include "gembed/pipeline.hpp"

#include "gembed/dense.hpp"
#include "gembed/errors.hpp"
#include "gembed/io.hpp"
#include "gembed/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <csignal>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace gembed {

namespace {

// Substream ids for seed derivation; stable across releases.
enum SeedStream : std::uint64_t {
    kSeedSampling = 1,
    kSeedAtomNorms = 2,
    kSeedDiameter = 3,
    kSeedEmbedder = 4,
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void fix_column_signs(Mat& m) {
    for (Index c = 0; c < m.cols(); ++c) {
        Index arg = 0;
        m.col(c).cwiseAbs().maxCoeff(&arg);
        if (m(arg, c) < 0.0) m.col(c) = -m.col(c);
    }
}

Mat pca_embed(const Mat& sketch, int dim) {
    const Mat centered = sketch.rowwise() - sketch.colwise().mean();
    Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int avail = static_cast<int>(svd.singularValues().size());
    if (dim > avail)
        throw invalid_parameter("sketch_embed_builtin: pca dimension exceeds feature rank");
    Mat scores =
        svd.matrixU().leftCols(dim) * svd.singularValues().head(dim).asDiagonal();
    fix_column_signs(scores);
    return scores;
}

Mat eigenmaps_embed(const Mat& sketch, int dim) {
    const Index m = sketch.rows();
    if (m < dim + 1)
        throw invalid_parameter("sketch_embed_builtin: sketch too small for the dimension");
    PointCloud cloud;
    cloud.points = sketch;
    const int k = std::min<Index>(10, m - 1);
    const SparseGraph g = build_knn_graph(cloud, k, Weighting::gaussian);
    const LaplacianOperator lap = laplacian(g, LaplacianVariant::normalized);
    Eigen::SelfAdjointEigenSolver<Mat> solver(Mat(lap.matrix));
    if (solver.info() != Eigen::Success)
        throw error("sketch_embed_builtin: eigenmaps eigensolver failed");
    // Bottom d+1 eigenvectors with the constant direction deflated out; when
    // the zero eigenvalue is degenerate (disconnected sketch) the solver's
    // basis is arbitrary, so removing D^1/2 1 explicitly is what makes
    // "skip the constant" well defined.
    Mat bottom = solver.eigenvectors().leftCols(dim + 1);
    Vec w = g.degrees.array().sqrt();
    w.normalize();
    bottom -= w * (w.transpose() * bottom);
    Eigen::ColPivHouseholderQR<Mat> qr(bottom);
    Mat q = qr.householderQ() * Mat::Identity(m, dim);
    // Mapping through D^-1/2 turns the symmetric eigenvectors into
    // generalized ones (L f = lambda D f), piecewise constant on components.
    const Vec inv_sqrt_deg = g.degrees.array().sqrt().inverse();
    Mat coords = inv_sqrt_deg.asDiagonal() * q;
    for (Index c = 0; c < coords.cols(); ++c) coords.col(c).normalize();
    fix_column_signs(coords);
    return coords;
}

} // namespace

Index choose_sample_count(Index n, SampleRule rule, double aux) {
    if (n < 2) throw invalid_parameter("choose_sample_count: need N >= 2");
    const double log_n = std::log(static_cast<double>(n));
    switch (rule) {
        case SampleRule::explicit_count:
            if (!(aux >= 1.0))
                throw invalid_parameter("choose_sample_count: explicit count must be >= 1");
            return static_cast<Index>(aux);
        case SampleRule::plain_log:
            return static_cast<Index>(std::ceil(10.0 * log_n));
        case SampleRule::classes:
            if (!(aux >= 1.0))
                throw invalid_parameter("choose_sample_count: class count must be >= 1");
            return static_cast<Index>(std::ceil(10.0 * aux * log_n));
        case SampleRule::diameter:
            if (!(aux >= 1.0))
                throw invalid_parameter("choose_sample_count: diameter must be >= 1");
            return static_cast<Index>(std::ceil(10.0 * aux * log_n));
    }
    throw invalid_parameter("choose_sample_count: unknown rule");
}

Mat sketch_embed_builtin(const Mat& sketch, SketchEmbedder method, int dim,
                         std::uint64_t seed) {
    (void)seed; // both built-in embedders are deterministic
    if (dim < 1) throw invalid_parameter("sketch_embed_builtin: dimension must be >= 1");
    if (sketch.rows() < dim + 1)
        throw invalid_parameter("sketch_embed_builtin: need at least d+1 sketch rows");
    switch (method) {
        case SketchEmbedder::pca: return pca_embed(sketch, dim);
        case SketchEmbedder::laplacian_eigenmaps: return eigenmaps_embed(sketch, dim);
        case SketchEmbedder::external:
            throw invalid_parameter("sketch_embed_builtin: external embedder has no builtin");
    }
    throw invalid_parameter("sketch_embed_builtin: unknown method");
}

Mat external_embedder_bridge(const Mat& sketch, const std::string& command, int dim,
                             double timeout_sec) {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() /
        ("gembed_bridge_" + std::to_string(::getpid()) + "_" +
         std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(dir);
    const fs::path in_csv = dir / "in.csv";
    const fs::path out_csv = dir / "out.csv";
    const fs::path err_txt = dir / "stderr.txt";

    struct Cleanup {
        fs::path d;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(d, ec);
        }
    } cleanup{dir};

    write_matrix_csv(in_csv.string(), sketch);

    std::ostringstream cmd;
    cmd << command << " " << in_csv << " " << out_csv << " " << dim << " 2>" << err_txt;
    const std::string cmdline = cmd.str();

    const pid_t pid = ::fork();
    if (pid < 0) throw bridge_error("external embedder: fork failed", "");
    if (pid == 0) {
        ::execl("/bin/sh", "sh", "-c", cmdline.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }

    const auto t0 = std::chrono::steady_clock::now();
    int status = 0;
    for (;;) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0) throw bridge_error("external embedder: waitpid failed", "");
        if (seconds_since(t0) > timeout_sec) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            throw bridge_error("external embedder: timed out", "");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }

    std::string captured;
    if (std::ifstream err_in(err_txt); err_in) {
        std::ostringstream ss;
        ss << err_in.rdbuf();
        captured = ss.str();
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw bridge_error("external embedder: command failed", captured);

    Mat out;
    try {
        out = read_matrix_csv(out_csv.string());
    } catch (const std::exception& e) {
        throw bridge_error(std::string("external embedder: unreadable output: ") + e.what(),
                           captured);
    }
    if (out.rows() != sketch.rows())
        throw bridge_error("external embedder: wrong row count in output", captured);
    if (out.cols() != dim)
        throw bridge_error("external embedder: wrong column count in output", captured);
    if (!out.allFinite())
        throw bridge_error("external embedder: non-finite value in output", captured);
    return out;
}

EmbedResult compressive_embed(const PointCloud& data, const PipelineConfig& config) {
    if (config.dim < 1) throw invalid_parameter("compressive_embed: dimension must be >= 1");
    EmbedResult result;
    SketchResult& sk = result.sketch;

    // Step 1: similarity graph.
    auto t0 = std::chrono::steady_clock::now();
    const SparseGraph graph = build_knn_graph(data, config.k_neighbors, config.weighting);
    auto lap = std::make_shared<LaplacianOperator>(
        laplacian(graph, config.laplacian_variant));
    sk.step_seconds["graph"] = seconds_since(t0);

    // Step 2: sample M vertices.
    t0 = std::chrono::steady_clock::now();
    double aux = 0.0;
    switch (config.sample_rule) {
        case SampleRule::explicit_count: aux = static_cast<double>(config.explicit_samples); break;
        case SampleRule::classes: {
            int c = config.n_classes;
            if (c == 0 && data.has_labels()) {
                std::set<int> ids;
                for (const int l : data.labels)
                    if (l != kUnlabeled) ids.insert(l);
                c = static_cast<int>(ids.size());
            }
            if (c < 1)
                throw invalid_parameter(
                    "compressive_embed: classes rule needs labels or an explicit count");
            aux = static_cast<double>(c);
            break;
        }
        case SampleRule::diameter:
            aux = static_cast<double>(
                approx_diameter(graph, derive_seed(config.seed, kSeedDiameter)));
            break;
        case SampleRule::plain_log: break;
    }
    const Index m = choose_sample_count(data.size(), config.sample_rule, aux);
    if (m < config.dim + 1)
        throw invalid_parameter("compressive_embed: sample count below d+1");

    const ChebyshevFilter filter = chebyshev_coeffs(
        config.kernel, config.cheb_order, std::max(lap->lambda_max_bound, 1e-12));
    SamplingDistribution dist;
    Vec sampling_norms; // raw estimates, reused by chd when kernels coincide
    if (config.sampling == SamplingKind::uniform) {
        dist = uniform_distribution(data.size());
    } else {
        sampling_norms = estimate_atom_norms(*lap, filter, config.atom_norm_probes,
                                             derive_seed(config.seed, kSeedAtomNorms));
        dist = adapted_distribution(sampling_norms);
    }
    const SampleSet samples = draw_samples(dist, m, derive_seed(config.seed, kSeedSampling));
    sk.sample_vertices = samples.unique_vertices();
    sk.samples_requested = m;
    sk.step_seconds["sampling"] = seconds_since(t0);

    // Step 3: sketch = sampled data rows (trivial index mapping).
    t0 = std::chrono::steady_clock::now();
    const Index m_unique = static_cast<Index>(sk.sample_vertices.size());
    sk.sketch.resize(m_unique, data.dim());
    for (Index a = 0; a < m_unique; ++a)
        sk.sketch.row(a) = data.points.row(sk.sample_vertices[static_cast<std::size_t>(a)]);
    sk.step_seconds["sketch"] = seconds_since(t0);

    // Step 4: embed the sketch.
    t0 = std::chrono::steady_clock::now();
    if (config.embedder == SketchEmbedder::external)
        sk.sketch_embedding = external_embedder_bridge(sk.sketch, config.external_command,
                                                       config.dim, config.external_timeout_sec);
    else
        sk.sketch_embedding = sketch_embed_builtin(sk.sketch, config.embedder, config.dim,
                                                   derive_seed(config.seed, kSeedEmbedder));
    sk.step_seconds["sketch_embed"] = seconds_since(t0);

    // Step 5: fit the diffusion operator.
    t0 = std::chrono::steady_clock::now();
    const SpectralKernel diff_kernel = config.diffusion_kernel.value_or(config.kernel);
    DiffusionOperator op;
    switch (config.diffusion) {
        case DiffusionVariant::tikhonov:
            op = make_tikhonov_operator(lap, sk.sample_vertices, config.mu);
            break;
        case DiffusionVariant::rkhs:
            op = make_rkhs_operator(lap, diff_kernel, config.cheb_order, sk.sample_vertices,
                                    config.mu);
            break;
        case DiffusionVariant::chd:
        case DiffusionVariant::tik_chd:
        case DiffusionVariant::rkhs_chd: {
            Vec norms;
            const bool same_kernel = !config.diffusion_kernel.has_value();
            if (same_kernel && sampling_norms.size() > 0)
                norms = sampling_norms;
            else
                norms = estimate_atom_norms(*lap,
                                            chebyshev_coeffs(diff_kernel, config.cheb_order,
                                                             std::max(lap->lambda_max_bound,
                                                                      1e-12)),
                                            config.atom_norm_probes,
                                            derive_seed(config.seed, kSeedAtomNorms));
            DiffusionOperator chd =
                chd_operator(lap, diff_kernel, config.cheb_order, sk.sample_vertices, norms);
            sk.chd_degenerate_rows = chd.degenerate_rows;
            op = config.diffusion == DiffusionVariant::chd
                     ? std::move(chd)
                     : make_bootstrap_operator(config.diffusion, std::move(chd), config.mu);
            break;
        }
    }
    sk.step_seconds["diffusion_fit"] = seconds_since(t0);

    // Step 6: apply it.
    t0 = std::chrono::steady_clock::now();
    if (config.diffusion == DiffusionVariant::tikhonov) {
        int unreached = 0;
        result.embedding = tikhonov_diffuse(
            *lap, ObservedSignal{sk.sample_vertices, sk.sketch_embedding}, config.mu,
            &unreached);
        sk.components_without_samples = unreached;
    } else {
        result.embedding = apply_diffusion(op, sk.sketch_embedding);
    }
    sk.step_seconds["diffusion_apply"] = seconds_since(t0);
    return result;
}

} // namespace gembed

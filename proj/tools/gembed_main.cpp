// gembed: compressive embedding toolkit command line.
//
// Subcommands: embed, synth, score, dist, bounds, plot. Reports are flat
// key=value lines on stdout; output files are written atomically.

#include "gembed/dense.hpp"
#include "gembed/errors.hpp"
#include "gembed/io.hpp"
#include "gembed/metrics.hpp"
#include "gembed/parallel.hpp"
#include "gembed/pipeline.hpp"
#include "gembed/quality.hpp"
#include "gembed/sampling.hpp"
#include "gembed/svg.hpp"
#include "gembed/synthdata.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace gembed;

SampleRule parse_sample_rule(const std::string& text, Index& explicit_m) {
    if (text == "auto" || text == "auto:plain") return SampleRule::plain_log;
    if (text == "auto:classes") return SampleRule::classes;
    if (text == "auto:diameter") return SampleRule::diameter;
    try {
        explicit_m = std::stol(text);
    } catch (...) {
        throw CLI::ValidationError("--num-samples",
                                   "expected a count or auto[:classes|:diameter|:plain]");
    }
    return SampleRule::explicit_count;
}

const std::map<std::string, DiffusionVariant>& diffusion_names() {
    static const std::map<std::string, DiffusionVariant> names{
        {"tikhonov", DiffusionVariant::tikhonov},
        {"rkhs", DiffusionVariant::rkhs},
        {"chd", DiffusionVariant::chd},
        {"tik+chd", DiffusionVariant::tik_chd},
        {"rkhs+chd", DiffusionVariant::rkhs_chd}};
    return names;
}

int run_embed(const std::string& input, int knn, const std::string& kernel_spec,
              const std::string& sampling, const std::string& num_samples,
              const std::string& embedder, const std::string& diffusion, double mu, int dim,
              std::uint64_t seed, const std::string& output, const std::string& sketch_out,
              const std::string& svg_out, const std::string& external_cmd) {
    const PointCloud data = read_points_csv(input);

    PipelineConfig config;
    config.k_neighbors = knn;
    config.kernel = parse_kernel_spec(kernel_spec);
    config.sampling = sampling == "uniform" ? SamplingKind::uniform : SamplingKind::adapted;
    config.sample_rule = parse_sample_rule(num_samples, config.explicit_samples);
    config.embedder = embedder == "pca"        ? SketchEmbedder::pca
                      : embedder == "external" ? SketchEmbedder::external
                                               : SketchEmbedder::laplacian_eigenmaps;
    config.external_command = external_cmd;
    if (!diffusion_names().count(diffusion))
        throw invalid_parameter("embed: unknown diffusion '" + diffusion + "'");
    config.diffusion = diffusion_names().at(diffusion);
    config.mu = mu;
    config.dim = dim;
    config.seed = seed;

    const EmbedResult result = compressive_embed(data, config);
    write_embedding_csv(output, result.embedding);
    if (!sketch_out.empty()) write_matrix_csv(sketch_out, result.sketch.sketch);
    if (!svg_out.empty()) plot_svg(result.embedding, data.labels, svg_out);

    std::printf("config.input=%s\n", input.c_str());
    std::printf("config.knn=%d\n", knn);
    std::printf("config.kernel=%s\n", config.kernel.spec_string().c_str());
    std::printf("config.sampling=%s\n", sampling.c_str());
    std::printf("config.embedder=%s\n", embedder.c_str());
    std::printf("config.diffusion=%s\n", diffusion.c_str());
    std::printf("config.dim=%d\n", dim);
    std::printf("config.seed=%llu\n", static_cast<unsigned long long>(seed));
    std::printf("samples.requested=%lld\n",
                static_cast<long long>(result.sketch.samples_requested));
    std::printf("samples.unique=%zu\n", result.sketch.sample_vertices.size());
    double total = 0.0;
    for (const auto& [step, sec] : result.sketch.step_seconds) {
        total += sec;
        std::printf("time.%s=%.6f\n", step.c_str(), sec);
    }
    std::printf("time.total=%.6f\n", total);
    std::printf("warnings.chd_degenerate_rows=%d\n", result.sketch.chd_degenerate_rows);
    std::printf("warnings.components_without_samples=%d\n",
                result.sketch.components_without_samples);
    std::printf("output=%s\n", output.c_str());
    return 0;
}

int run_synth(const std::string& family, int classes, Index n, double morph, double noise,
              std::uint64_t seed, const std::string& output) {
    SyntheticSpec spec;
    if (family == "circle")
        spec.family = SynthFamily::circle;
    else if (family == "checkerboard")
        spec.family = SynthFamily::checkerboard;
    else if (family == "bands")
        spec.family = SynthFamily::bands;
    else
        throw invalid_parameter("synth: unknown family '" + family + "'");
    spec.n_classes = classes;
    spec.n_points = n;
    spec.morph = morph;
    spec.noise_std = noise;
    spec.seed = seed;
    const PointCloud cloud = generate(spec);
    write_points_csv(output, cloud);
    std::printf("family=%s\nn=%lld\nclasses=%d\nmorph=%g\nseed=%llu\noutput=%s\n",
                family.c_str(), static_cast<long long>(n), classes, morph,
                static_cast<unsigned long long>(seed), output.c_str());
    return 0;
}

int run_score(const std::string& embedding_path, const std::string& labels_path,
              const std::string& labels_from, const std::string& metrics,
              const std::string& acc_mode, int pairs_per_point,
              const std::string& kernel_spec, int knn, std::uint64_t seed) {
    const Mat embedding = read_embedding_csv(embedding_path);
    std::vector<int> labels;
    if (!labels_from.empty())
        labels = read_points_csv(labels_from).labels;
    else if (!labels_path.empty())
        labels = read_labels_csv(labels_path);
    if (labels.empty()) throw invalid_input("score: no labels available");

    const LabeledEmbedding le = make_labeled_embedding(embedding, labels, knn);

    std::stringstream metric_list(metrics);
    std::string metric;
    while (std::getline(metric_list, metric, ',')) {
        if (metric == "aci") {
            std::printf("aci=%.10g\n", aci(le));
        } else if (metric == "acc") {
            const LaplacianOperator lap = laplacian(le.graph, LaplacianVariant::normalized);
            const SpectralKernel kernel =
                kernel_spec.empty() ? default_acc_kernel(lap) : parse_kernel_spec(kernel_spec);
            const AccResult r = acc_mode == "exact"
                                    ? acc_exact(lap, kernel, 30, le)
                                    : acc_randomized(lap, kernel, 30, le, pairs_per_point,
                                                     seed);
            std::printf("acc=%.10g\n", r.total);
            for (const auto& [c, v] : r.per_class) std::printf("acc.class.%d=%.10g\n", c, v);
        } else {
            throw invalid_parameter("score: unknown metric '" + metric + "'");
        }
    }
    return 0;
}

int run_dist(const std::string& input, const std::string& graph_path, int knn,
             const std::string& kernel_spec, const std::string& metric,
             const std::string& pairs_path, int order, const std::string& output) {
    SparseGraph graph;
    if (!graph_path.empty()) {
        graph = read_edge_list(graph_path);
    } else if (!input.empty()) {
        const PointCloud data = read_points_csv(input);
        graph = build_knn_graph(data, knn, Weighting::gaussian);
    } else {
        throw invalid_parameter("dist: need --input or --graph");
    }
    if (metric != "lkd" && metric != "kdd")
        throw invalid_parameter("dist: unknown metric '" + metric + "'");
    const LaplacianOperator lap = laplacian(graph, LaplacianVariant::normalized);
    const SpectralKernel kernel = parse_kernel_spec(kernel_spec);
    const ChebyshevFilter filter =
        chebyshev_coeffs(kernel, order, std::max(lap.lambda_max_bound, 1e-12));

    std::ifstream pairs(pairs_path);
    if (!pairs) throw invalid_input("dist: cannot open pairs file: " + pairs_path);
    std::ostringstream out;
    Index i = 0, j = 0;
    while (pairs >> i >> j) {
        const double d = metric == "lkd" ? lkd(lap, filter, i, j) : kdd(lap, filter, i, j);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", d);
        out << i << " " << j << " " << buf << "\n";
    }
    if (output.empty())
        std::fputs(out.str().c_str(), stdout);
    else
        atomic_write_text(output, out.str());
    return 0;
}

int run_bounds(int theorem, double delta, double eps, int k, double ratio2, double a_factor) {
    BoundInputs in;
    in.delta = delta;
    in.eps = eps;
    in.k = k;
    in.ratio2 = ratio2;
    in.a_factor = a_factor;
    const Index m = theorem == 1 ? bound_samples_embedding(in) : bound_samples_node(in);
    std::printf("M=%lld\n", static_cast<long long>(m));
    return 0;
}

int run_plot(const std::string& embedding_path, const std::string& labels_path,
             const std::string& output) {
    const Mat embedding = read_embedding_csv(embedding_path);
    std::vector<int> labels;
    if (!labels_path.empty()) labels = read_labels_csv(labels_path);
    const bool wrapped = plot_svg(embedding, labels, output);
    if (wrapped)
        std::fprintf(stderr, "warning: more than 16 classes, palette colors repeat\n");
    std::printf("output=%s\n", output.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressive embedding: sketch, embed, diffuse, and score"};
    app.require_subcommand(1);
    int threads = 0;

    // embed
    auto* embed = app.add_subcommand("embed", "Run the compressive embedding pipeline");
    std::string input, output, sketch_out, svg_out, external_cmd;
    std::string kernel_spec = "heat:tau=5", sampling = "adapted", num_samples = "auto";
    std::string embedder = "eigenmaps", diffusion = "chd";
    int knn = 10, dim = 2;
    double mu = 1.0;
    std::uint64_t seed = 0;
    embed->add_option("--input", input, "Point cloud CSV")->required();
    embed->add_option("--knn", knn, "Neighbors for the similarity graph");
    embed->add_option("--kernel", kernel_spec,
                      "Kernel spec: heat:tau=5 | window:a=1,bmax=0.2 | rect:cutoff=0.3");
    embed->add_option("--sampling", sampling, "uniform|adapted");
    embed->add_option("--num-samples", num_samples,
                      "Count or auto[:classes|:diameter|:plain]");
    embed->add_option("--embedder", embedder, "eigenmaps|pca|external");
    embed->add_option("--external-command", external_cmd,
                      "Embedder invoked as: cmd in.csv out.csv d");
    embed->add_option("--diffusion", diffusion, "tikhonov|rkhs|chd|tik+chd|rkhs+chd");
    embed->add_option("--mu", mu, "Ridge / smoothness weight");
    embed->add_option("--dim", dim, "Target dimension")->check(CLI::IsMember({2, 3}));
    embed->add_option("--seed", seed, "Base seed; all randomness derives from it");
    embed->add_option("--output", output, "Embedding CSV path")->required();
    embed->add_option("--sketch-out", sketch_out, "Optional sketch CSV path");
    embed->add_option("--svg", svg_out, "Optional SVG scatter path (dim 2)");
    embed->add_option("--threads", threads, "Worker thread cap (0 = auto)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
    std::string family = "bands";
    int classes = 4;
    Index n_points = 1000;
    double morph = 0.0, noise = 0.01;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--family", family, "bands|circle|checkerboard");
    synth->add_option("--classes", classes, "Class count (bands/circle 2-5, checker 4|16)");
    synth->add_option("--n", n_points, "Number of points");
    synth->add_option("--morph", morph, "Deformation parameter in [0,1]");
    synth->add_option("--noise", noise, "Gaussian noise std");
    synth->add_option("--seed", synth_seed, "Seed");
    synth->add_option("--output,-o", synth_out, "Points CSV path (labels in final column)")
        ->required();
    synth->add_option("--threads", threads, "Worker thread cap (0 = auto)");

    // score
    auto* score = app.add_subcommand("score", "Quality metrics of a labeled embedding");
    std::string emb_path, labels_path, labels_from, metrics = "aci", acc_mode = "random";
    std::string score_kernel;
    int ppp = 20, score_knn = 10;
    std::uint64_t score_seed = 7;
    score->add_option("--embedding", emb_path, "Embedding CSV")->required();
    score->add_option("--labels", labels_path, "Labels CSV (single column or labeled points)");
    score->add_option("--labels-from", labels_from, "Points CSV with a label column");
    score->add_option("--metrics", metrics, "Comma list: aci,acc");
    score->add_option("--acc-mode", acc_mode, "exact|random");
    score->add_option("--pairs-per-point", ppp, "Randomized acc pairs per point");
    score->add_option("--kernel", score_kernel, "Kernel for acc (default heat tau=10/lmax)");
    score->add_option("--knn", score_knn, "Neighbors for the embedding graph");
    score->add_option("--seed", score_seed, "Seed for the randomized acc");
    score->add_option("--threads", threads, "Worker thread cap (0 = auto)");

    // dist
    auto* dist = app.add_subcommand("dist", "Pairwise localized-kernel distances");
    std::string dist_input, dist_graph, dist_metric = "kdd", pairs_path, dist_out;
    std::string dist_kernel = "heat:tau=5";
    int dist_knn = 10, dist_order = 30;
    dist->add_option("--input", dist_input, "Point cloud CSV (builds a kNN graph)");
    dist->add_option("--graph", dist_graph, "Edge list file (alternative to --input)");
    dist->add_option("--knn", dist_knn, "Neighbors when building from points");
    dist->add_option("--kernel", dist_kernel, "Kernel spec");
    dist->add_option("--order", dist_order, "Chebyshev order");
    dist->add_option("--metric", dist_metric, "lkd|kdd");
    dist->add_option("--pairs", pairs_path, "File of `i j` lines")->required();
    dist->add_option("--output,-o", dist_out, "Output path (default stdout)");
    dist->add_option("--threads", threads, "Worker thread cap (0 = auto)");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Sample-count bounds");
    int theorem = 1, bounds_k = 1;
    double bounds_delta = 0.5, bounds_eps = 0.1, bounds_ratio2 = 1.0, bounds_a = 1.0;
    bounds->add_option("--theorem", theorem, "1 (energy embedding) or 2 (per node)")
        ->check(CLI::IsMember({1, 2}));
    bounds->add_option("--delta", bounds_delta, "Accuracy in (0,1)")->required();
    bounds->add_option("--eps", bounds_eps, "Failure probability in (0,1)")->required();
    bounds->add_option("--k", bounds_k, "Kernel rank")->required();
    bounds->add_option("--ratio2", bounds_ratio2, "||g||_2^2/||g||_inf^2 (theorem 1)");
    bounds->add_option("--a", bounds_a, "Node factor a (theorem 2)");

    // plot
    auto* plot = app.add_subcommand("plot", "Static SVG scatter of a 2D embedding");
    std::string plot_emb, plot_labels, plot_out;
    plot->add_option("--embedding", plot_emb, "Embedding CSV")->required();
    plot->add_option("--labels", plot_labels, "Labels CSV (optional)");
    plot->add_option("--output,-o", plot_out, "SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2, --help exits 0
    }
    gembed::set_max_threads(threads);

    try {
        if (embed->parsed())
            return run_embed(input, knn, kernel_spec, sampling, num_samples, embedder,
                             diffusion, mu, dim, seed, output, sketch_out, svg_out,
                             external_cmd);
        if (synth->parsed())
            return run_synth(family, classes, n_points, morph, noise, synth_seed, synth_out);
        if (score->parsed())
            return run_score(emb_path, labels_path, labels_from, metrics, acc_mode, ppp,
                             score_kernel, score_knn, score_seed);
        if (dist->parsed())
            return run_dist(dist_input, dist_graph, dist_knn, dist_kernel, dist_metric,
                            pairs_path, dist_order, dist_out);
        if (bounds->parsed())
            return run_bounds(theorem, bounds_delta, bounds_eps, bounds_k, bounds_ratio2,
                              bounds_a);
        if (plot->parsed()) return run_plot(plot_emb, plot_labels, plot_out);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2; // late-validated flag values are still usage errors
    } catch (const gembed::bridge_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        if (!e.stderr_output.empty())
            std::fprintf(stderr, "embedder stderr:\n%s", e.stderr_output.c_str());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

// Python bindings for the compressive embedding core. Matrices cross the
// boundary as numpy arrays via Eigen; graphs, Laplacians, kernels and filters
// are opaque handles.

#include "gembed/dense.hpp"
#include "gembed/errors.hpp"
#include "gembed/filtering.hpp"
#include "gembed/graph.hpp"
#include "gembed/kernels.hpp"
#include "gembed/metrics.hpp"
#include "gembed/parallel.hpp"
#include "gembed/pipeline.hpp"
#include "gembed/quality.hpp"
#include "gembed/sampling.hpp"
#include "gembed/synthdata.hpp"
#include "gembed/transduction.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

namespace py = pybind11;
using namespace gembed;

namespace {

PointCloud make_cloud(const Mat& points, const std::optional<std::vector<int>>& labels) {
    PointCloud c;
    c.points = points;
    if (labels) c.labels = *labels;
    return c;
}

Weighting parse_weighting(const std::string& w) {
    if (w == "binary") return Weighting::binary;
    if (w == "gaussian") return Weighting::gaussian;
    throw invalid_parameter("weighting must be 'binary' or 'gaussian'");
}

LaplacianVariant parse_variant(const std::string& v) {
    if (v == "combinatorial") return LaplacianVariant::combinatorial;
    if (v == "normalized") return LaplacianVariant::normalized;
    throw invalid_parameter("variant must be 'combinatorial' or 'normalized'");
}

DiffusionVariant parse_diffusion(const std::string& d) {
    if (d == "tikhonov") return DiffusionVariant::tikhonov;
    if (d == "rkhs") return DiffusionVariant::rkhs;
    if (d == "chd") return DiffusionVariant::chd;
    if (d == "tik+chd") return DiffusionVariant::tik_chd;
    if (d == "rkhs+chd") return DiffusionVariant::rkhs_chd;
    throw invalid_parameter("diffusion must be tikhonov|rkhs|chd|tik+chd|rkhs+chd");
}

} // namespace

PYBIND11_MODULE(_gembed, m) {
    m.doc() = "Compressive embedding: graph-sampled sketches diffused by graph filters";

    py::register_exception<invalid_parameter>(m, "InvalidParameterError", PyExc_ValueError);
    py::register_exception<invalid_input>(m, "InvalidInputError", PyExc_ValueError);
    py::register_exception<degenerate_input>(m, "DegenerateInputError", PyExc_ValueError);
    py::register_exception<solver_error>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<bridge_error>(m, "BridgeError", PyExc_RuntimeError);

    py::class_<SparseGraph>(m, "Graph")
        .def_property_readonly("n_vertices", &SparseGraph::n_vertices)
        .def_property_readonly("n_edges", &SparseGraph::n_edges)
        .def_property_readonly("degrees",
                               [](const SparseGraph& g) { return Vec(g.degrees); })
        .def("adjacency",
             [](const SparseGraph& g) { return Mat(g.adjacency); },
             "Dense copy of the adjacency matrix")
        .def("weight", [](const SparseGraph& g, Index i, Index j) {
            return g.adjacency.coeff(i, j);
        });

    py::class_<LaplacianOperator, std::shared_ptr<LaplacianOperator>>(m, "Laplacian")
        .def_property_readonly("lambda_max_bound",
                               [](const LaplacianOperator& l) { return l.lambda_max_bound; })
        .def_property_readonly("n_vertices",
                               [](const LaplacianOperator& l) { return l.size(); })
        .def("matrix", [](const LaplacianOperator& l) { return Mat(l.matrix); },
             "Dense copy of the Laplacian matrix");

    py::class_<SpectralKernel>(m, "Kernel")
        .def_static("heat", &SpectralKernel::heat, py::arg("tau"))
        .def_static("exp_window", &SpectralKernel::exp_window, py::arg("a") = 1.0,
                    py::arg("b_max") = 0.2)
        .def_static("rectangle", &SpectralKernel::rectangle, py::arg("cutoff"),
                    py::arg("height") = 1.0)
        .def_static("constant", &SpectralKernel::constant, py::arg("value"))
        .def_static("parse", &parse_kernel_spec, py::arg("spec"))
        .def("squared", &SpectralKernel::squared)
        .def("__call__",
             [](const SpectralKernel& k, double lam) { return kernel_eval(k, lam); })
        .def("__call__", [](const SpectralKernel& k, const Vec& lam) { return k(lam); })
        .def("__repr__", [](const SpectralKernel& k) {
            return "Kernel(" + k.spec_string() + ")";
        });

    py::class_<ChebyshevFilter>(m, "ChebyshevFilter")
        .def_readonly("order", &ChebyshevFilter::order)
        .def_readonly("interval_upper", &ChebyshevFilter::interval_upper)
        .def_readonly("grid_error", &ChebyshevFilter::grid_error)
        .def_property_readonly(
            "coefficients", [](const ChebyshevFilter& f) { return Vec(f.coefficients); })
        .def("__call__", &ChebyshevFilter::evaluate);

    m.def(
        "build_knn_graph",
        [](const Mat& points, int k, const std::string& weighting) {
            return build_knn_graph(make_cloud(points, std::nullopt), k,
                                   parse_weighting(weighting));
        },
        py::arg("points"), py::arg("k"), py::arg("weighting") = "gaussian");

    m.def(
        "laplacian",
        [](const SparseGraph& g, const std::string& variant) {
            return std::make_shared<LaplacianOperator>(laplacian(g, parse_variant(variant)));
        },
        py::arg("graph"), py::arg("variant") = "normalized");

    m.def("chebyshev_coeffs", &chebyshev_coeffs, py::arg("kernel"), py::arg("order"),
          py::arg("interval_upper"));

    m.def(
        "filter_signal",
        [](const LaplacianOperator& lap, const ChebyshevFilter& f, const Mat& x) {
            return filter_signal(lap, f, x);
        },
        py::arg("laplacian"), py::arg("filter"), py::arg("signals"));

    m.def(
        "localize",
        [](const LaplacianOperator& lap, const ChebyshevFilter& f, Index i) {
            return localize(lap, f, i).values;
        },
        py::arg("laplacian"), py::arg("filter"), py::arg("vertex"));

    m.def("estimate_atom_norms", &estimate_atom_norms, py::arg("laplacian"),
          py::arg("filter"), py::arg("probes"), py::arg("seed"));

    m.def(
        "exact_filter_dense",
        [](const LaplacianOperator& lap, const SpectralKernel& k, const Vec& x) {
            return exact_filter_dense(lap, k, x);
        },
        py::arg("laplacian"), py::arg("kernel"), py::arg("signal"));

    m.def("low_rank_truncate", &low_rank_truncate, py::arg("kernel"), py::arg("k"),
          py::arg("spectrum"));

    // Sampling.
    m.def(
        "uniform_distribution",
        [](Index n) { return Vec(uniform_distribution(n).p); }, py::arg("n"));
    m.def(
        "adapted_distribution",
        [](const Vec& atom_norms_sq) { return Vec(adapted_distribution(atom_norms_sq).p); },
        py::arg("atom_norms_sq"));
    m.def(
        "draw_samples",
        [](const Vec& p, const std::string& kind, Index m, std::uint64_t seed) {
            SamplingDistribution d;
            d.p = p;
            d.kind = kind == "adapted" ? SamplingKind::adapted : SamplingKind::uniform;
            return draw_samples(d, m, seed).omega;
        },
        py::arg("p"), py::arg("kind"), py::arg("m"), py::arg("seed"));
    m.def(
        "bound_samples_embedding",
        [](double delta, double eps, int k, double ratio2) {
            BoundInputs in;
            in.delta = delta;
            in.eps = eps;
            in.k = k;
            in.ratio2 = ratio2;
            return bound_samples_embedding(in);
        },
        py::arg("delta"), py::arg("eps"), py::arg("k"), py::arg("ratio2"));
    m.def(
        "bound_samples_node",
        [](double delta, double eps, int k, double a_factor) {
            BoundInputs in;
            in.delta = delta;
            in.eps = eps;
            in.k = k;
            in.a_factor = a_factor;
            return bound_samples_node(in);
        },
        py::arg("delta"), py::arg("eps"), py::arg("k"), py::arg("a_factor"));

    // Metrics.
    m.def(
        "lkd",
        [](const LaplacianOperator& lap, const ChebyshevFilter& f, Index i, Index j) {
            return lkd(lap, f, i, j);
        },
        py::arg("laplacian"), py::arg("filter"), py::arg("i"), py::arg("j"));
    m.def(
        "kdd",
        [](const LaplacianOperator& lap, const ChebyshevFilter& f, Index i, Index j) {
            return kdd(lap, f, i, j);
        },
        py::arg("laplacian"), py::arg("filter"), py::arg("i"), py::arg("j"));
    m.def("kdd_matrix", &kdd_matrix, py::arg("laplacian"), py::arg("filter"),
          py::arg("subset"));

    // Transduction.
    m.def(
        "tikhonov_diffuse",
        [](const LaplacianOperator& lap, const std::vector<Index>& vertices,
           const Mat& values, double mu) {
            return tikhonov_diffuse(lap, ObservedSignal{vertices, values}, mu);
        },
        py::arg("laplacian"), py::arg("vertices"), py::arg("values"), py::arg("mu"));
    m.def(
        "rkhs_diffuse",
        [](const LaplacianOperator& lap, const SpectralKernel& kernel, int order,
           const std::vector<Index>& vertices, const Mat& values, double mu) {
            return rkhs_fit(lap, kernel, order, ObservedSignal{vertices, values}, mu);
        },
        py::arg("laplacian"), py::arg("kernel"), py::arg("order"), py::arg("vertices"),
        py::arg("values"), py::arg("mu"));
    m.def(
        "chd_weights",
        [](std::shared_ptr<LaplacianOperator> lap, const SpectralKernel& kernel, int order,
           const std::vector<Index>& samples, const Vec& atom_norms_sq) {
            return Mat(chd_operator(lap, kernel, order, samples, atom_norms_sq).weights);
        },
        py::arg("laplacian"), py::arg("kernel"), py::arg("order"), py::arg("samples"),
        py::arg("atom_norms_sq"), "Row-stochastic convex hull diffusion weights (N x M')");

    // Pipeline.
    m.def("choose_sample_count", &choose_sample_count, py::arg("n"), py::arg("rule"),
          py::arg("aux"));
    py::enum_<SampleRule>(m, "SampleRule")
        .value("explicit_count", SampleRule::explicit_count)
        .value("classes", SampleRule::classes)
        .value("diameter", SampleRule::diameter)
        .value("plain_log", SampleRule::plain_log);

    m.def(
        "compressive_embed",
        [](const Mat& points, const std::optional<std::vector<int>>& labels, int knn,
           const std::string& kernel, const std::string& sampling,
           const std::string& num_samples, int n_classes, const std::string& embedder,
           const std::string& diffusion, double mu, int dim, std::uint64_t seed,
           int cheb_order, const std::string& external_command) {
            PipelineConfig config;
            config.k_neighbors = knn;
            config.kernel = parse_kernel_spec(kernel);
            config.sampling =
                sampling == "uniform" ? SamplingKind::uniform : SamplingKind::adapted;
            if (num_samples == "auto" || num_samples == "auto:plain")
                config.sample_rule = SampleRule::plain_log;
            else if (num_samples == "auto:classes")
                config.sample_rule = SampleRule::classes;
            else if (num_samples == "auto:diameter")
                config.sample_rule = SampleRule::diameter;
            else {
                config.sample_rule = SampleRule::explicit_count;
                config.explicit_samples = std::stol(num_samples);
            }
            config.n_classes = n_classes;
            config.embedder = embedder == "pca"        ? SketchEmbedder::pca
                              : embedder == "external" ? SketchEmbedder::external
                                                       : SketchEmbedder::laplacian_eigenmaps;
            config.external_command = external_command;
            config.diffusion = parse_diffusion(diffusion);
            config.mu = mu;
            config.dim = dim;
            config.seed = seed;
            config.cheb_order = cheb_order;

            const EmbedResult r = compressive_embed(make_cloud(points, labels), config);
            py::dict out;
            out["embedding"] = r.embedding;
            out["sample_vertices"] = r.sketch.sample_vertices;
            out["samples_requested"] = r.sketch.samples_requested;
            out["sketch"] = r.sketch.sketch;
            out["sketch_embedding"] = r.sketch.sketch_embedding;
            out["step_seconds"] = r.sketch.step_seconds;
            out["chd_degenerate_rows"] = r.sketch.chd_degenerate_rows;
            out["components_without_samples"] = r.sketch.components_without_samples;
            return out;
        },
        py::arg("points"), py::kw_only(), py::arg("labels") = std::nullopt,
        py::arg("knn") = 10, py::arg("kernel") = "heat:tau=5",
        py::arg("sampling") = "adapted", py::arg("num_samples") = "auto",
        py::arg("n_classes") = 0, py::arg("embedder") = "eigenmaps",
        py::arg("diffusion") = "chd", py::arg("mu") = 1.0, py::arg("dim") = 2,
        py::arg("seed") = 0, py::arg("cheb_order") = 30,
        py::arg("external_command") = "");

    // Quality metrics.
    m.def(
        "aci",
        [](const Mat& embedding, const std::vector<int>& labels, int knn) {
            return aci(make_labeled_embedding(embedding, labels, knn));
        },
        py::arg("embedding"), py::arg("labels"), py::arg("knn") = 10);
    m.def(
        "acc",
        [](const Mat& embedding, const std::vector<int>& labels, int knn,
           const std::string& mode, int pairs_per_point, std::uint64_t seed,
           const std::string& kernel_spec, int order) {
            const LabeledEmbedding le = make_labeled_embedding(embedding, labels, knn);
            const LaplacianOperator lap = laplacian(le.graph, LaplacianVariant::normalized);
            const SpectralKernel kernel = kernel_spec.empty()
                                              ? default_acc_kernel(lap)
                                              : parse_kernel_spec(kernel_spec);
            const AccResult r = mode == "exact"
                                    ? acc_exact(lap, kernel, order, le)
                                    : acc_randomized(lap, kernel, order, le,
                                                     pairs_per_point, seed);
            py::dict out;
            out["total"] = r.total;
            out["per_class"] = r.per_class;
            return out;
        },
        py::arg("embedding"), py::arg("labels"), py::arg("knn") = 10,
        py::arg("mode") = "random", py::arg("pairs_per_point") = 20, py::arg("seed") = 7,
        py::arg("kernel") = "", py::arg("order") = 30);

    // Synthetic data.
    m.def(
        "generate_synthetic",
        [](const std::string& family, Index n, int classes, double morph, double noise,
           std::uint64_t seed) {
            SyntheticSpec spec;
            spec.family = family == "circle"         ? SynthFamily::circle
                          : family == "checkerboard" ? SynthFamily::checkerboard
                                                     : SynthFamily::bands;
            spec.n_points = n;
            spec.n_classes = classes;
            spec.morph = morph;
            spec.noise_std = noise;
            spec.seed = seed;
            const PointCloud cloud = generate(spec);
            return py::make_tuple(cloud.points, cloud.labels);
        },
        py::arg("family"), py::arg("n"), py::arg("classes") = 4, py::arg("morph") = 0.0,
        py::arg("noise") = 0.01, py::arg("seed") = 0);

    m.def("set_max_threads", &set_max_threads, py::arg("n"));
}

#pragma once

#include "gembed/graph.hpp"
#include "gembed/kernels.hpp"
#include "gembed/sampling.hpp"
#include "gembed/transduction.hpp"
#include "gembed/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace gembed {

enum class SketchEmbedder { laplacian_eigenmaps, pca, external };

enum class SampleRule { explicit_count, classes, diameter, plain_log };

struct PipelineConfig {
    int k_neighbors = 10;
    Weighting weighting = Weighting::gaussian;
    LaplacianVariant laplacian_variant = LaplacianVariant::normalized;

    SpectralKernel kernel = SpectralKernel::heat(5.0);
    std::optional<SpectralKernel> diffusion_kernel; // defaults to kernel
    int cheb_order = 30;

    SamplingKind sampling = SamplingKind::adapted;
    SampleRule sample_rule = SampleRule::plain_log;
    Index explicit_samples = 0;  // sample_rule == explicit_count
    int n_classes = 0;           // sample_rule == classes; 0 = derive from labels
    int atom_norm_probes = 100;  // P for the adapted distribution estimate

    SketchEmbedder embedder = SketchEmbedder::laplacian_eigenmaps;
    std::string external_command;
    double external_timeout_sec = 3600.0;

    DiffusionVariant diffusion = DiffusionVariant::chd;
    double mu = 1.0;

    int dim = 2;
    std::uint64_t seed = 0;
};

struct SketchResult {
    std::vector<Index> sample_vertices; // deduplicated, first occurrence kept
    Index samples_requested = 0;        // M before deduplication
    Mat sketch;                         // M' x K rows copied from the data
    Mat sketch_embedding;               // M' x d
    std::map<std::string, double> step_seconds; // per Algorithm step
    int chd_degenerate_rows = 0;
    int components_without_samples = 0;
};

struct EmbedResult {
    Mat embedding; // N x d
    SketchResult sketch;
};

// Sketch sizes: plain-log ceil(10 ln N); classes ceil(10 |C| ln N);
// diameter ceil(10 d(G) ln N); explicit passes through.
Index choose_sample_count(Index n, SampleRule rule, double aux);

// Built-in sketch embedders. Eigenmaps builds a kNN graph on the sketch
// (k = min(10, M'-1), gaussian weights), takes eigenvectors 1..d of the
// normalized Laplacian; PCA takes the top-d principal components of the
// mean-centered sketch. Both apply a deterministic sign convention
// (largest-magnitude entry positive).
Mat sketch_embed_builtin(const Mat& sketch, SketchEmbedder method, int dim,
                         std::uint64_t seed);

// Writes the sketch to CSV, runs `command <in.csv> <out.csv> <d>`, parses the
// M' x d result. Row order must be preserved by the tool.
Mat external_embedder_bridge(const Mat& sketch, const std::string& command, int dim,
                             double timeout_sec = 3600.0);

// Algorithm: graph, sampling, sketch, sketch embedding, diffusion fit, apply.
EmbedResult compressive_embed(const PointCloud& data, const PipelineConfig& config);

} // namespace gembed

#pragma once

#include "gembed/types.hpp"

#include <cstdint>

namespace gembed {

enum class SynthFamily { bands, circle, checkerboard };

// Labeled 2D point clouds deformed by a morph parameter in [0,1]: classes
// split across separated clusters at 0, one cluster per class at 1, mixed in
// between. The checkerboard passes through a class-pure arrangement at 0.5.
struct SyntheticSpec {
    SynthFamily family = SynthFamily::bands;
    Index n_points = 1000;
    int n_classes = 4;      // bands/circle: 2..5, checkerboard: 4 or 16
    double morph = 0.0;     // in [0, 1]
    double noise_std = 0.01;
    std::uint64_t seed = 0;
};

PointCloud generate(const SyntheticSpec& spec);

// Upper bound on |d position / d morph| for the family; positions are
// Lipschitz in morph with this constant (noise held fixed by the seed).
double max_travel_rate(SynthFamily family);

} // namespace gembed

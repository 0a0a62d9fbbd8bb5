#pragma once

#include <stdexcept>
#include <string>

namespace gembed {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller-supplied argument is outside its domain (bad k, bad order, ...).
struct invalid_parameter : error {
    using error::error;
};

// The data itself is unusable (non-finite features, empty distribution, ...).
struct invalid_input : error {
    using error::error;
};

// Structurally valid input that a specific operation cannot handle
// (isolated vertex under the normalized Laplacian, zero atom norm, ...).
struct degenerate_input : error {
    using error::error;
};

// Iterative solver failed to reach its tolerance; carries the final residual.
struct solver_error : error {
    solver_error(const std::string& what, double residual_, long iterations_)
        : error(what), residual(residual_), iterations(iterations_) {}
    double residual;
    long iterations;
};

// External embedder process misbehaved; carries captured stderr.
struct bridge_error : error {
    bridge_error(const std::string& what, std::string stderr_output_)
        : error(what), stderr_output(std::move(stderr_output_)) {}
    std::string stderr_output;
};

} // namespace gembed

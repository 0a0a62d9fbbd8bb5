#include "gembed/synthdata.hpp"

#include "gembed/errors.hpp"
#include "gembed/rng.hpp"

#include <cmath>
#include <vector>

namespace gembed {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Emitter {
    Mat points;
    std::vector<int> labels;
    Index next = 0;

    void emit(double x, double y, int label) {
        points(next, 0) = x;
        points(next, 1) = y;
        labels[static_cast<std::size_t>(next)] = label;
        ++next;
    }
};

Index class_size(Index n, int n_classes, int c) {
    return n / n_classes + (c < static_cast<int>(n % n_classes) ? 1 : 0);
}

void generate_bands(const SyntheticSpec& spec, Emitter& out, Rng& rng) {
    const int c_count = spec.n_classes;
    const int slots = 2 * c_count;
    const double slotw = 1.0 / slots;
    const double beta = 0.5; // strip width as a fraction of the slot

    for (int c = 0; c < c_count; ++c) {
        const Index n_c = class_size(spec.n_points, c_count, c);
        for (int seg = 0; seg < 2; ++seg) {
            const Index n_s = n_c / 2 + (seg == 0 && (n_c % 2) ? 1 : 0);
            const double x0 = (c + seg * c_count + 0.5) * slotw;
            // The two halves land side by side and touch at morph 1.
            const double x1 = (2 * c + 1) * slotw + (2 * seg - 1) * beta * slotw / 2.0;
            const double xc = (1.0 - spec.morph) * x0 + spec.morph * x1;
            for (Index t = 0; t < n_s; ++t) {
                const double x = xc + (rng.uniform() - 0.5) * beta * slotw;
                const double y = rng.uniform();
                out.emit(x + spec.noise_std * rng.normal(), y + spec.noise_std * rng.normal(),
                         c);
            }
        }
    }
}

void generate_circle(const SyntheticSpec& spec, Emitter& out, Rng& rng) {
    const int c_count = spec.n_classes;
    const int slots = 2 * c_count;
    const double gamma = 0.75;
    const double wedge = gamma * kPi / slots; // angular width of one wedge

    for (int c = 0; c < c_count; ++c) {
        const Index n_c = class_size(spec.n_points, c_count, c);
        for (int seg = 0; seg < 2; ++seg) {
            const Index n_s = n_c / 2 + (seg == 0 && (n_c % 2) ? 1 : 0);
            const double theta0 = (c + seg * c_count + 0.5) * 2.0 * kPi / slots;
            // Half-disc sector for the class, halves touching at morph 1.
            const double theta1 = (c + 0.5) * kPi / c_count + (2 * seg - 1) * wedge / 2.0;
            const double theta_c = (1.0 - spec.morph) * theta0 + spec.morph * theta1;
            for (Index t = 0; t < n_s; ++t) {
                const double th = theta_c + (rng.uniform() - 0.5) * wedge;
                const double r = 0.5 + 0.5 * rng.uniform();
                out.emit(r * std::cos(th) + spec.noise_std * rng.normal(),
                         r * std::sin(th) + spec.noise_std * rng.normal(), c);
            }
        }
    }
}

void generate_checkerboard(const SyntheticSpec& spec, Emitter& out, Rng& rng) {
    const double side = 1.0 / 8.0;
    const double t = std::min(spec.morph, 0.5) * 2.0;
    const double u = std::max(spec.morph - 0.5, 0.0) * 2.0;
    // Ease-in before the midpoint and ease-out after it keep the class
    // crossings adjacent to morph 0.5, where the arrangement is pure.
    const double wt = t * t * t;
    const double wu = 1.0 - (1.0 - u) * (1.0 - u) * (1.0 - u);

    const auto cell_center = [](int idx) { return 0.125 + 0.25 * idx; };

    if (spec.n_classes == 4) {
        constexpr double bx[4] = {0.25, 0.75, 0.25, 0.75};
        constexpr double by[4] = {0.25, 0.25, 0.75, 0.75};
        for (int c = 0; c < 4; ++c) {
            const Index n_c = class_size(spec.n_points, 4, c);
            int q = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    if ((i % 2) + 2 * (j % 2) != c) continue;
                    const Index n_q = n_c / 4 + (q < static_cast<int>(n_c % 4) ? 1 : 0);
                    const double x0 = cell_center(i), y0 = cell_center(j);
                    const double tx = bx[c] + (q % 2 ? 1 : -1) * side / 2.0;
                    const double ty = by[c] + (q / 2 ? 1 : -1) * side / 2.0;
                    const double xc = (1.0 - wt) * x0 + wt * tx;
                    const double yc = (1.0 - wu) * y0 + wu * ty;
                    for (Index p = 0; p < n_q; ++p) {
                        const double x = xc + (rng.uniform() - 0.5) * side;
                        const double y = yc + (rng.uniform() - 0.5) * side;
                        out.emit(x + spec.noise_std * rng.normal(),
                                 y + spec.noise_std * rng.normal(), c);
                    }
                    ++q;
                }
        }
    } else { // 16 classes, one square each; columns then rows reverse
        for (int c = 0; c < 16; ++c) {
            const Index n_c = class_size(spec.n_points, 16, c);
            const int i = c % 4, j = c / 4;
            const double x0 = cell_center(i), y0 = cell_center(j);
            const double tx = cell_center(3 - i), ty = cell_center(3 - j);
            const double xc = (1.0 - wt) * x0 + wt * tx;
            const double yc = (1.0 - wu) * y0 + wu * ty;
            for (Index p = 0; p < n_c; ++p) {
                const double x = xc + (rng.uniform() - 0.5) * side;
                const double y = yc + (rng.uniform() - 0.5) * side;
                out.emit(x + spec.noise_std * rng.normal(), y + spec.noise_std * rng.normal(),
                         c);
            }
        }
    }
}

} // namespace

PointCloud generate(const SyntheticSpec& spec) {
    if (spec.morph < 0.0 || spec.morph > 1.0)
        throw invalid_parameter("synthdata: morph must lie in [0,1]");
    if (spec.noise_std < 0.0) throw invalid_parameter("synthdata: negative noise");
    if (spec.family == SynthFamily::checkerboard) {
        if (spec.n_classes != 4 && spec.n_classes != 16)
            throw invalid_parameter("synthdata: checkerboard supports 4 or 16 classes");
    } else if (spec.n_classes < 2 || spec.n_classes > 5) {
        throw invalid_parameter("synthdata: bands/circle support 2 to 5 classes");
    }
    if (spec.n_points < static_cast<Index>(spec.n_classes) * 10)
        throw invalid_parameter("synthdata: need at least 10 points per class");

    Emitter out;
    out.points.resize(spec.n_points, 2);
    out.labels.resize(static_cast<std::size_t>(spec.n_points));
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(spec.family)));

    switch (spec.family) {
        case SynthFamily::bands: generate_bands(spec, out, rng); break;
        case SynthFamily::circle: generate_circle(spec, out, rng); break;
        case SynthFamily::checkerboard: generate_checkerboard(spec, out, rng); break;
    }

    PointCloud cloud;
    cloud.points = std::move(out.points);
    cloud.labels = std::move(out.labels);
    return cloud;
}

double max_travel_rate(SynthFamily family) {
    switch (family) {
        case SynthFamily::bands: return 1.0;
        case SynthFamily::circle: return 2.0 * kPi;
        case SynthFamily::checkerboard: return 6.0; // ease slope 3 x phase rate 2
    }
    return 0.0;
}

} // namespace gembed

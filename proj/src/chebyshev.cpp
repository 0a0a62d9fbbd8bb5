#include "gembed/chebyshev.hpp"

#include "gembed/errors.hpp"

#include <cmath>

namespace gembed {

double ChebyshevFilter::evaluate(double lambda) const {
    if (interval_upper <= 0.0) return coefficients.size() ? coefficients[0] / 2.0 : 0.0;
    const double t = 2.0 * lambda / interval_upper - 1.0;
    double out = coefficients[0] / 2.0;
    double tkm2 = 1.0, tkm1 = t;
    if (order >= 1) out += coefficients[1] * tkm1;
    for (int j = 2; j <= order; ++j) {
        const double tk = 2.0 * t * tkm1 - tkm2;
        out += coefficients[j] * tk;
        tkm2 = tkm1;
        tkm1 = tk;
    }
    return out;
}

ChebyshevFilter chebyshev_coeffs(const SpectralKernel& kernel, int order,
                                 double interval_upper) {
    if (order < 1) throw invalid_parameter("chebyshev_coeffs: order must be >= 1");
    if (!(interval_upper > 0.0))
        throw invalid_parameter("chebyshev_coeffs: interval upper bound must be > 0");

    const int np = order + 1;
    Vec values(np);
    for (int q = 0; q < np; ++q) {
        const double x = std::cos(M_PI * (q + 0.5) / np);
        const double lam = 0.5 * interval_upper * (x + 1.0);
        values[q] = kernel(lam);
        if (!std::isfinite(values[q]))
            throw invalid_input("chebyshev_coeffs: kernel evaluated to a non-finite value");
    }

    ChebyshevFilter f;
    f.order = order;
    f.interval_upper = interval_upper;
    f.coefficients.resize(np);
    for (int j = 0; j < np; ++j) {
        double acc = 0.0;
        for (int q = 0; q < np; ++q)
            acc += values[q] * std::cos(M_PI * j * (q + 0.5) / np);
        f.coefficients[j] = 2.0 * acc / np;
    }

    double err = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const double lam = interval_upper * s / 999.0;
        err = std::max(err, std::abs(f.evaluate(lam) - kernel(lam)));
    }
    f.grid_error = err;
    return f;
}

} // namespace gembed

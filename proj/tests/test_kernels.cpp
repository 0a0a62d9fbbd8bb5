#include "gembed/chebyshev.hpp"
#include "gembed/errors.hpp"
#include "gembed/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace gembed;

TEST_CASE("kernel_eval: heat, rectangle, window point values") {
    CHECK(kernel_eval(SpectralKernel::heat(1.0), 0.0) == doctest::Approx(1.0));
    CHECK(kernel_eval(SpectralKernel::heat(2.0), 0.5) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(kernel_eval(SpectralKernel::rectangle(0.5, 1.0), 0.7) == 0.0);
    CHECK(kernel_eval(SpectralKernel::rectangle(0.5, 1.0), 0.5) == 1.0);

    // Window: 1 deep inside the passband, 0 from lambda = 1 on, monotone between.
    const SpectralKernel w = SpectralKernel::exp_window(1.0, 0.2);
    CHECK(kernel_eval(w, 0.0) == 1.0);
    CHECK(kernel_eval(w, 0.5) == 1.0);
    CHECK(kernel_eval(w, 1.0) == 0.0);
    CHECK(kernel_eval(w, 1.5) == 0.0);
    const double mid_hi = kernel_eval(w, 0.85);
    const double mid_lo = kernel_eval(w, 0.95);
    CHECK(mid_hi > mid_lo);
    CHECK(mid_hi < 1.0);
    CHECK(mid_lo > 0.0);
}

TEST_CASE("kernel_eval: total on lambda >= 0, throws below") {
    CHECK_THROWS_AS(kernel_eval(SpectralKernel::heat(1.0), -0.1), invalid_parameter);
}

TEST_CASE("kernel squared and tabulated interpolation") {
    const SpectralKernel g = SpectralKernel::heat(1.5);
    const SpectralKernel g2 = g.squared();
    CHECK(g2(0.7) == doctest::Approx(g(0.7) * g(0.7)).epsilon(1e-14));

    const SpectralKernel t = SpectralKernel::tabulated({0.0, 1.0, 2.0}, {1.0, 0.5, 0.0});
    CHECK(t(0.5) == doctest::Approx(0.75));
    CHECK(t(1.5) == doctest::Approx(0.25));
    CHECK(t(3.0) == 0.0);   // clamped
    CHECK(t(-1.0) == 1.0);  // clamped
}

TEST_CASE("kernel norms and rank on a spectrum") {
    Vec spectrum(4);
    spectrum << 0.0, 0.5, 1.0, 2.0;
    const SpectralKernel r = SpectralKernel::rectangle(0.6, 2.0);
    CHECK(kernel_rank(r, spectrum) == 2);
    CHECK(kernel_norm2_sq(r, spectrum) == doctest::Approx(8.0));
    CHECK(kernel_norm_inf_sq(r, spectrum) == doctest::Approx(4.0));
    // Rectangle concentration ratio equals its rank exactly.
    CHECK(kernel_norm2_sq(r, spectrum) / kernel_norm_inf_sq(r, spectrum) ==
          doctest::Approx(kernel_rank(r, spectrum)));
}

TEST_CASE("low_rank_truncate keeps the largest magnitudes, smaller lambda on ties") {
    Vec spectrum(3);
    spectrum << 0.0, 1.0, 2.0;

    const SpectralKernel heat1 = SpectralKernel::heat(1.0);
    const SpectralKernel t1 = low_rank_truncate(heat1, 1, spectrum);
    CHECK(t1(0.0) == doctest::Approx(1.0));
    CHECK(t1(1.0) == 0.0);
    CHECK(t1(2.0) == 0.0);

    // Rectangle of support size 2 truncated to 2 is unchanged on the spectrum.
    const SpectralKernel rect = SpectralKernel::rectangle(1.0, 3.0);
    const SpectralKernel t2 = low_rank_truncate(rect, 2, spectrum);
    for (const double lam : {0.0, 1.0, 2.0}) CHECK(t2(lam) == rect(lam));

    // Full rank keeps everything.
    const SpectralKernel t3 = low_rank_truncate(heat1, 3, spectrum);
    for (const double lam : {0.0, 1.0, 2.0})
        CHECK(t3(lam) == doctest::Approx(heat1(lam)).epsilon(1e-14));

    CHECK_THROWS_AS(low_rank_truncate(heat1, 4, spectrum), invalid_parameter);

    // Constant kernel ties resolve toward the smallest eigenvalues.
    const SpectralKernel c = SpectralKernel::constant(1.0);
    const SpectralKernel t4 = low_rank_truncate(c, 2, spectrum);
    CHECK(t4(0.0) == 1.0);
    CHECK(t4(1.0) == 1.0);
    CHECK(t4(2.0) == 0.0);
}

TEST_CASE("parse_kernel_spec round trips the CLI syntax") {
    const SpectralKernel h = parse_kernel_spec("heat:tau=5");
    CHECK(h(0.2) == doctest::Approx(std::exp(-1.0)));
    const SpectralKernel w = parse_kernel_spec("window:a=1,bmax=0.2");
    CHECK(w(0.0) == 1.0);
    const SpectralKernel r = parse_kernel_spec("rect:cutoff=0.3");
    CHECK(r(0.2) == 1.0);
    CHECK(r(0.4) == 0.0);
    CHECK_THROWS_AS(parse_kernel_spec("fourier:tau=1"), invalid_parameter);
    CHECK_THROWS_AS(parse_kernel_spec("heat:oops=1"), invalid_parameter);
}

TEST_CASE("chebyshev_coeffs: constant kernel is degree zero with c0 = 2c") {
    const ChebyshevFilter f = chebyshev_coeffs(SpectralKernel::constant(3.0), 10, 2.0);
    CHECK(f.coefficients[0] == doctest::Approx(6.0).epsilon(1e-14));
    for (int j = 1; j <= 10; ++j) CHECK(std::abs(f.coefficients[j]) <= 1e-14);
    CHECK(f.grid_error <= 1e-13);
}

TEST_CASE("chebyshev_coeffs: heat tau=1 on [0,2] at order 30 interpolates to 1e-12") {
    const ChebyshevFilter f = chebyshev_coeffs(SpectralKernel::heat(1.0), 30, 2.0);
    CHECK(f.grid_error <= 1e-12);
    CHECK(f.evaluate(0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("chebyshev_coeffs: a linear kernel is exact at order 1") {
    const SpectralKernel lin = SpectralKernel::tabulated({0.0, 2.0}, {0.0, 2.0});
    const ChebyshevFilter f = chebyshev_coeffs(lin, 1, 2.0);
    CHECK(f.grid_error <= 1e-14);
}

TEST_CASE("chebyshev_coeffs: parameter validation") {
    CHECK_THROWS_AS(chebyshev_coeffs(SpectralKernel::heat(1.0), 0, 2.0), invalid_parameter);
    CHECK_THROWS_AS(chebyshev_coeffs(SpectralKernel::heat(1.0), 5, 0.0), invalid_parameter);
}

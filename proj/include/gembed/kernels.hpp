#pragma once

#include "gembed/types.hpp"

#include <string>
#include <vector>

namespace gembed {

// A filter shape g: [0, inf) -> [0, inf) defined on the Laplacian spectrum.
//
// Forms:
//   heat(tau)               e^(-tau * x)
//   exp_window(a, b_max)    s((1 - x) / b_max) with the smooth step
//                           s(t) = 0 for t <= 0, 1 for t >= 1, and
//                           e^(-a/t) / (e^(-a/t) + e^(-a/(1-t))) between;
//                           infinitely smooth, 1 below 1 - b_max, 0 above 1
//   rectangle(cutoff, h)    h on [0, cutoff], 0 after
//   tabulated(xs, vs)       linear interpolation between sample points,
//                           clamped at the ends
//
// power > 1 evaluates the pointwise power of the base form (g^2 drives the
// convex hull diffusion and the localized-distance inner products).
class SpectralKernel {
  public:
    enum class Form { heat, exp_window, rectangle, tabulated };

    static SpectralKernel heat(double tau);
    static SpectralKernel exp_window(double a, double b_max);
    static SpectralKernel rectangle(double cutoff, double height);
    static SpectralKernel constant(double value); // rectangle with infinite cutoff
    static SpectralKernel tabulated(std::vector<double> xs, std::vector<double> vs);

    double operator()(double lambda) const;
    Vec operator()(const Vec& lambdas) const;

    SpectralKernel squared() const;

    Form form() const { return form_; }
    int power() const { return power_; }
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    const std::vector<double>& table_xs() const { return xs_; }
    const std::vector<double>& table_vs() const { return vs_; }

    // Echo string in the CLI syntax (heat:tau=5, window:a=1,bmax=0.2, ...).
    std::string spec_string() const;

  private:
    SpectralKernel() = default;
    double eval_base(double lambda) const;

    Form form_ = Form::heat;
    double a_ = 1.0; // tau / a / cutoff
    double b_ = 0.0; // b_max / height
    std::vector<double> xs_, vs_;
    int power_ = 1;
};

double kernel_eval(const SpectralKernel& kernel, double lambda);

// ||g(lambda)||_2^2, ||g(lambda)||_inf^2 and rank ||g(lambda)||_0 on a spectrum.
double kernel_norm2_sq(const SpectralKernel& kernel, const Vec& spectrum);
double kernel_norm_inf_sq(const SpectralKernel& kernel, const Vec& spectrum);
int kernel_rank(const SpectralKernel& kernel, const Vec& spectrum);

// Keeps g on the k spectrum points with the largest |g|, zero elsewhere;
// ties broken toward smaller eigenvalues. Result is a tabulated kernel over
// the given spectrum.
SpectralKernel low_rank_truncate(const SpectralKernel& kernel, int k, const Vec& spectrum);

// Parses the CLI kernel syntax: heat:tau=5, window:a=1,bmax=0.2,
// rect:cutoff=0.3[,height=1], const:value=1.
SpectralKernel parse_kernel_spec(const std::string& spec);

} // namespace gembed

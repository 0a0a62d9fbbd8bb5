#include "gembed/kernels.hpp"

#include "gembed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gembed {

SpectralKernel SpectralKernel::heat(double tau) {
    if (!(tau >= 0.0)) throw invalid_parameter("heat kernel: tau must be >= 0");
    SpectralKernel k;
    k.form_ = Form::heat;
    k.a_ = tau;
    return k;
}

SpectralKernel SpectralKernel::exp_window(double a, double b_max) {
    if (!(a > 0.0) || !(b_max > 0.0))
        throw invalid_parameter("exp_window kernel: a and b_max must be > 0");
    SpectralKernel k;
    k.form_ = Form::exp_window;
    k.a_ = a;
    k.b_ = b_max;
    return k;
}

SpectralKernel SpectralKernel::rectangle(double cutoff, double height) {
    if (!(cutoff >= 0.0) || !(height >= 0.0))
        throw invalid_parameter("rectangle kernel: cutoff and height must be >= 0");
    SpectralKernel k;
    k.form_ = Form::rectangle;
    k.a_ = cutoff;
    k.b_ = height;
    return k;
}

SpectralKernel SpectralKernel::constant(double value) {
    return rectangle(std::numeric_limits<double>::infinity(), value);
}

SpectralKernel SpectralKernel::tabulated(std::vector<double> xs, std::vector<double> vs) {
    if (xs.empty() || xs.size() != vs.size())
        throw invalid_parameter("tabulated kernel: need matching nonempty samples");
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw invalid_parameter("tabulated kernel: sample points must be sorted");
    SpectralKernel k;
    k.form_ = Form::tabulated;
    k.xs_ = std::move(xs);
    k.vs_ = std::move(vs);
    return k;
}

double SpectralKernel::eval_base(double lambda) const {
    switch (form_) {
        case Form::heat:
            return std::exp(-a_ * lambda);
        case Form::exp_window: {
            const double t = (1.0 - lambda) / b_;
            if (t <= 0.0) return 0.0;
            if (t >= 1.0) return 1.0;
            const double fa = std::exp(-a_ / t);
            const double fb = std::exp(-a_ / (1.0 - t));
            return fa / (fa + fb);
        }
        case Form::rectangle:
            return lambda <= a_ ? b_ : 0.0;
        case Form::tabulated: {
            if (lambda <= xs_.front()) return vs_.front();
            if (lambda >= xs_.back()) return vs_.back();
            const auto hi = std::upper_bound(xs_.begin(), xs_.end(), lambda);
            const std::size_t h = static_cast<std::size_t>(hi - xs_.begin());
            const std::size_t l = h - 1;
            const double span = xs_[h] - xs_[l];
            if (span == 0.0) return vs_[l];
            const double w = (lambda - xs_[l]) / span;
            return (1.0 - w) * vs_[l] + w * vs_[h];
        }
    }
    return 0.0;
}

double SpectralKernel::operator()(double lambda) const {
    const double v = eval_base(lambda);
    return power_ == 1 ? v : std::pow(v, power_);
}

Vec SpectralKernel::operator()(const Vec& lambdas) const {
    Vec out(lambdas.size());
    for (Index i = 0; i < lambdas.size(); ++i) out[i] = (*this)(lambdas[i]);
    return out;
}

SpectralKernel SpectralKernel::squared() const {
    SpectralKernel k = *this;
    k.power_ *= 2;
    return k;
}

std::string SpectralKernel::spec_string() const {
    std::ostringstream os;
    switch (form_) {
        case Form::heat: os << "heat:tau=" << a_; break;
        case Form::exp_window: os << "window:a=" << a_ << ",bmax=" << b_; break;
        case Form::rectangle:
            if (std::isinf(a_))
                os << "const:value=" << b_;
            else
                os << "rect:cutoff=" << a_ << ",height=" << b_;
            break;
        case Form::tabulated: os << "tabulated[" << xs_.size() << "]"; break;
    }
    if (power_ != 1) os << "^" << power_;
    return os.str();
}

double kernel_eval(const SpectralKernel& kernel, double lambda) {
    if (!(lambda >= 0.0)) throw invalid_parameter("kernel_eval: lambda must be >= 0");
    return kernel(lambda);
}

double kernel_norm2_sq(const SpectralKernel& kernel, const Vec& spectrum) {
    return kernel(spectrum).squaredNorm();
}

double kernel_norm_inf_sq(const SpectralKernel& kernel, const Vec& spectrum) {
    const double m = kernel(spectrum).cwiseAbs().maxCoeff();
    return m * m;
}

int kernel_rank(const SpectralKernel& kernel, const Vec& spectrum) {
    int k = 0;
    for (Index i = 0; i < spectrum.size(); ++i)
        if (kernel(spectrum[i]) != 0.0) ++k;
    return k;
}

SpectralKernel low_rank_truncate(const SpectralKernel& kernel, int k, const Vec& spectrum) {
    const Index n = spectrum.size();
    if (k < 0 || k > n)
        throw invalid_parameter("low_rank_truncate: k exceeds spectrum size");

    Vec vals = kernel(spectrum);
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    // Keep the k largest |g|; ties go to the smaller eigenvalue, and the
    // spectrum is ascending, so the smaller position wins.
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::abs(vals[a]) > std::abs(vals[b]);
    });

    std::vector<double> xs(n), vs(n, 0.0);
    for (Index i = 0; i < n; ++i) xs[i] = spectrum[i];
    for (int t = 0; t < k; ++t) vs[order[t]] = vals[order[t]];

    // Duplicate eigenvalues would make the table ambiguous; collapse exact
    // duplicates keeping the kept (nonzero) value if any.
    std::vector<double> cx, cv;
    cx.reserve(n);
    cv.reserve(n);
    for (Index i = 0; i < n; ++i) {
        if (!cx.empty() && xs[i] == cx.back())
            cv.back() = std::abs(cv.back()) >= std::abs(vs[i]) ? cv.back() : vs[i];
        else {
            cx.push_back(xs[i]);
            cv.push_back(vs[i]);
        }
    }
    return SpectralKernel::tabulated(std::move(cx), std::move(cv));
}

namespace {

double parse_named(const std::string& body, const std::string& key, double fallback,
                   bool required) {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        if (item.substr(0, eq) == key) return std::stod(item.substr(eq + 1));
    }
    if (required) throw invalid_parameter("kernel spec: missing parameter '" + key + "'");
    return fallback;
}

} // namespace

SpectralKernel parse_kernel_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "heat") return SpectralKernel::heat(parse_named(body, "tau", 0, true));
    if (name == "window")
        return SpectralKernel::exp_window(parse_named(body, "a", 1.0, false),
                                          parse_named(body, "bmax", 0.2, false));
    if (name == "rect")
        return SpectralKernel::rectangle(parse_named(body, "cutoff", 0, true),
                                         parse_named(body, "height", 1.0, false));
    if (name == "const") return SpectralKernel::constant(parse_named(body, "value", 1.0, false));
    throw invalid_parameter("kernel spec: unknown kernel '" + name + "'");
}

} // namespace gembed

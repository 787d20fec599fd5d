#pragma once
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace appqsim {

namespace detail {

// Regularized lower incomplete gamma P(a, x): series for x < a+1, Lentz
// continued fraction for the upper tail otherwise.
inline double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p domain");
    if (x == 0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // modified Lentz for the continued fraction of Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

} // namespace detail

inline double chi2_cdf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("dof must be >= 1");
    if (x <= 0) return 0.0;
    return detail::gamma_p(0.5 * dof, 0.5 * x);
}

// Quantile by bracketing bisection plus Newton polish on the smooth CDF.
inline double chi2_inv(double q, int dof) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile must be in (0,1)");
    if (dof < 1) throw std::invalid_argument("dof must be >= 1");
    double lo = 0.0, hi = dof + 10.0;
    while (chi2_cdf(hi, dof) < q) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(mid, dof) < q) lo = mid; else hi = mid;
        if (hi - lo < 1e-12 * (1.0 + hi)) break;
    }
    double x = 0.5 * (lo + hi);
    // density for Newton steps
    const double a = 0.5 * dof;
    for (int i = 0; i < 8; ++i) {
        const double f = chi2_cdf(x, dof) - q;
        const double pdf = std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a)) * 0.5;
        if (pdf <= 0) break;
        const double step = f / pdf;
        const double nx = x - step;
        if (nx <= lo || nx >= hi) break;
        x = nx;
        if (std::fabs(step) < 1e-13 * (1.0 + x)) break;
    }
    return x;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    double m = 0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double var = 0;
    if (xs.size() >= 2) {
        for (double x : xs) var += (x - m) * (x - m);
        var /= static_cast<double>(xs.size() - 1);
    }
    return {m, xs.size() >= 2 ? std::sqrt(var / static_cast<double>(xs.size())) : 0.0, xs.size()};
}

inline double sample_std(const std::vector<double>& xs) {
    const auto ms = mean_stderr(xs);
    return ms.stderr_ * std::sqrt(static_cast<double>(xs.size()));
}

} // namespace appqsim

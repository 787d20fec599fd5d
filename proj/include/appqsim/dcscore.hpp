#pragma once

// Distinguishability-cost scoring: the minimal two-qubit gate count a perfect
// device needs to certify, at the 3-sigma chi-square level, that a submitted
// measurement series is wrong.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <appqsim/rng.hpp>
#include <appqsim/stats.hpp>

namespace appqsim::dc {

inline constexpr double kCapSentinel = 1e18;

struct DCInputs {
    // index 0 corresponds to n = 1
    std::vector<double> m;        // submitted means m_n
    std::vector<double> tau;      // submitted stderrs tau_n
    std::vector<double> t_exact;  // reference t_n
    std::vector<std::vector<double>> t_site;  // per-site Z expectations t_{n,j}
    std::vector<double> f;        // site weights
    int num_sites = 0;
    int horizon = 0;              // T = 2 L_x
    int step_ratio = 1;           // r >= 1; >1 for the continuous-limit variant
    bool simple_argmax = false;   // (t-m)^2/n instead of (t-m)^2/(n v_n)
    bool fractional_shots = false;

    void check() const {
        if (horizon <= 0 || num_sites <= 0) throw std::invalid_argument("bad dimensions");
        const auto T = static_cast<std::size_t>(horizon);
        if (m.size() != T || tau.size() != T || t_exact.size() != T || t_site.size() != T)
            throw std::invalid_argument("series length must equal the time horizon");
        if (f.size() != static_cast<std::size_t>(num_sites))
            throw std::invalid_argument("weight vector size mismatch");
        if (step_ratio < 1) throw std::invalid_argument("step ratio must be >= 1");
    }
};

struct DCScore {
    double x = 0;                // log10 of mean score
    double delta_x = 0;          // std of log10(score) over samples
    int n_star = 0;              // argmax time for the mean-outcome draw
    double shots_required = 0;   // S_{n*} for the mean-outcome draw
    double mean_score = 0;
    double capped_fraction = 0;
};

// single-shot variance of the summed observable under the uncorrelated
// (product over sites) approximation
inline double unit_shot_variance(const DCInputs& in, int n) {
    const auto& ts = in.t_site[static_cast<std::size_t>(n - 1)];
    double v = 0;
    for (int j = 0; j < in.num_sites; ++j) {
        const double ft = in.f[static_cast<std::size_t>(j)] * ts[static_cast<std::size_t>(j)];
        v += 1.0 - ft * ft;
    }
    const double L = static_cast<double>(in.num_sites);
    return std::max(0.0, v / (L * L));
}

struct PointResult {
    double score = kCapSentinel;
    int n_star = 0;
    double shots = 0;
    bool capped = true;
};

// gate count for one fixed outcome vector xi (index 0 <-> n = 1)
inline PointResult score_point(const DCInputs& in, const std::vector<double>& xi) {
    in.check();
    if (xi.size() != static_cast<std::size_t>(in.horizon))
        throw std::invalid_argument("outcome vector length mismatch");
    int best_n = 0;
    double best_eff = 0;
    bool best_inf = false;
    for (int n = 1; n <= in.horizon; ++n) {
        const double d = in.t_exact[static_cast<std::size_t>(n - 1)] - xi[static_cast<std::size_t>(n - 1)];
        if (d == 0.0) continue;
        const double vn = unit_shot_variance(in, n);
        if (!in.simple_argmax && vn == 0.0) {
            if (!best_inf) { best_inf = true; best_n = n; }
            continue;
        }
        const double eff = in.simple_argmax ? d * d / n : d * d / (n * vn);
        if (!best_inf && eff > best_eff) {
            best_eff = eff;
            best_n = n;
        }
    }
    if (best_n == 0) return {};  // indistinguishable: every xi_n matches exactly
    const double d = in.t_exact[static_cast<std::size_t>(best_n - 1)] - xi[static_cast<std::size_t>(best_n - 1)];
    const double vn = unit_shot_variance(in, best_n);
    double shots = chi2_inv(0.997, in.horizon) * vn / (d * d);
    if (!in.fractional_shots) shots = std::ceil(shots);
    shots = std::max(shots, 1.0);
    PointResult r;
    r.score = 12.0 * in.num_sites * shots * best_n * in.step_ratio;
    r.n_star = best_n;
    r.shots = shots;
    r.capped = false;
    return r;
}

inline DCScore score_distribution(const DCInputs& in, int mc_samples, std::uint64_t seed) {
    in.check();
    if (mc_samples < 100) throw std::invalid_argument("need at least 100 Monte Carlo samples");
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(mc_samples));
    double mean = 0;
    int capped = 0;
    std::vector<double> xi(static_cast<std::size_t>(in.horizon));
    for (int s = 0; s < mc_samples; ++s) {
        Rng rng(mix(seed, static_cast<std::uint64_t>(s)));
        for (int n = 0; n < in.horizon; ++n)
            xi[static_cast<std::size_t>(n)] =
                in.m[static_cast<std::size_t>(n)] + in.tau[static_cast<std::size_t>(n)] * rng.normal();
        const auto pr = score_point(in, xi);
        if (pr.capped) ++capped;
        mean += pr.score / mc_samples;
        logs.push_back(std::log10(pr.score));
    }
    DCScore out;
    out.mean_score = mean;
    out.x = std::log10(mean);
    out.delta_x = sample_std(logs);
    out.capped_fraction = static_cast<double>(capped) / mc_samples;
    const auto center = score_point(in, in.m);
    out.n_star = center.n_star;
    out.shots_required = center.shots;
    return out;
}

} // namespace appqsim::dc

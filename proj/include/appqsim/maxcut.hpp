#pragma once

// Max-Cut annealing benchmark on random 3-regular graphs: pairing-model graph
// generation, spectral typicality filter, annealing circuit, success protocol.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <appqsim/circuit.hpp>
#include <appqsim/noise.hpp>
#include <appqsim/rng.hpp>
#include <appqsim/statevector.hpp>

namespace appqsim::mc {

struct CutGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    bool adjacent(int a, int b) const {
        for (auto [x, y] : edges)
            if ((x == a && y == b) || (x == b && y == a)) return true;
        return false;
    }
    std::vector<int> degrees() const {
        std::vector<int> d(static_cast<std::size_t>(n), 0);
        for (auto [x, y] : edges) {
            ++d[static_cast<std::size_t>(x)];
            ++d[static_cast<std::size_t>(y)];
        }
        return d;
    }
    bool connected() const {
        if (n == 0) return false;
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (auto [x, y] : edges) {
            adj[static_cast<std::size_t>(x)].push_back(y);
            adj[static_cast<std::size_t>(y)].push_back(x);
        }
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int cnt = 0;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            ++cnt;
            for (int w : adj[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }
        return cnt == n;
    }
};

// pairing-model generator: pair up 3N half-edge points uniformly among the
// admissible (no loop, no multi-edge) choices, restarting when stuck
inline CutGraph generate_graph(int n, std::uint64_t seed) {
    if (n < 4 || n % 2) throw std::invalid_argument("vertex count must be even and >= 4");
    Rng rng(mix(seed, 0x6d63));
    for (;;) {
        CutGraph g;
        g.n = n;
        std::vector<int> residual(static_cast<std::size_t>(n), 3);
        int remaining = 3 * n;
        bool stuck = false;
        while (remaining > 0 && !stuck) {
            // draw two half-edge points weighted by residual degree
            bool placed = false;
            for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
                auto draw = [&] {
                    std::uint64_t r = rng.below(static_cast<std::uint64_t>(remaining));
                    for (int v = 0; v < n; ++v) {
                        if (r < static_cast<std::uint64_t>(residual[static_cast<std::size_t>(v)]))
                            return v;
                        r -= static_cast<std::uint64_t>(residual[static_cast<std::size_t>(v)]);
                    }
                    return n - 1;
                };
                const int u = draw(), v = draw();
                if (u == v || g.adjacent(u, v)) continue;
                g.edges.emplace_back(std::min(u, v), std::max(u, v));
                --residual[static_cast<std::size_t>(u)];
                --residual[static_cast<std::size_t>(v)];
                remaining -= 2;
                placed = true;
            }
            if (!placed) stuck = true;  // no admissible pair found: restart
        }
        if (!stuck && g.connected()) return g;
    }
}

inline std::vector<double> sorted_spectrum(const CutGraph& g) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
    for (auto [x, y] : g.edges) a(x, y) = a(y, x) = 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    std::vector<double> ev(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) ev[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return ev;  // ascending
}

struct TypicalityStats {
    std::vector<double> rank_means;
    double v_bar = 0;
    int samples = 0;
};

inline double spectrum_deviation(const CutGraph& g, const TypicalityStats& st) {
    const auto ev = sorted_spectrum(g);
    double v = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const double d = ev[i] - st.rank_means[i];
        v += d * d;
    }
    return v;
}

inline TypicalityStats build_stats(int n, int samples, std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("need at least 100 ensemble samples");
    TypicalityStats st;
    st.samples = samples;
    st.rank_means.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<std::vector<double>> spectra;
    spectra.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        spectra.push_back(sorted_spectrum(generate_graph(n, mix(seed, static_cast<std::uint64_t>(s)))));
        for (int i = 0; i < n; ++i) st.rank_means[static_cast<std::size_t>(i)] += spectra.back()[static_cast<std::size_t>(i)] / samples;
    }
    for (const auto& ev : spectra) {
        double v = 0;
        for (int i = 0; i < n; ++i) {
            const double d = ev[static_cast<std::size_t>(i)] - st.rank_means[static_cast<std::size_t>(i)];
            v += d * d;
        }
        st.v_bar += v / samples;
    }
    return st;
}

inline bool typical(const CutGraph& g, const TypicalityStats& st) {
    return spectrum_deviation(g, st) <= 2 * st.v_bar;
}

inline constexpr double kAnnealStep = 0.25;

// |+...+> then steps with s = k dt / T; within each step the transverse-field
// rotations come first, then the edge terms; ends with a Z-basis measurement
inline Circuit build_annealing_circuit(const CutGraph& g, double t_total, double dt = kAnnealStep) {
    const double ratio = t_total / dt;
    const int steps = static_cast<int>(std::llround(ratio));
    if (steps < 1 || std::abs(ratio - steps) > 1e-9)
        throw std::invalid_argument("step_count_not_integer");
    Circuit c;
    c.num_qubits = g.n;
    for (int q = 0; q < g.n; ++q) c.ops.push_back(GateH{q});
    for (int k = 1; k <= steps; ++k) {
        const double s = k * dt / t_total;
        for (int q = 0; q < g.n; ++q) {
            GatePauliRot gx;
            gx.factors = {{q, Axis::X}};
            gx.angle = -(1 - s) * dt;
            c.ops.push_back(std::move(gx));
        }
        for (auto [x, y] : g.edges) {
            GatePauliRot gz;
            gz.factors = {{x, Axis::Z}, {y, Axis::Z}};
            gz.angle = s * dt;
            c.ops.push_back(std::move(gz));
        }
    }
    c.ops.push_back(GateMeasureAll{});
    return c;
}

inline int cut_value(const CutGraph& g, std::uint64_t bits) {
    int v = 0;
    for (auto [x, y] : g.edges) v += ((bits >> x) ^ (bits >> y)) & 1;
    return v;
}

// exhaustive optimum; Gray-code order so each step flips one vertex
inline int exact_maxcut(const CutGraph& g) {
    if (g.n > 28) throw std::invalid_argument("graph too large for enumeration");
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
    for (auto [x, y] : g.edges) {
        adj[static_cast<std::size_t>(x)].push_back(y);
        adj[static_cast<std::size_t>(y)].push_back(x);
    }
    int best = 0, cur = 0;
    std::uint64_t bits = 0;
    const std::uint64_t half = 1ULL << (g.n - 1);  // vertex n-1 fixed by symmetry
    for (std::uint64_t i = 1; i < half; ++i) {
        const int flip = __builtin_ctzll(i);
        const std::uint64_t before = bits;
        bits ^= 1ULL << flip;
        for (int w : adj[static_cast<std::size_t>(flip)]) {
            const bool was_cut = ((before >> flip) ^ (before >> w)) & 1;
            cur += was_cut ? -1 : 1;
        }
        best = std::max(best, cur);
    }
    return best;
}

struct ProtocolResult {
    double mean = 0;
    double stderr_ = 0;
    bool solved = false;
    int optimum = 0;
};

inline ProtocolResult solve_protocol(const CutGraph& g, double t_total, long long shots_per_group,
                                     int groups, const NoiseModel& noise, std::uint64_t seed,
                                     int optimum = -1) {
    if (groups < 10) throw std::invalid_argument("need at least 10 groups");
    if (optimum < 0) optimum = exact_maxcut(g);
    const Circuit circ = build_annealing_circuit(g, t_total);
    std::vector<double> ind;
    for (int gr = 0; gr < groups; ++gr) {
        Rng rng(mix(seed, static_cast<std::uint64_t>(gr)));
        bool hit = false;
        const int ntraj = (noise.p > 0.0) ? static_cast<int>(std::min<long long>(shots_per_group, 20)) : 1;
        const long long per_traj = shots_per_group / ntraj + ((shots_per_group % ntraj) ? 1 : 0);
        for (int tr = 0; tr < ntraj && !hit; ++tr) {
            StateVector st(circ.num_qubits);
            run_trajectory(st, circ, noise, rng);
            for (auto b : st.sample_shots(per_traj, rng))
                if (cut_value(g, b) == optimum) {
                    hit = true;
                    break;
                }
        }
        ind.push_back(hit ? 1.0 : 0.0);
    }
    const auto ms = mean_stderr(ind);
    ProtocolResult out;
    out.mean = ms.mean;
    out.stderr_ = ms.stderr_;
    out.solved = ms.mean - 2 * ms.stderr_ > 0.5;
    out.optimum = optimum;
    return out;
}

struct MaxcutScore {
    int score = 0;
    double time_to_solution = 0;  // N_S times mean shot runtime, if supplied
};

inline MaxcutScore score_maxcut(const std::vector<std::pair<int, bool>>& solved_per_n,
                                long long shots_per_group = 0, double mean_shot_runtime = 0) {
    MaxcutScore out;
    for (auto [n, solved] : solved_per_n)
        if (solved) out.score = std::max(out.score, n);
    out.time_to_solution = static_cast<double>(shots_per_group) * mean_shot_runtime;
    return out;
}

} // namespace appqsim::mc

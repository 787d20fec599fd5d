#pragma once

// Kagome-lattice Heisenberg benchmark: singlet-product initial state on a
// perfect matching, scheduled adiabatic Trotter circuit, shot-based energy.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <appqsim/circuit.hpp>
#include <appqsim/noise.hpp>
#include <appqsim/rng.hpp>
#include <appqsim/statevector.hpp>

namespace appqsim::kh {

struct Bond {
    int a = 0, b = 0;
    bool matched = false;
};

// Lx x Ly grid of corner-sharing triangles, open boundaries; triangle
// t = ix + Lx*iy holds sites (A,B,C) = (3t, 3t+1, 3t+2).
class KagomeLattice {
public:
    KagomeLattice(int lx, int ly) : lx_(lx), ly_(ly) {
        if (lx < 1 || ly < 1 || ly % 2) throw std::invalid_argument("height must be even and positive");
        auto tri = [&](int ix, int iy) { return ix + lx_ * iy; };
        auto A = [&](int t) { return 3 * t; };
        auto B = [&](int t) { return 3 * t + 1; };
        auto C = [&](int t) { return 3 * t + 2; };
        for (int iy = 0; iy < ly_; ++iy)
            for (int ix = 0; ix < lx_; ++ix) {
                const int t = tri(ix, iy);
                bonds_.push_back({A(t), B(t)});
                bonds_.push_back({A(t), C(t)});
                bonds_.push_back({B(t), C(t)});
                if (ix + 1 < lx_) bonds_.push_back({B(t), A(tri(ix + 1, iy))});
                if (iy + 1 < ly_) bonds_.push_back({C(t), A(tri(ix, iy + 1))});
                if (ix - 1 >= 0 && iy + 1 < ly_) bonds_.push_back({C(t), B(tri(ix - 1, iy + 1))});
            }
        // perfect matching: pair columns horizontally; an odd trailing column
        // is paired vertically within row pairs
        std::vector<std::pair<int, int>> match;
        for (int iy = 0; iy < ly_; ++iy)
            for (int ix = 0; ix + 1 < lx_; ix += 2) {
                const int l = tri(ix, iy), r = tri(ix + 1, iy);
                match.emplace_back(A(l), C(l));
                match.emplace_back(B(l), A(r));
                match.emplace_back(B(r), C(r));
            }
        if (lx_ % 2) {
            const int ix = lx_ - 1;
            for (int iy = 0; iy + 1 < ly_; iy += 2) {
                const int lo = tri(ix, iy), up = tri(ix, iy + 1);
                match.emplace_back(A(lo), B(lo));
                match.emplace_back(C(lo), A(up));
                match.emplace_back(B(up), C(up));
            }
        }
        for (auto& bd : bonds_)
            for (auto [x, y] : match)
                if ((bd.a == x && bd.b == y) || (bd.a == y && bd.b == x)) bd.matched = true;
        matching_ = std::move(match);
        int covered = 0;
        std::vector<int> deg(static_cast<std::size_t>(num_sites()), 0);
        for (auto [x, y] : matching_) {
            ++deg[static_cast<std::size_t>(x)];
            ++deg[static_cast<std::size_t>(y)];
        }
        for (int d : deg) covered += (d == 1);
        if (covered != num_sites()) throw std::logic_error("matching is not perfect");
    }

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    int num_sites() const { return 3 * lx_ * ly_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    const std::vector<std::pair<int, int>>& matching() const { return matching_; }

private:
    int lx_, ly_;
    std::vector<Bond> bonds_;
    std::vector<std::pair<int, int>> matching_;
};

struct KagomeConfig {
    int steps = 0;          // M
    double p = 0;           // noise strength
    long long shots = 1000; // per basis setting
    int trajectories = 20;
    bool printed_sign = false;  // use the global-minus Hamiltonian instead
};

// schedule weight; clamps the endpoints where tan diverges
inline double schedule_phi(double s) {
    if (s <= 0) return 0;
    if (s >= 1) return 1;
    return 0.5 * (1 + std::tanh(std::tan(s * M_PI - M_PI / 2)));
}

inline double step_size(double s) { return 0.2 * std::sqrt(std::max(0.0, 1.0 - s)); }

// (|01> - |10>)/sqrt(2) on (a, b)
inline void emit_singlet(Circuit& c, int a, int b) {
    c.ops.push_back(GateX{b});
    c.ops.push_back(GateH{a});
    c.ops.push_back(GateS{a});
    c.ops.push_back(GateS{a});
    c.ops.push_back(GateCX{a, b});
}

inline Circuit build_adiabatic_circuit(const KagomeLattice& lat, const KagomeConfig& cfg) {
    Circuit c;
    c.num_qubits = lat.num_sites();
    for (auto [a, b] : lat.matching()) emit_singlet(c, a, b);
    const double hsign = cfg.printed_sign ? -1.0 : 1.0;  // antiferromagnetic default
    const int M = cfg.steps;
    for (int k = 1; k <= M; ++k) {
        const double s = static_cast<double>(k) / M;
        const double dt = step_size(s);
        const double wi = schedule_phi(1 - s), wf = schedule_phi(s);
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
            for (const auto& bd : lat.bonds()) {
                const double coef = wf + (bd.matched ? wi : 0.0);
                if (coef == 0.0) continue;
                GatePauliRot g;
                g.factors = {{bd.a, ax}, {bd.b, ax}};
                g.angle = -hsign * coef * dt;  // exp(-i dt H) per term
                c.ops.push_back(std::move(g));
            }
    }
    return c;
}

inline double hamiltonian_sign(const KagomeConfig& cfg) { return cfg.printed_sign ? -1.0 : 1.0; }

struct EnergyEstimate {
    double e = 0, de = 0;
};

// three global settings (all-X / all-Y / all-Z); per shot each bond contributes
// the product of its endpoint outcome signs
inline EnergyEstimate measure_energy(const KagomeLattice& lat, const Circuit& circ,
                                     const KagomeConfig& cfg, std::uint64_t seed) {
    const double hsign = hamiltonian_sign(cfg);
    EnergyEstimate out;
    double var = 0;
    for (int setting = 0; setting < 3; ++setting) {
        const Axis ax = static_cast<Axis>(setting);
        const int ntraj = (cfg.p > 0.0) ? cfg.trajectories : 1;
        const long long per_traj = cfg.shots / ntraj + ((cfg.shots % ntraj) ? 1 : 0);
        NoiseModel noise{cfg.p};
        std::vector<double> shot_vals;
        for (int tr = 0; tr < ntraj; ++tr) {
            Rng rng(mix(seed, static_cast<std::uint64_t>(setting), static_cast<std::uint64_t>(tr)));
            StateVector st(circ.num_qubits);
            run_trajectory(st, circ, noise, rng);
            st.apply_basis_change(std::vector<Axis>(static_cast<std::size_t>(circ.num_qubits), ax));
            for (auto b : st.sample_shots(per_traj, rng)) {
                double v = 0;
                for (const auto& bd : lat.bonds()) {
                    const int s1 = ((b >> bd.a) & 1) ? -1 : 1;
                    const int s2 = ((b >> bd.b) & 1) ? -1 : 1;
                    v += s1 * s2;
                }
                shot_vals.push_back(hsign * v);
            }
        }
        const auto ms = mean_stderr(shot_vals);
        out.e += ms.mean;
        var += ms.stderr_ * ms.stderr_;
    }
    out.de = std::sqrt(var);
    return out;
}

// noiseless exact-expectation mode (delta E = 0)
inline double exact_energy(const KagomeLattice& lat, const Circuit& circ, const KagomeConfig& cfg) {
    StateVector st(circ.num_qubits);
    st.run(circ);
    const double hsign = hamiltonian_sign(cfg);
    double e = 0;
    for (const auto& bd : lat.bonds())
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
            PauliTerm t;
            t.coefficient = hsign;
            t.factors = {{bd.a, ax}, {bd.b, ax}};
            e += st.expectation_pauli(t);
        }
    return e;
}

struct SkhResult {
    double score = 0;
    int m_star = 0;
};

struct SweepEntry {
    int m = 0;
    double e = 0, de = 0;
};

inline SkhResult score_skh(const std::vector<SweepEntry>& entries) {
    SkhResult best;
    bool have = false;
    for (const auto& en : entries) {
        if (en.m < 1) continue;
        const double v = en.e + 2 * en.de;
        if (!have || v < best.score) {
            best.score = v;
            best.m_star = en.m;
            have = true;
        }
    }
    if (!have) throw std::invalid_argument("need at least one entry with M >= 1");
    return best;
}

} // namespace appqsim::kh

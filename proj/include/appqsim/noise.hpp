#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "statevector.hpp"

namespace appqsim {

// Two-qubit depolarizing noise, unraveled as stochastic Pauli-insertion
// trajectories: after each native two-qubit interaction, with probability p a
// uniformly random non-identity two-qubit Pauli acts on the interaction pair.
struct NoiseModel {
    double p = 0.0;
    // Optional multiplier on the number of insertion opportunities per native
    // gate, modeling routing overhead on restricted connectivity (default 1 =
    // all-to-all; SWAPs are never *counted* in scores either way).
    int routing_overhead = 1;
};

// Logical two-qubit cost of a gate. Multi-qubit rotations are charged as their
// virtual CX-ladder: weight w >= 2 costs 2w-3; a controlled rotation treats the
// control as one extra ladder leg.
inline int two_qubit_gate_cost(const Gate& g) {
    return std::visit([](const auto& gg) -> int {
        using T = std::decay_t<decltype(gg)>;
        if constexpr (std::is_same_v<T, GateCX>) return 1;
        else if constexpr (std::is_same_v<T, GatePauliRot>) {
            const int w = static_cast<int>(gg.factors.size());
            return w >= 2 ? 2 * w - 3 : 0;
        } else if constexpr (std::is_same_v<T, GateCtrlPauliRot>) {
            const int w = static_cast<int>(gg.factors.size()) + 1;
            return w >= 2 ? 2 * w - 3 : 0;
        } else return 0;
    }, g);
}

inline long long circuit_cost(const Circuit& c) {
    long long total = 0;
    for (const auto& g : c.ops) total += two_qubit_gate_cost(g);
    return total;
}

// The qubit pairs on which depolarizing opportunities sit, in ladder order:
// for a weight-w rotation over qubits (q0..q_{w-1}) the virtual ladder runs
// w-2 up pairs, the central pair, then the same w-2 pairs back down.
inline std::vector<std::pair<int, int>> noise_pairs(const Gate& g) {
    return std::visit([](const auto& gg) -> std::vector<std::pair<int, int>> {
        using T = std::decay_t<decltype(gg)>;
        if constexpr (std::is_same_v<T, GateCX>) {
            return {{gg.control, gg.target}};
        } else if constexpr (std::is_same_v<T, GatePauliRot> ||
                             std::is_same_v<T, GateCtrlPauliRot>) {
            std::vector<int> qs;
            if constexpr (std::is_same_v<T, GateCtrlPauliRot>) qs.push_back(gg.control);
            for (const auto& f : gg.factors) qs.push_back(f.qubit);
            const int w = static_cast<int>(qs.size());
            std::vector<std::pair<int, int>> out;
            if (w < 2) return out;
            for (int i = 0; i + 2 < w; ++i) out.emplace_back(qs[i], qs[i + 1]); // up
            out.emplace_back(qs[w - 2], qs[w - 1]);                              // central
            for (int i = w - 3; i >= 0; --i) out.emplace_back(qs[i], qs[i + 1]); // down
            return out;
        } else return {};
    }, g);
}

// One in 15 non-identity two-qubit Paulis; index 0..14 maps to (a1,a2) with
// a = 0:I 1:X 2:Y 3:Z, skipping (I,I).
inline void insert_two_qubit_pauli(StateVector& st, int q1, int q2, int which) {
    const int a1 = (which + 1) / 4, a2 = (which + 1) % 4;
    std::vector<PauliFactor> f;
    auto axis_of = [](int a) { return a == 1 ? Axis::X : a == 2 ? Axis::Y : Axis::Z; };
    if (a1 != 0) f.push_back({q1, axis_of(a1)});
    if (a2 != 0) f.push_back({q2, axis_of(a2)});
    if (q2 < q1 && f.size() == 2) std::swap(f[0], f[1]);
    st.apply_pauli(f);
}

// One stochastic noise realization. Deterministic given the rng state.
inline void run_trajectory(StateVector& st, const Circuit& c, const NoiseModel& noise, Rng& rng) {
    if (c.num_qubits != st.num_qubits()) throw std::invalid_argument("circuit/state qubit mismatch");
    for (const auto& g : c.ops) {
        if (std::holds_alternative<GateMeasureAll>(g)) break;
        st.apply_gate(g);
        if (noise.p <= 0.0) continue;
        for (const auto& [q1, q2] : noise_pairs(g)) {
            for (int rep = 0; rep < noise.routing_overhead; ++rep) {
                if (rng.uniform() < noise.p)
                    insert_two_qubit_pauli(st, q1, q2, static_cast<int>(rng.below(15)));
            }
        }
    }
}

inline StateVector run_trajectory(const Circuit& c, const NoiseModel& noise, std::uint64_t seed) {
    StateVector st(c.num_qubits);
    Rng rng(seed);
    run_trajectory(st, c, noise, rng);
    return st;
}

} // namespace appqsim

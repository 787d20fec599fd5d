#pragma once
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"
#include "rng.hpp"

namespace appqsim {

using cplx = std::complex<double>;

// Dense statevector, qubit 0 = least significant bit. Hard cap N <= 26: past
// that the dense representation stops being a desk-scale tool.
class StateVector {
public:
    static constexpr int kMaxQubits = 26;

    explicit StateVector(int n) : n_(n) {
        if (n < 1 || n > kMaxQubits) throw std::invalid_argument("qubit count out of supported range");
        amps_.assign(std::size_t{1} << n, cplx{0.0, 0.0});
        amps_[0] = 1.0;
    }

    void set_basis_state(std::uint64_t b) {
        if (b >= amps_.size()) throw std::invalid_argument("basis state out of range");
        std::fill(amps_.begin(), amps_.end(), cplx{0.0, 0.0});
        amps_[b] = 1.0;
    }

    int num_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    std::vector<cplx>& amplitudes() { return amps_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    double norm2() const {
        double s = 0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    // ---- single-qubit primitives ----

    void apply_h(int q) {
        const std::size_t half = std::size_t{1} << q;
        constexpr double r = 0.70710678118654752440;
        for_pairs(q, [&](cplx& a0, cplx& a1) {
            const cplx t0 = r * (a0 + a1), t1 = r * (a0 - a1);
            a0 = t0; a1 = t1;
        });
        (void)half;
    }

    void apply_phase1(int q, cplx ph) { // diag(1, ph)
        const std::size_t mask = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (i & mask) amps_[i] *= ph;
    }

    void apply_s(int q) { apply_phase1(q, cplx{0, 1}); }
    void apply_sdg(int q) { apply_phase1(q, cplx{0, -1}); }

    void apply_x(int q) {
        for_pairs(q, [](cplx& a0, cplx& a1) { std::swap(a0, a1); });
    }

    void apply_cx(int control, int target) {
        const std::size_t cm = std::size_t{1} << control, tm = std::size_t{1} << target;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if ((i & cm) && !(i & tm)) std::swap(amps_[i], amps_[i | tm]);
    }

    // ---- Pauli rotation exp(i*theta*P) ----
    //
    // Write P|b> = phase(b^x)|b^x> with x the X/Y support mask.  phase(b) =
    // i^{#Y} * (-1)^{popcount(b & (ymask|zmask))} and phase(b^x) = conj(phase(b))
    // * parity bookkeeping folded below, so each flip pair is updated once.

    void apply_pauli_rot(const std::vector<PauliFactor>& factors, double theta) {
        std::uint64_t xmask = 0, zymask = 0;
        int ny = 0;
        for (const auto& f : factors) {
            const std::uint64_t bit = std::uint64_t{1} << f.qubit;
            if (f.axis == Axis::X) xmask |= bit;
            else if (f.axis == Axis::Y) { xmask |= bit; zymask |= bit; ++ny; }
            else zymask |= bit;
        }
        const double c = std::cos(theta), s = std::sin(theta);
        // i * i^{ny} table
        static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const cplx is = cplx{0, s} * i_pow[ny & 3];
        if (xmask == 0) {
            // diagonal: new[b] = (c + i s (+-1)) a[b]
            const cplx f_even = c + is, f_odd = c - is;
            for (std::size_t b = 0; b < amps_.size(); ++b)
                amps_[b] *= (std::popcount(b & zymask) & 1) ? f_odd : f_even;
            return;
        }
        for (std::size_t b = 0; b < amps_.size(); ++b) {
            const std::size_t p = b ^ xmask;
            if (p < b) continue; // each pair once
            const int par_p = std::popcount(p & zymask) & 1;
            // phase(p) multiplies a[p] into slot b; phase(b) = conj-ish partner
            const cplx php = par_p ? -i_pow[ny & 3] : i_pow[ny & 3];
            const cplx phb = std::conj(php);
            const cplx ab = amps_[b], ap = amps_[p];
            amps_[b] = c * ab + cplx{0, s} * php * ap;
            amps_[p] = c * ap + cplx{0, s} * phb * ab;
        }
    }

    void apply_ctrl_pauli_rot(int control, int value, const std::vector<PauliFactor>& factors,
                              double theta) {
        // exp(i*theta*P) restricted to the control subspace
        std::uint64_t xmask = 0, zymask = 0;
        int ny = 0;
        for (const auto& f : factors) {
            if (f.qubit == control) throw std::invalid_argument("control overlaps rotation support");
            const std::uint64_t bit = std::uint64_t{1} << f.qubit;
            if (f.axis == Axis::X) xmask |= bit;
            else if (f.axis == Axis::Y) { xmask |= bit; zymask |= bit; ++ny; }
            else zymask |= bit;
        }
        const std::uint64_t cm = std::uint64_t{1} << control;
        const double c = std::cos(theta), s = std::sin(theta);
        static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        if (xmask == 0) {
            const cplx is = cplx{0, s} * i_pow[ny & 3];
            const cplx f_even = c + is, f_odd = c - is;
            for (std::size_t b = 0; b < amps_.size(); ++b) {
                if (static_cast<int>((b & cm) != 0) != value) continue;
                amps_[b] *= (std::popcount(b & zymask) & 1) ? f_odd : f_even;
            }
            return;
        }
        for (std::size_t b = 0; b < amps_.size(); ++b) {
            if (static_cast<int>((b & cm) != 0) != value) continue;
            const std::size_t p = b ^ xmask;
            if (p < b) continue;
            const int par_p = std::popcount(p & zymask) & 1;
            const cplx php = par_p ? -i_pow[ny & 3] : i_pow[ny & 3];
            const cplx phb = std::conj(php);
            const cplx ab = amps_[b], ap = amps_[p];
            amps_[b] = c * ab + cplx{0, s} * php * ap;
            amps_[p] = c * ap + cplx{0, s} * phb * ab;
        }
    }

    void apply_basis_change(const std::vector<Axis>& axes) {
        for (int q = 0; q < n_; ++q) {
            if (axes[static_cast<std::size_t>(q)] == Axis::X) apply_h(q);
            else if (axes[static_cast<std::size_t>(q)] == Axis::Y) { apply_sdg(q); apply_h(q); }
        }
    }

    // Apply one arbitrary Pauli string as a unitary (theta = pi/2 rotation up to
    // phase is not what we want here; this is literal P|psi>).
    void apply_pauli(const std::vector<PauliFactor>& factors) {
        std::uint64_t xmask = 0, zymask = 0;
        int ny = 0;
        for (const auto& f : factors) {
            const std::uint64_t bit = std::uint64_t{1} << f.qubit;
            if (f.axis == Axis::X) xmask |= bit;
            else if (f.axis == Axis::Y) { xmask |= bit; zymask |= bit; ++ny; }
            else zymask |= bit;
        }
        static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        if (xmask == 0) {
            for (std::size_t b = 0; b < amps_.size(); ++b)
                if (std::popcount(b & zymask) & 1) amps_[b] = -amps_[b];
            return;
        }
        for (std::size_t b = 0; b < amps_.size(); ++b) {
            const std::size_t p = b ^ xmask;
            if (p < b) continue;
            const int par_p = std::popcount(p & zymask) & 1;
            const cplx php = par_p ? -i_pow[ny & 3] : i_pow[ny & 3]; // multiplies a[p] into slot b
            const cplx ab = amps_[b];
            amps_[b] = php * amps_[p];
            amps_[p] = std::conj(php) * ab;
        }
    }

    void apply_gate(const Gate& g) {
        std::visit([&](const auto& gg) {
            using T = std::decay_t<decltype(gg)>;
            if constexpr (std::is_same_v<T, GateH>) apply_h(gg.q);
            else if constexpr (std::is_same_v<T, GateS>) apply_s(gg.q);
            else if constexpr (std::is_same_v<T, GateSdg>) apply_sdg(gg.q);
            else if constexpr (std::is_same_v<T, GateX>) apply_x(gg.q);
            else if constexpr (std::is_same_v<T, GateCX>) apply_cx(gg.control, gg.target);
            else if constexpr (std::is_same_v<T, GatePauliRot>) apply_pauli_rot(gg.factors, gg.angle);
            else if constexpr (std::is_same_v<T, GateCtrlPauliRot>)
                apply_ctrl_pauli_rot(gg.control, gg.value, gg.factors, gg.angle);
            else if constexpr (std::is_same_v<T, GateBasisChange>) apply_basis_change(gg.axes);
            // MeasureAll handled by the caller (sampling), a no-op on amplitudes
        }, g);
    }

    void run(const Circuit& c) {
        if (c.num_qubits != n_) throw std::invalid_argument("circuit/state qubit mismatch");
        for (const auto& g : c.ops) apply_gate(g);
    }

    // ---- expectations and sampling ----

    double expectation_pauli(const std::vector<PauliFactor>& factors) const {
        std::uint64_t xmask = 0, zymask = 0;
        int ny = 0;
        for (const auto& f : factors) {
            const std::uint64_t bit = std::uint64_t{1} << f.qubit;
            if (f.axis == Axis::X) xmask |= bit;
            else if (f.axis == Axis::Y) { xmask |= bit; zymask |= bit; ++ny; }
            else zymask |= bit;
        }
        static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        cplx acc = 0;
        for (std::size_t b = 0; b < amps_.size(); ++b) {
            const std::size_t p = b ^ xmask;
            const int par = std::popcount(p & zymask) & 1;
            const cplx ph = par ? -i_pow[ny & 3] : i_pow[ny & 3];
            acc += std::conj(amps_[b]) * ph * amps_[p];
        }
        return acc.real();
    }

    double expectation(const TermSum& obs) const {
        double s = 0;
        for (const auto& t : obs.terms) s += t.coefficient * expectation_pauli(t.factors);
        return s;
    }

    double expectation_z(int q) const {
        const std::size_t mask = std::size_t{1} << q;
        double s = 0;
        for (std::size_t b = 0; b < amps_.size(); ++b)
            s += (b & mask) ? -std::norm(amps_[b]) : std::norm(amps_[b]);
        return s;
    }

    // Z-basis samples from |amp|^2; deterministic in rng state.
    std::vector<std::uint64_t> sample_shots(int n_shots, Rng& rng) const {
        // cumulative inversion; dim is at most 2^26 so one prefix array is fine
        std::vector<double> cum(amps_.size());
        double run = 0;
        for (std::size_t i = 0; i < amps_.size(); ++i) { run += std::norm(amps_[i]); cum[i] = run; }
        std::vector<std::uint64_t> out;
        out.reserve(static_cast<std::size_t>(n_shots));
        for (int s = 0; s < n_shots; ++s) {
            const double u = rng.uniform() * run;
            const auto it = std::lower_bound(cum.begin(), cum.end(), u);
            out.push_back(static_cast<std::uint64_t>(it - cum.begin()));
        }
        return out;
    }

private:
    template <class F>
    void for_pairs(int q, F&& f) {
        const std::size_t mask = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (!(i & mask)) f(amps_[i], amps_[i | mask]);
    }

    int n_;
    std::vector<cplx> amps_;
};

} // namespace appqsim

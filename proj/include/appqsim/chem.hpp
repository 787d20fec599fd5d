#pragma once

// Hydrogen-chain ground-state benchmark: randomized controlled-evolution
// circuits with Poisson-sampled rotation events, return-amplitude test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <appqsim/circuit.hpp>
#include <appqsim/noise.hpp>
#include <appqsim/rng.hpp>
#include <appqsim/stats.hpp>
#include <appqsim/statevector.hpp>

namespace appqsim::qc {

struct ChemTerm {
    std::vector<PauliFactor> factors;  // strictly increasing qubits
    double c = 0;                      // positive magnitude
    double rot_sign = 1;               // sign absorbed from a negative printed coefficient
    bool single_z = false;             // static (H_I) term
};

struct ChemHamiltonian {
    int num_qubits = 0;
    int electrons = 0;
    std::vector<ChemTerm> terms;

    double static_weight() const {  // sum of c over single-Z terms
        double s = 0;
        for (const auto& t : terms)
            if (t.single_z) s += t.c;
        return s;
    }
    double ramped_weight() const {
        double s = 0;
        for (const auto& t : terms)
            if (!t.single_z) s += t.c;
        return s;
    }
};

inline ChemHamiltonian parse_hamiltonian(std::istream& in) {
    ChemHamiltonian h;
    std::string pstr;
    double coef;
    while (in >> pstr >> coef) {
        if (h.num_qubits == 0)
            h.num_qubits = static_cast<int>(pstr.size());
        else if (static_cast<int>(pstr.size()) != h.num_qubits)
            throw std::invalid_argument("inconsistent Pauli string lengths");
        ChemTerm t;
        for (int q = 0; q < h.num_qubits; ++q) {
            const char ch = pstr[static_cast<std::size_t>(q)];
            if (ch == 'I') continue;
            t.factors.push_back({q, axis_from_char(ch)});
        }
        if (t.factors.empty()) throw std::invalid_argument("identity term not allowed");
        t.c = std::abs(coef);
        t.rot_sign = coef < 0 ? -1.0 : 1.0;
        t.single_z = t.factors.size() == 1 && t.factors[0].axis == Axis::Z;
        h.terms.push_back(std::move(t));
    }
    if (h.terms.empty()) throw std::invalid_argument("empty Hamiltonian file");
    const int chain = h.num_qubits / 2;  // one orbital pair per atom
    h.electrons = chain - (chain % 2);   // drop one electron for odd chains
    return h;
}

inline ChemHamiltonian load_hamiltonian(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open Hamiltonian file: " + path);
    return parse_hamiltonian(f);
}

struct RandomizedRunConfig {
    double total_time = 0;  // T, defaults to N when 0
    double tau = 0.2;       // gate angle in (0, pi/2)
    int circuits = 20;
    long long shots = 200;  // per circuit
    double p = 0;
    std::uint64_t seed = 1;

    void check() const {
        if (!(tau > 0 && tau < M_PI / 2)) throw std::invalid_argument("gate angle out of range");
        if (circuits < 1) throw std::invalid_argument("need at least one circuit");
    }
};

inline double lambda_factor(const ChemHamiltonian& h, double t_total, double tau) {
    const double integral = t_total * (h.static_weight() + 0.5 * h.ramped_weight());
    return std::exp(-std::tan(tau / 2) * integral);
}

struct Event {
    double t = 0;
    int term = 0;
};

// Poisson events over [0, T]: static terms at uniform rate c/sin(tau); ramped
// terms at rate (t/T) c / sin(tau), times drawn as T sqrt(u)
inline std::vector<Event> sample_event_schedule(const ChemHamiltonian& h, double t_total,
                                                double tau, Rng& rng) {
    std::vector<Event> ev;
    for (std::size_t n = 0; n < h.terms.size(); ++n) {
        const auto& term = h.terms[n];
        const double rate = term.c * t_total / std::sin(tau) / (term.single_z ? 1.0 : 2.0);
        const long long count = rng.poisson(rate);
        for (long long i = 0; i < count; ++i) {
            const double u = rng.uniform();
            const double t = term.single_z ? u * t_total : t_total * std::sqrt(u);
            ev.push_back({t, static_cast<int>(n)});
        }
    }
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
    return ev;
}

// ancilla is the highest qubit; occupied orbitals are qubits 0..electrons-1
inline Circuit build_double_pass_circuit(const ChemHamiltonian& h, const RandomizedRunConfig& cfg,
                                         Rng& rng) {
    const double t_total = cfg.total_time > 0 ? cfg.total_time : h.num_qubits;
    Circuit c;
    c.num_qubits = h.num_qubits + 1;
    const int anc = h.num_qubits;
    c.ops.push_back(GateH{anc});
    for (int q = 0; q < h.electrons; ++q) c.ops.push_back(GateX{q});
    for (int value : {1, 0}) {
        const auto ev = sample_event_schedule(h, t_total, cfg.tau, rng);
        for (const auto& e : ev) {
            const auto& term = h.terms[static_cast<std::size_t>(e.term)];
            GateCtrlPauliRot g;
            g.control = anc;
            g.value = value;
            g.factors = term.factors;
            g.angle = term.rot_sign * cfg.tau;
            c.ops.push_back(std::move(g));
        }
    }
    return c;
}

struct ReturnAmplitude {
    double e = 0, de = 0;
    double lambda = 0;
};

// E = lambda^-2 <X_ancilla>, averaged over random circuits; the error bar is
// the between-circuit stderr of the per-circuit means (shot noise included)
inline ReturnAmplitude run_return_amplitude(const ChemHamiltonian& h,
                                            const RandomizedRunConfig& cfg) {
    cfg.check();
    const double t_total = cfg.total_time > 0 ? cfg.total_time : h.num_qubits;
    const double lam = lambda_factor(h, t_total, cfg.tau);
    const int anc = h.num_qubits;
    NoiseModel noise{cfg.p};
    std::vector<double> circuit_means;
    for (int r = 0; r < cfg.circuits; ++r) {
        Rng rng(mix(cfg.seed, static_cast<std::uint64_t>(r)));
        const Circuit circ = build_double_pass_circuit(h, cfg, rng);
        StateVector st(circ.num_qubits);
        run_trajectory(st, circ, noise, rng);
        st.apply_h(anc);  // X basis on the ancilla
        double acc = 0;
        for (auto b : st.sample_shots(cfg.shots, rng)) acc += ((b >> anc) & 1) ? -1.0 : 1.0;
        circuit_means.push_back(acc / cfg.shots);
    }
    const auto ms = mean_stderr(circuit_means);
    ReturnAmplitude out;
    out.lambda = lam;
    out.e = ms.mean / (lam * lam);
    out.de = ms.stderr_ / (lam * lam);
    return out;
}

inline bool pass_test(double e, double de) {
    return e - 2 * de >= 0.85 && e + 2 * de <= 1.15;
}

// largest passing size; 0 if none
inline int score_qc(const std::vector<std::pair<int, ReturnAmplitude>>& results) {
    int best = 0;
    for (const auto& [n, ra] : results)
        if (pass_test(ra.e, ra.de)) best = std::max(best, n);
    return best;
}

} // namespace appqsim::qc

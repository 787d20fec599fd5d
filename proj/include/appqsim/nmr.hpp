#pragma once

// 7-spin molecular NMR benchmark: Trotterized free-induction-decay series,
// spectrum construction, database identification, coupling-error score.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include <appqsim/circuit.hpp>
#include <appqsim/noise.hpp>
#include <appqsim/rng.hpp>
#include <appqsim/stats.hpp>
#include <appqsim/statevector.hpp>

namespace appqsim::nmr {

inline constexpr int kNumSpins = 7;
inline constexpr int kDim = 1 << kNumSpins;
inline constexpr int kNumPairs = 21;
inline constexpr double kGammaC = 67.2828;   // carbon-13
inline constexpr double kGammaH = 267.522;   // protons
inline constexpr double kTotalTime = 50.0;
inline constexpr double kRelaxTime = 10.0;

// fixed gate ordering of the couplings (1-based spin labels)
inline constexpr std::array<std::pair<int, int>, kNumPairs> kPairOrder = {{
    {1, 2}, {3, 4}, {5, 6}, {1, 7}, {2, 3}, {4, 5}, {6, 7},
    {1, 3}, {4, 6}, {2, 7}, {3, 5}, {1, 6}, {2, 4}, {5, 7},
    {1, 4}, {1, 5}, {2, 5}, {2, 6}, {3, 6}, {3, 7}, {4, 7},
}};

struct SpinSystem {
    std::array<double, kNumSpins> gamma{};
    // J[i][j] for 0-based i<j
    std::array<std::array<double, kNumSpins>, kNumSpins> j{};

    double coupling(int a, int b) const { // 0-based, any order
        return a < b ? j[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                     : j[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
    }
    double pulse_time() const { return M_PI / (2 * gamma[0]); }
};

// measured couplings of the benzene molecule with one carbon-13
inline SpinSystem benzene() {
    SpinSystem s;
    s.gamma[0] = kGammaC;
    for (int i = 1; i < kNumSpins; ++i) s.gamma[static_cast<std::size_t>(i)] = kGammaH;
    const double tbl[6][6] = {
        {158.354, 1.133, 7.607, -1.296, 7.607, 1.133},
        {0, 7.540, 1.380, 0.661, 1.380, 7.540},
        {0, 0, 7.543, 1.377, 0.658, 1.373},
        {0, 0, 0, 7.535, 1.382, 0.658},
        {0, 0, 0, 0, 7.535, 1.377},
        {0, 0, 0, 0, 0, 7.543},
    };
    for (int i = 0; i < 6; ++i)
        for (int jj = i + 1; jj < 7; ++jj)
            s.j[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)] = tbl[i][jj - 1];
    return s;
}

// initial pulse exp(i tau sum_j gamma_j X_j)
inline Circuit build_pulse(const SpinSystem& sys) {
    Circuit c;
    c.num_qubits = kNumSpins;
    for (int q = 0; q < kNumSpins; ++q) {
        GatePauliRot g;
        g.factors = {{q, Axis::X}};
        g.angle = sys.pulse_time() * sys.gamma[static_cast<std::size_t>(q)];
        c.ops.push_back(std::move(g));
    }
    return c;
}

// one Trotter step: per coupling pair, XX then YY then ZZ rotations with
// angle J dt / 4; 63 two-qubit gates
inline Circuit build_trotter_step(const SpinSystem& sys, double dt) {
    if (dt <= 0) throw std::invalid_argument("step size must be positive");
    Circuit c;
    c.num_qubits = kNumSpins;
    for (auto [a, b] : kPairOrder) {
        const int i = a - 1, jj = b - 1;
        const double ang = sys.coupling(i, jj) * dt / 4;
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
            GatePauliRot g;
            g.factors = {{i, ax}, {jj, ax}};
            g.angle = ang;
            c.ops.push_back(std::move(g));
        }
    }
    return c;
}

inline double total_magnetization(const SpinSystem& sys, std::uint64_t basis) {
    double v = 0;
    for (int q = 0; q < kNumSpins; ++q)
        v += sys.gamma[static_cast<std::size_t>(q)] * (((basis >> q) & 1) ? -1.0 : 1.0);
    return v;
}

// FID(n dt) for n = 0..steps via circuit simulation: propagate each of the 128
// computational basis states through the pulse and the Trotter steps,
// accumulating S_z-weighted expectations; trace normalized by 2^7.
inline std::vector<double> circuit_fid_series(const SpinSystem& sys, double dt, int steps,
                                              const NoiseModel& noise, std::uint64_t seed) {
    const Circuit pulse = build_pulse(sys);
    const Circuit step = build_trotter_step(sys, dt);
    std::vector<double> fid(static_cast<std::size_t>(steps) + 1, 0.0);
    TermSum sz;
    for (int q = 0; q < kNumSpins; ++q) {
        PauliTerm t;
        t.coefficient = sys.gamma[static_cast<std::size_t>(q)];
        t.factors = {{q, Axis::Z}};
        sz.terms.push_back(std::move(t));
    }
    for (std::uint64_t z = 0; z < kDim; ++z) {
        const double w = total_magnetization(sys, z);
        if (w == 0) continue;
        Rng rng(mix(seed, z));
        StateVector st(kNumSpins);
        st.set_basis_state(z);
        run_trajectory(st, pulse, noise, rng);
        fid[0] += w * st.expectation(sz) / kDim;
        for (int n = 1; n <= steps; ++n) {
            run_trajectory(st, step, noise, rng);
            fid[static_cast<std::size_t>(n)] += w * st.expectation(sz) / kDim;
        }
    }
    return fid;
}

// Exact FID on a time grid via dense eigendecomposition: FID(t) =
// tr[A(t) Pi S_z Pi^dag] / 2^7 with A(t) = e^{iHt} S_z e^{-iHt} evolved in the
// eigenbasis of H = (1/4) sum J_ij (XX + YY + ZZ).
class DenseOracle {
public:
    explicit DenseOracle(const SpinSystem& sys) {
        using Mat = Eigen::MatrixXcd;
        Mat h = Mat::Zero(kDim, kDim);
        auto add_pauli_pair = [&](int a, int b, Axis ax, double coef) {
            for (int col = 0; col < kDim; ++col) {
                int row = col;
                std::complex<double> amp = coef;
                for (int q : {a, b}) {
                    const int bit = (col >> q) & 1;
                    if (ax == Axis::X) {
                        row ^= 1 << q;
                    } else if (ax == Axis::Y) {
                        row ^= 1 << q;
                        amp *= std::complex<double>(0, bit ? -1.0 : 1.0);
                    } else {
                        amp *= bit ? -1.0 : 1.0;
                    }
                }
                h(row, col) += amp;
            }
        };
        for (int i = 0; i < kNumSpins; ++i)
            for (int jj = i + 1; jj < kNumSpins; ++jj) {
                const double c = sys.coupling(i, jj) / 4;
                if (c == 0) continue;
                for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) add_pauli_pair(i, jj, ax, c);
            }
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        energies_ = es.eigenvalues();
        const Mat v = es.eigenvectors();

        Mat sz = Mat::Zero(kDim, kDim);
        for (int z = 0; z < kDim; ++z)
            sz(z, z) = total_magnetization(sys, static_cast<std::uint64_t>(z));
        // pulse = prod_j exp(i tau gamma_j X_j), a Kronecker product of 1-qubit
        // rotations; build by applying the 1-qubit factors column by column
        Mat pulse = Mat::Identity(kDim, kDim);
        for (int q = 0; q < kNumSpins; ++q) {
            const double a = sys.pulse_time() * sys.gamma[static_cast<std::size_t>(q)];
            const std::complex<double> c = std::cos(a), is = std::complex<double>(0, std::sin(a));
            Mat next(kDim, kDim);
            for (int col = 0; col < kDim; ++col)
                for (int row = 0; row < kDim; ++row) {
                    const int flip = row ^ (1 << q);
                    next(row, col) = c * pulse(row, col) + is * pulse(flip, col);
                }
            pulse.swap(next);
        }
        const Mat c_op = pulse * sz * pulse.adjoint();
        const Mat sz_e = v.adjoint() * sz * v;
        const Mat c_e = v.adjoint() * c_op * v;
        weight_ = sz_e.cwiseProduct(c_e.transpose());
    }

    // FID at times n dt, n = 0..steps
    std::vector<double> fid_series(double dt, int steps) const {
        Eigen::MatrixXcd phase(kDim, kDim), stepm(kDim, kDim);
        for (int a = 0; a < kDim; ++a)
            for (int b = 0; b < kDim; ++b) {
                phase(a, b) = 1.0;
                stepm(a, b) = std::exp(std::complex<double>(0, (energies_(a) - energies_(b)) * dt));
            }
        std::vector<double> fid(static_cast<std::size_t>(steps) + 1);
        for (int n = 0; n <= steps; ++n) {
            fid[static_cast<std::size_t>(n)] = phase.cwiseProduct(weight_).sum().real() / kDim;
            if (n < steps) phase = phase.cwiseProduct(stepm);
        }
        return fid;
    }

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd weight_;  // Sz_ab * C_ba in the eigenbasis
};

struct SpectrumGrid {
    static constexpr int kPoints = 1000;
    static constexpr double kLo = 140.0, kHi = 175.0;
    static double omega(int i) { return kLo + (kHi - kLo) * i / (kPoints - 1); }
};

// S(w) = dt sum_n e^{iwndt} e^{-ndt/T2} d_n FID(ndt), d_n = 1/2 at endpoints;
// real part (absorption spectrum)
inline std::vector<double> spectrum_from_series(const std::vector<double>& fid, double dt,
                                                double inv_t2) {
    const std::size_t nmax = fid.size() - 1;
    std::vector<double> out(SpectrumGrid::kPoints);
    for (int i = 0; i < SpectrumGrid::kPoints; ++i) {
        const double w = SpectrumGrid::omega(i);
        std::complex<double> s = 0;
        for (std::size_t n = 0; n <= nmax; ++n) {
            const double dn = (n == 0 || n == nmax) ? 0.5 : 1.0;
            const double damp = std::exp(-static_cast<double>(n) * dt * inv_t2);
            s += std::polar(damp * dn * fid[n], w * static_cast<double>(n) * dt);
        }
        out[static_cast<std::size_t>(i)] = (dt * s).real();
    }
    return out;
}

inline double inner_f(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0 || bb == 0) throw std::invalid_argument("zero-norm spectrum");
    return ab / std::sqrt(aa * bb);
}

// best F over the 1000 circular frequency shifts
inline double best_shift_f(const std::vector<double>& hard, const std::vector<double>& cand) {
    double aa = 0, bb = 0;
    for (std::size_t i = 0; i < hard.size(); ++i) {
        aa += hard[i] * hard[i];
        bb += cand[i] * cand[i];
    }
    if (aa == 0 || bb == 0) throw std::invalid_argument("zero-norm spectrum");
    const std::size_t n = hard.size();
    double best = -2;
    for (std::size_t sh = 0; sh < n; ++sh) {
        double ab = 0;
        for (std::size_t i = 0; i < n; ++i) ab += hard[(i + sh) % n] * cand[i];
        best = std::max(best, ab / std::sqrt(aa * bb));
    }
    return best;
}

// compatibility: max over 1/T2 in [-0.5, 0.5] (coarse grid + golden-section
// refinement) and over circular shifts of F(S_hard', S_can)
inline double compatibility(const std::vector<double>& fid, double dt,
                            const std::vector<double>& cand) {
    auto eval = [&](double rate) {
        return best_shift_f(spectrum_from_series(fid, dt, rate), cand);
    };
    const int coarse = 21;
    double best_r = 0, best_v = -2;
    for (int i = 0; i < coarse; ++i) {
        const double r = -0.5 + i * (1.0 / (coarse - 1));
        const double v = eval(r);
        if (v > best_v) {
            best_v = v;
            best_r = r;
        }
    }
    // golden-section around the best coarse point
    double lo = std::max(-0.5, best_r - 0.05), hi = std::min(0.5, best_r + 0.05);
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < 30; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = eval(x1);
        }
    }
    return std::max({best_v, f1, f2});
}

struct DatabaseSample {
    SpinSystem system;
    std::vector<double> spectrum;
};

inline constexpr double kDatabaseDt = 0.01;

// 100 candidate spectra: sample 0 exact, samples m+1 perturbed by
// 0.01 * 2^(0.1 m) * N(0,1) per coupling, m = 0..98
inline std::vector<DatabaseSample> generate_database(std::uint64_t seed) {
    const SpinSystem base = benzene();
    const int steps = static_cast<int>(std::llround(kTotalTime / kDatabaseDt));
    std::vector<DatabaseSample> db;
    db.reserve(100);
    for (int s = 0; s < 100; ++s) {
        SpinSystem sys = base;
        if (s > 0) {
            const int m = s - 1;
            Rng rng(mix(seed, static_cast<std::uint64_t>(s)));
            const double scale = 0.01 * std::pow(2.0, 0.1 * m);
            for (int i = 0; i < kNumSpins; ++i)
                for (int jj = i + 1; jj < kNumSpins; ++jj)
                    sys.j[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)] +=
                        scale * rng.normal();
        }
        DenseOracle oracle(sys);
        const auto fid = oracle.fid_series(kDatabaseDt, steps);
        db.push_back({sys, spectrum_from_series(fid, kDatabaseDt, 1.0 / kRelaxTime)});
    }
    return db;
}

inline double delta_j(const SpinSystem& truth, const SpinSystem& est) {
    double acc = 0;
    for (int i = 0; i < kNumSpins; ++i)
        for (int jj = i + 1; jj < kNumSpins; ++jj) {
            const double d = truth.coupling(i, jj) - est.coupling(i, jj);
            acc += d * d;
        }
    return std::sqrt(acc / kNumPairs);
}

struct NmrScore {
    double s_nmr = 0;
    double stderr_ = 0;
    std::vector<int> identified;  // best sample index per database
};

inline NmrScore score_nmr(const std::vector<double>& fid, double dt, int n_databases,
                          std::uint64_t seed) {
    if (n_databases < 1) throw std::invalid_argument("need at least one database");
    const SpinSystem truth = benzene();
    NmrScore out;
    std::vector<double> djs;
    for (int d = 0; d < n_databases; ++d) {
        const auto db = generate_database(mix(seed, static_cast<std::uint64_t>(d), 0x6e6d72));
        int best = 0;
        double best_c = -2;
        for (std::size_t s = 0; s < db.size(); ++s) {
            const double c = compatibility(fid, dt, db[s].spectrum);
            if (c > best_c) {
                best_c = c;
                best = static_cast<int>(s);
            }
        }
        out.identified.push_back(best);
        djs.push_back(delta_j(truth, db[static_cast<std::size_t>(best)].system));
    }
    const auto ms = mean_stderr(djs);
    out.s_nmr = ms.mean;
    out.stderr_ = djs.size() > 1 ? ms.stderr_ : 0.0;
    return out;
}

} // namespace appqsim::nmr

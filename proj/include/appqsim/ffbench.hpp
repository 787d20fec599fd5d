#pragma once
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"
#include "noise.hpp"
#include "rng.hpp"
#include "series.hpp"
#include "statevector.hpp"
#include "stats.hpp"

// Conducting-materials benchmark, circuit side: periodic square lattice of
// spinless fermions under a compact encoding with one ancilla per alternate
// face, toric-code ancilla initialization, and a 4-layer Trotter step of
// weight-3 rotations.

namespace appqsim::ff {

struct Edge {
    int i, j;        // site qubits
    int ancilla;     // ancilla qubit
    Axis pauli;      // ancilla Pauli: Y on horizontal edges, X on vertical
    int sign;        // folded into rotation angles (vertical edge left of its ancilla: -1)
    bool horizontal;
    int row, col;    // row = y of the edge, col = x
};

class EncodedLattice {
public:
    EncodedLattice(int lx, int ly) : lx_(lx), ly_(ly) {
        if (lx < 2 || ly < 2 || lx % 2 || ly % 2)
            throw std::invalid_argument("lattice dimensions must be even and >= 2");
        // ancillas on faces (fx,fy) with fx+fy even, numbered row by row after sites
        int id = num_sites();
        for (int fy = 0; fy < ly_; ++fy)
            for (int fx = 0; fx < lx_; ++fx)
                if ((fx + fy) % 2 == 0) anc_[{fx, fy}] = id++;
        nq_ = id;
        // horizontal edges (x,y)-(x+1,y): ancilla on face (x,y) when x+y even,
        // else the face below; always Y, sign +1
        for (int y = 0; y < ly_; ++y)
            for (int x = 0; x < lx_; ++x) {
                const int a = ((x + y) % 2 == 0) ? ancilla(x, y) : ancilla(x, y - 1);
                edges_.push_back({site(x, y), site(x + 1, y), a, Axis::Y, +1, true, y, x});
            }
        // vertical edges (x,y)-(x,y+1): x+y even -> edge sits left of its
        // ancilla face (x,y), sign -1; else right of face (x-1,y), sign +1
        for (int y = 0; y < ly_; ++y)
            for (int x = 0; x < lx_; ++x) {
                const bool left = (x + y) % 2 == 0;
                const int a = left ? ancilla(x, y) : ancilla(x - 1, y);
                edges_.push_back({site(x, y), site(x, y + 1), a, Axis::X, left ? -1 : +1, false, y, x});
            }
    }

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    int num_sites() const { return lx_ * ly_; }
    int num_qubits() const { return nq_; }
    const std::vector<Edge>& edges() const { return edges_; }

    int site(int x, int y) const {
        x = ((x % lx_) + lx_) % lx_;
        y = ((y % ly_) + ly_) % ly_;
        return x + lx_ * y;
    }

    int ancilla(int fx, int fy) const {
        fx = ((fx % lx_) + lx_) % lx_;
        fy = ((fy % ly_) + ly_) % ly_;
        return anc_.at({fx, fy});
    }

    bool has_ancilla(int fx, int fy) const {
        fx = ((fx % lx_) + lx_) % lx_;
        fy = ((fy % ly_) + ly_) % ly_;
        return (fx + fy) % 2 == 0;
    }

    // neighbor ancillas used by the entangling patterns
    int a1(int fx, int fy) const { return ancilla(fx - 1, fy + 1); }
    int a2(int fx, int fy) const { return ancilla(fx + 1, fy + 1); }
    int a3(int fx, int fy) const { return ancilla(fx, fy + 2); }
    int a4(int fx, int fy) const { return ancilla(fx + 1, fy - 1); }
    int a5(int fx, int fy) const { return ancilla(fx + 2, fy); }

    std::vector<std::pair<int, int>> ancilla_faces() const {
        std::vector<std::pair<int, int>> out;
        for (int fy = 0; fy < ly_; ++fy)
            for (int fx = 0; fx < lx_; ++fx)
                if ((fx + fy) % 2 == 0) out.emplace_back(fx, fy);
        return out;
    }

private:
    int lx_, ly_, nq_;
    std::map<std::pair<int, int>, int> anc_;
    std::vector<Edge> edges_;
};

struct FFConfig {
    int lx = 4, ly = 4;
    double dt = 0.2;
    std::vector<int> occupation;   // n_j; empty -> default (lower half rows occupied)
    std::vector<double> weights;   // f_j; empty -> default (-1 lower half, +1 upper)
    double p = 0.0;
    int shots = 1000;
    int trajectories = 20;
};

inline std::vector<int> default_occupation(const EncodedLattice& lat) {
    std::vector<int> n(static_cast<std::size_t>(lat.num_sites()));
    for (int j = 0; j < lat.num_sites(); ++j)
        n[static_cast<std::size_t>(j)] = (j / lat.lx() < lat.ly() / 2) ? 1 : 0;
    return n;
}

inline std::vector<double> default_weights(const EncodedLattice& lat) {
    std::vector<double> f(static_cast<std::size_t>(lat.num_sites()));
    for (int j = 0; j < lat.num_sites(); ++j)
        f[static_cast<std::size_t>(j)] = (j / lat.lx() < lat.ly() / 2) ? -1.0 : 1.0;
    return f;
}

// ---- initial state ----
//
// Ancilla target: +1 eigenstate of X-plaquettes on the ancilla-free faces in
// odd columns, Z-plaquettes on those in even columns, and Z products along
// face-row 0 and face-column 1.  Built by rooting one entangler (H + 3 CX) per
// independent X-plaquette: the "V" pattern roots the plaquette above an
// ancilla, the "Vt" pattern the plaquette to its right; one plaquette is
// redundant (global product is identity) and is skipped.

namespace detail {

inline void push_cx_chain(std::vector<Gate>& ops, int root, std::vector<int> targets) {
    // drop self-loops (periodic collapse) and cancel adjacent duplicates
    std::vector<int> kept;
    for (int t : targets) {
        if (t == root) continue;
        if (!kept.empty() && kept.back() == t) kept.pop_back();
        else kept.push_back(t);
    }
    ops.emplace_back(GateH{root});
    for (int t : kept) ops.emplace_back(GateCX{root, t});
}

} // namespace detail

inline Circuit build_initial_state_circuit(const EncodedLattice& lat,
                                           const std::vector<int>& occupation) {
    Circuit c;
    c.num_qubits = lat.num_qubits();
    for (int j = 0; j < lat.num_sites(); ++j)
        if (occupation[static_cast<std::size_t>(j)]) c.ops.emplace_back(GateX{j});

    // V entanglers: plaquettes (px,py) for even py from the top down to 2;
    // root is the ancilla below the plaquette.
    for (int py = lat.ly() - 2; py >= 2; py -= 2)
        for (int px = 1; px < lat.lx(); px += 2) {
            const int root = lat.ancilla(px, py - 1);
            detail::push_cx_chain(c.ops, root,
                                  {lat.a1(px, py - 1), lat.a2(px, py - 1), lat.a3(px, py - 1)});
        }
    // Vt entanglers: plaquettes (px,0), px = Lx-3 down to 1; root left of the
    // plaquette; the redundant plaquette (Lx-1,0) is dropped.
    for (int px = lat.lx() - 3; px >= 1; px -= 2) {
        const int fx = px - 1;
        const int root = lat.ancilla(fx, 0);
        detail::push_cx_chain(c.ops, root, {lat.a5(fx, 0), lat.a4(fx, 0), lat.a2(fx, 0)});
    }
    // Q layer: HS' on odd face-rows, SHS on even face-rows
    for (auto [fx, fy] : lat.ancilla_faces()) {
        const int a = lat.ancilla(fx, fy);
        if (fy % 2 == 1) {
            c.ops.emplace_back(GateSdg{a});
            c.ops.emplace_back(GateH{a});
        } else {
            c.ops.emplace_back(GateS{a});
            c.ops.emplace_back(GateH{a});
            c.ops.emplace_back(GateS{a});
        }
    }
    return c;
}

// Stabilizers of the ancilla prep (before the Q layer), all expected +1.
// Returned as factor lists over the full qubit index space.
inline std::vector<std::vector<PauliFactor>> toric_stabilizers(const EncodedLattice& lat) {
    std::vector<std::vector<PauliFactor>> out;
    auto reduced = [&](int px, int py, Axis ax) {
        std::map<int, int> mult;
        mult[lat.ancilla(px - 1, py)]++;
        mult[lat.ancilla(px + 1, py)]++;
        mult[lat.ancilla(px, py - 1)]++;
        mult[lat.ancilla(px, py + 1)]++;
        std::vector<PauliFactor> fs;
        for (auto [q, m] : mult)
            if (m % 2) fs.push_back({q, ax});
        return fs;
    };
    for (int py = 0; py < lat.ly(); ++py)
        for (int px = 0; px < lat.lx(); ++px) {
            if ((px + py) % 2 == 0) continue; // ancilla face, not a plaquette
            auto fs = reduced(px, py, px % 2 ? Axis::X : Axis::Z);
            if (!fs.empty()) out.push_back(std::move(fs));
        }
    std::vector<PauliFactor> row0, col1;
    for (int fx = 0; fx < lat.lx(); fx += 2) row0.push_back({lat.ancilla(fx, 0), Axis::Z});
    for (int fy = 1; fy < lat.ly(); fy += 2) col1.push_back({lat.ancilla(1, fy), Axis::Z});
    out.push_back(std::move(row0));
    out.push_back(std::move(col1));
    return out;
}

// Prep circuit without the Q layer (for stabilizer checks).
inline Circuit build_prep_before_q(const EncodedLattice& lat, const std::vector<int>& occupation) {
    Circuit c;
    c.num_qubits = lat.num_qubits();
    for (int j = 0; j < lat.num_sites(); ++j)
        if (occupation[static_cast<std::size_t>(j)]) c.ops.emplace_back(GateX{j});
    for (int py = lat.ly() - 2; py >= 2; py -= 2)
        for (int px = 1; px < lat.lx(); px += 2) {
            const int fy = py - 1;
            detail::push_cx_chain(c.ops, lat.ancilla(px, fy),
                                  {lat.a1(px, fy), lat.a2(px, fy), lat.a3(px, fy)});
        }
    for (int px = lat.lx() - 3; px >= 1; px -= 2) {
        const int fx = px - 1;
        detail::push_cx_chain(c.ops, lat.ancilla(fx, 0),
                              {lat.a5(fx, 0), lat.a4(fx, 0), lat.a2(fx, 0)});
    }
    return c;
}

// ---- Trotter step ----
//
// U = U_{|,2} U_{|,1} U_{-,2} U_{-,1}; each factor is a product of weight-3
// rotations exp(i*sign*dt/2 * L_i L_j P_a), horizontal layers split by edge
// row parity (odd-row XX before even-row YY in U_{-,1}), vertical layers by
// column parity.  Rightmost exponential factors are emitted first.

inline Circuit build_trotter_step(const EncodedLattice& lat, double dt) {
    Circuit c;
    c.num_qubits = lat.num_qubits();
    auto layer = [&](bool horizontal, Axis site_axis, int parity) {
        for (const auto& e : lat.edges()) {
            if (e.horizontal != horizontal) continue;
            const int rc = horizontal ? e.row : e.col;
            if (rc % 2 != parity) continue;
            std::vector<PauliFactor> fs{{e.i, site_axis}, {e.j, site_axis}, {e.ancilla, e.pauli}};
            std::sort(fs.begin(), fs.end(),
                      [](const PauliFactor& a, const PauliFactor& b) { return a.qubit < b.qubit; });
            c.ops.emplace_back(GatePauliRot{std::move(fs), e.sign * dt / 2.0});
        }
    };
    layer(true, Axis::X, 1); layer(true, Axis::Y, 0);   // U_{-,1}
    layer(true, Axis::Y, 1); layer(true, Axis::X, 0);   // U_{-,2}
    layer(false, Axis::X, 1); layer(false, Axis::Y, 0); // U_{|,1}
    layer(false, Axis::Y, 1); layer(false, Axis::X, 0); // U_{|,2}
    return c;
}

// ---- estimation ----

struct ObservablePoint {
    SeriesPoint point;                 // mean/stderr of sum_j f_j n_j
    std::vector<double> z_site;       // shot-estimated <Z_j> per site
};

// Shot-based estimate after n Trotter steps under noise. The observable is the
// fermionic form sum_j f_j (1-Z_j)/2; per-shot values feed the stderr so site
// correlations are included.
inline ObservablePoint estimate_observable(const EncodedLattice& lat, const FFConfig& cfg, int n,
                                           std::uint64_t seed) {
    const auto occ = cfg.occupation.empty() ? default_occupation(lat) : cfg.occupation;
    const auto f = cfg.weights.empty() ? default_weights(lat) : cfg.weights;
    Circuit circ = build_initial_state_circuit(lat, occ);
    const Circuit step = build_trotter_step(lat, cfg.dt);
    for (int k = 0; k < n; ++k)
        circ.ops.insert(circ.ops.end(), step.ops.begin(), step.ops.end());

    const int ntraj = (cfg.p > 0.0) ? cfg.trajectories : 1;
    const int per_traj = cfg.shots / ntraj + ((cfg.shots % ntraj) ? 1 : 0);
    std::vector<double> shot_vals;
    std::vector<double> zsum(static_cast<std::size_t>(lat.num_sites()), 0.0);
    long long total_shots = 0;
    NoiseModel noise{cfg.p};
    for (int tr = 0; tr < ntraj; ++tr) {
        Rng rng(mix(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(tr)));
        StateVector st(circ.num_qubits);
        run_trajectory(st, circ, noise, rng);
        const auto samples = st.sample_shots(per_traj, rng);
        for (auto b : samples) {
            double v = 0;
            for (int j = 0; j < lat.num_sites(); ++j) {
                const int bit = static_cast<int>((b >> j) & 1);
                v += f[static_cast<std::size_t>(j)] * bit;
                zsum[static_cast<std::size_t>(j)] += bit ? -1.0 : 1.0;
            }
            shot_vals.push_back(v);
            ++total_shots;
        }
    }
    const auto ms = mean_stderr(shot_vals);
    ObservablePoint out;
    out.point = {n, std::nullopt, ms.mean, ms.stderr_, total_shots};
    out.z_site.resize(static_cast<std::size_t>(lat.num_sites()));
    for (int j = 0; j < lat.num_sites(); ++j)
        out.z_site[static_cast<std::size_t>(j)] = zsum[static_cast<std::size_t>(j)] / static_cast<double>(total_shots);
    return out;
}

// Noiseless exact expectation of the fermionic observable after n steps (no
// shots) — the end-to-end check against the momentum-space references.
inline double exact_circuit_observable(const EncodedLattice& lat, const FFConfig& cfg, int n) {
    const auto occ = cfg.occupation.empty() ? default_occupation(lat) : cfg.occupation;
    const auto f = cfg.weights.empty() ? default_weights(lat) : cfg.weights;
    Circuit circ = build_initial_state_circuit(lat, occ);
    StateVector st(circ.num_qubits);
    st.run(circ);
    const Circuit step = build_trotter_step(lat, cfg.dt);
    for (int k = 0; k < n; ++k) st.run(step);
    double v = 0;
    for (int j = 0; j < lat.num_sites(); ++j)
        v += f[static_cast<std::size_t>(j)] * 0.5 * (1.0 - st.expectation_z(j));
    return v;
}

} // namespace appqsim::ff

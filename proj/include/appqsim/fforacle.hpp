#pragma once
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ffbench.hpp"

// Polynomial-time references for the conducting-materials benchmark: the
// observable after n Trotter steps, per-site occupations, the continuous-time
// limit, and higher-weight observables via Wick contractions.  Everything here
// reduces to 2x2 momentum transfer matrices
//   U_k = [[1-2 s^2 cos^2 k - i s2 cos k,  i s^2 sin 2k],
//          [i s^2 sin 2k,                  1-2 s^2 cos^2 k + i s2 cos k]]
// with s = sin(dt), s2 = sin(2 dt); a step is M = U_ky U_kx and the n-step
// coefficients are the first row of M^n, evaluated in closed form through the
// rotation angle eps_k (Chebyshev identity sin(n eps)/sin(eps)).

namespace appqsim::ff {

struct Momentum {
    double kx, ky;
};

// Momentum grid of one sector (phx, phy in {0, 1/2}); |K| = L.
inline std::vector<Momentum> momentum_grid(int lx, int ly, double phx, double phy) {
    std::vector<Momentum> ks;
    ks.reserve(static_cast<std::size_t>(lx) * static_cast<std::size_t>(ly));
    for (int y = 0; y < ly; ++y)
        for (int x = 0; x < lx; ++x)
            ks.push_back({2.0 * M_PI * (x + phx) / lx, 2.0 * M_PI * (y + phy) / ly});
    return ks;
}

inline std::complex<double> uk_entry(double k, double dt, int r, int c) {
    const double s2 = std::sin(dt) * std::sin(dt);
    const double sd2 = std::sin(2 * dt);
    if (r == c)
        return {1 - 2 * s2 * std::cos(k) * std::cos(k), (r == 0 ? -1.0 : 1.0) * sd2 * std::cos(k)};
    return {0.0, s2 * std::sin(2 * k)};
}

// eigenphase of M = U_ky U_kx; sgn(0) := +1
inline double epsilon_k(Momentum k, double dt) {
    const double s2 = std::sin(dt) * std::sin(dt);
    const double cx = std::cos(k.kx), cy = std::cos(k.ky);
    double arg = 1 - 2 * s2 * (cx + cy) * (cx + cy) +
                 4 * s2 * s2 * cx * cy * (1 + std::cos(k.kx + k.ky));
    arg = std::min(1.0, std::max(-1.0, arg));
    const double sgn = (cx + cy >= 0) ? 1.0 : -1.0;
    return sgn * std::acos(arg);
}

struct BogoliubovCoeffs {
    std::complex<double> alpha, beta;
    double eps;
};

// First row of M^n via the SU(2) power identity: M^n = sr(n) M - sr(n-1) I
// scaled so that alpha_n = cos(n eps) + (Im alpha_1 / sin eps)-style terms;
// concretely alpha_n = e^{-i n eps} + (alpha_1 - e^{-i eps}) sr(n),
// beta_n = beta_1 sr(n), with sr(n) = sin(n eps)/sin(eps) (-> n when eps -> 0).
inline BogoliubovCoeffs alpha_beta(int n, Momentum k, double dt) {
    const double eps = epsilon_k(k, dt);
    const std::complex<double> a1 =
        uk_entry(k.ky, dt, 0, 0) * uk_entry(k.kx, dt, 0, 0) +
        uk_entry(k.ky, dt, 0, 1) * uk_entry(k.kx, dt, 1, 0);
    const std::complex<double> b1 =
        uk_entry(k.ky, dt, 0, 0) * uk_entry(k.kx, dt, 0, 1) +
        uk_entry(k.ky, dt, 0, 1) * uk_entry(k.kx, dt, 1, 1);
    double sr; // sin(n eps)/sin(eps)
    const double se = std::sin(eps);
    if (std::fabs(se) < 1e-8) {
        // eps near 0 or pi: Chebyshev recurrence U_{m+1} = 2 cos(eps) U_m - U_{m-1}
        const double ce = std::cos(eps);
        double um1 = 0.0, u = 1.0; // U_0, U_1 at m=0 step
        for (int m = 1; m < n; ++m) {
            const double nx = 2 * ce * u - um1;
            um1 = u;
            u = nx;
        }
        sr = (n == 0) ? 0.0 : u;
    } else {
        sr = std::sin(n * eps) / se;
    }
    BogoliubovCoeffs out;
    const std::complex<double> e_min = std::exp(std::complex<double>(0, -eps));
    out.alpha = std::exp(std::complex<double>(0, -n * eps)) + (a1 - e_min) * sr;
    out.beta = b1 * sr;
    out.eps = eps;
    if (n == 0) { out.alpha = 1.0; out.beta = 0.0; }
    return out;
}

namespace detail {

// discrete FT on the lattice: g(k) = (1/L) sum_j g_j e^{i j.k}
inline std::complex<double> fourier(const EncodedLattice& lat, const std::vector<double>& g,
                                    double dx, double dy) {
    std::complex<double> acc = 0;
    for (int y = 0; y < lat.ly(); ++y)
        for (int x = 0; x < lat.lx(); ++x)
            acc += g[static_cast<std::size_t>(lat.site(x, y))] *
                   std::exp(std::complex<double>(0, x * dx + y * dy));
    return acc / static_cast<double>(lat.num_sites());
}

} // namespace detail

// Exact fermionic observable sum_j f_j <n_j> after n Trotter steps: the mean of
// the four momentum sectors (each carries weight 1/4).
inline double exact_O(const EncodedLattice& lat, int n, double dt, const std::vector<double>& f,
                      const std::vector<int>& occupation) {
    std::vector<double> occ_d(occupation.begin(), occupation.end());
    double total = 0;
    for (double phx : {0.0, 0.5})
        for (double phy : {0.0, 0.5}) {
            const auto ks = momentum_grid(lat.lx(), lat.ly(), phx, phy);
            std::vector<BogoliubovCoeffs> ab;
            ab.reserve(ks.size());
            for (const auto& k : ks) ab.push_back(alpha_beta(n, k, dt));
            std::complex<double> sector = 0;
            for (std::size_t ik = 0; ik < ks.size(); ++ik)
                for (std::size_t iq = 0; iq < ks.size(); ++iq) {
                    const double dx = ks[iq].kx - ks[ik].kx, dy = ks[iq].ky - ks[ik].ky;
                    const auto fo = detail::fourier(lat, f, dx, dy);
                    const auto no = detail::fourier(lat, occ_d, -dx, -dy);
                    sector += fo *
                              (std::conj(ab[ik].alpha) * ab[iq].alpha -
                               std::conj(ab[ik].beta) * ab[iq].beta) *
                              no;
                }
            std::complex<double> btot = 0;
            for (const auto& c : ab) btot += std::norm(c.beta);
            sector += detail::fourier(lat, f, 0, 0) * btot;
            total += sector.real();
        }
    return total / 4.0;
}

// Per-site occupation <n_j> after n steps (f = indicator on site j); also the
// Z expectation t_{n,j} = 1 - 2<n_j> needed by the distinguishability score.
inline double exact_site_occupation(const EncodedLattice& lat, int n, double dt, int j,
                                    const std::vector<int>& occupation) {
    std::vector<double> f(static_cast<std::size_t>(lat.num_sites()), 0.0);
    f[static_cast<std::size_t>(j)] = 1.0;
    return exact_O(lat, n, dt, f, occupation);
}

// All-site occupations in one pass (O(L^2) per sector, shared coefficients).
inline std::vector<double> exact_all_site_occupations(const EncodedLattice& lat, int n, double dt,
                                                      const std::vector<int>& occupation) {
    const int L = lat.num_sites();
    std::vector<double> occ_d(occupation.begin(), occupation.end());
    std::vector<double> out(static_cast<std::size_t>(L), 0.0);
    for (double phx : {0.0, 0.5})
        for (double phy : {0.0, 0.5}) {
            const auto ks = momentum_grid(lat.lx(), lat.ly(), phx, phy);
            std::vector<BogoliubovCoeffs> ab;
            ab.reserve(ks.size());
            for (const auto& k : ks) ab.push_back(alpha_beta(n, k, dt));
            for (std::size_t ik = 0; ik < ks.size(); ++ik)
                for (std::size_t iq = 0; iq < ks.size(); ++iq) {
                    const double dx = ks[iq].kx - ks[ik].kx, dy = ks[iq].ky - ks[ik].ky;
                    const auto no = detail::fourier(lat, occ_d, -dx, -dy);
                    const auto coef = (std::conj(ab[ik].alpha) * ab[iq].alpha -
                                       std::conj(ab[ik].beta) * ab[iq].beta) * no;
                    // f-hat for the indicator on site (x,y) is e^{i(x dx + y dy)}/L
                    for (int y = 0; y < lat.ly(); ++y)
                        for (int x = 0; x < lat.lx(); ++x)
                            out[static_cast<std::size_t>(lat.site(x, y))] +=
                                (coef * std::exp(std::complex<double>(0, x * dx + y * dy)) /
                                 static_cast<double>(L)).real();
                }
            double btot = 0;
            for (const auto& c : ab) btot += std::norm(c.beta);
            for (auto& v : out) v += btot / L;
        }
    for (auto& v : out) v /= 4.0;
    return out;
}

// Continuous-time limit: sectors K_{0,1/2} and K_{1/2,0} only, with dispersion
// eps_k = 2(cos kx + cos ky); modes evolve by pure phases (no beta mixing).
inline double exact_O_continuous(const EncodedLattice& lat, double t, const std::vector<double>& f,
                                 const std::vector<int>& occupation) {
    std::vector<double> occ_d(occupation.begin(), occupation.end());
    double total = 0;
    const std::pair<double, double> sectors[2] = {{0.0, 0.5}, {0.5, 0.0}};
    for (const auto& [phx, phy] : sectors) {
        const auto ks = momentum_grid(lat.lx(), lat.ly(), phx, phy);
        std::complex<double> sector = 0;
        for (std::size_t ik = 0; ik < ks.size(); ++ik) {
            const double ek = 2 * (std::cos(ks[ik].kx) + std::cos(ks[ik].ky));
            for (std::size_t iq = 0; iq < ks.size(); ++iq) {
                const double eq = 2 * (std::cos(ks[iq].kx) + std::cos(ks[iq].ky));
                const double dx = ks[iq].kx - ks[ik].kx, dy = ks[iq].ky - ks[ik].ky;
                sector += detail::fourier(lat, f, dx, dy) *
                          std::exp(std::complex<double>(0, t * (ek - eq))) *
                          detail::fourier(lat, occ_d, -dx, -dy);
            }
        }
        total += sector.real();
    }
    return total / 2.0;
}

// ---- higher-weight observables (Wick) ----
//
// O_[w] = sum over w-subsets of f_{j1}..f_{jw} Z_{j1}..Z_{jw}, expressed through
// power sums of S_m = sum_j f_j^m Z_j: O_[1]=S_1, O_[2]=(S_1^2-S_2)/2,
// O_[3]=(S_1^3-3 S_1 S_2 + 2 S_3)/6.  Expectations of Z products are Wick
// contractions in the two-point functions of the time-evolved modes.

// Per-sector two-point functions after n steps.  Modes evolve as
// c(k, n) = alpha_n(k) c(k) + beta_n(k) c^dag(-k); in the real-space product
// state the correlators factorize through the kernels
//   A(d) = (1/L) sum_k alpha_k e^{ik.d},  B(d) likewise with beta,
//   C(d) = (1/L) sum_k |beta_k|^2 e^{ik.d},  D(d) = (1/L) sum_k alpha_k beta_{-k} e^{ik.d}
// giving
//   G_ij = <c_i^dag c_j> = sum_m n_m [A*(i-m)A(j-m) - B*(i-m)B(j-m)] + C(j-i)
//   F_ij = <c_i c_j>     = D(i-j) + sum_m n_m [B(i-m)A(j-m) - A(i-m)B(j-m)]
//   <c_i^dag c_j^dag>    = conj(F_ji).
class SectorCorrelators {
public:
    SectorCorrelators(const EncodedLattice& lat, int n, double dt,
                      const std::vector<int>& occupation, double phx, double phy)
        : lat_(lat), L_(lat.num_sites()) {
        const int lx = lat.lx(), ly = lat.ly();
        const auto ks = momentum_grid(lx, ly, phx, phy);
        std::vector<BogoliubovCoeffs> ab;
        ab.reserve(ks.size());
        for (const auto& k : ks) ab.push_back(alpha_beta(n, k, dt));
        // index of -k on the grid
        auto neg_index = [&](int x, int y) {
            const int nx = (phx == 0.0) ? (lx - x) % lx : (lx - 1 - x);
            const int nyy = (phy == 0.0) ? (ly - y) % ly : (ly - 1 - y);
            return nx + lx * nyy;
        };
        // displacements are not reducible mod L in half-offset directions
        // (kernels are antiperiodic there), so tabulate the full range.
        const int wx = 2 * lx - 1, wy = 2 * ly - 1;
        const std::size_t nker = static_cast<std::size_t>(wx) * wy;
        std::vector<std::complex<double>> A(nker), B(nker), C(nker), D(nker);
        for (int dy = -(ly - 1); dy <= ly - 1; ++dy)
            for (int dx = -(lx - 1); dx <= lx - 1; ++dx) {
                std::complex<double> a = 0, b = 0, cc = 0, d = 0;
                for (int y = 0; y < ly; ++y)
                    for (int x = 0; x < lx; ++x) {
                        const std::size_t ik = static_cast<std::size_t>(x + lx * y);
                        const auto ph = std::exp(std::complex<double>(
                            0, ks[ik].kx * dx + ks[ik].ky * dy));
                        a += ab[ik].alpha * ph;
                        b += ab[ik].beta * ph;
                        cc += std::norm(ab[ik].beta) * ph;
                        d += ab[ik].alpha * ab[static_cast<std::size_t>(neg_index(x, y))].beta * ph;
                    }
                const std::size_t di =
                    static_cast<std::size_t>((dx + lx - 1) + wx * (dy + ly - 1));
                A[di] = a / static_cast<double>(L_);
                B[di] = b / static_cast<double>(L_);
                C[di] = cc / static_cast<double>(L_);
                D[di] = d / static_cast<double>(L_);
            }
        auto disp = [&](int i, int m) { // kernel index of r_i - r_m
            const int ix = i % lx, iy = i / lx, mx = m % lx, my = m / lx;
            return static_cast<std::size_t>((ix - mx + lx - 1) + wx * (iy - my + ly - 1));
        };
        G_.assign(static_cast<std::size_t>(L_) * L_, 0.0);
        F_.assign(static_cast<std::size_t>(L_) * L_, 0.0);
        for (int i = 0; i < L_; ++i)
            for (int j = 0; j < L_; ++j) {
                std::complex<double> g = C[disp(j, i)];
                std::complex<double> f = D[disp(i, j)];
                for (int m = 0; m < L_; ++m) {
                    if (!occupation[static_cast<std::size_t>(m)]) continue;
                    const auto aim = A[disp(i, m)];
                    const auto ajm = A[disp(j, m)];
                    const auto bim = B[disp(i, m)];
                    const auto bjm = B[disp(j, m)];
                    g += std::conj(aim) * ajm - std::conj(bim) * bjm;
                    f += bim * ajm - aim * bjm;
                }
                G_[idx(i, j)] = g;
                F_[idx(i, j)] = f;
            }
    }

    std::complex<double> cdag_c(int i, int j) const { return G_[idx(i, j)]; }
    std::complex<double> c_c(int i, int j) const { return F_[idx(i, j)]; }
    std::complex<double> cdag_cdag(int i, int j) const { return std::conj(F_[idx(j, i)]); }
    std::complex<double> c_cdag(int i, int j) const {
        return (i == j ? 1.0 : 0.0) - G_[idx(j, i)];
    }

    // Wick expectation of a product of operators (earliest first); op = (site,
    // dagger?).  Recursion contracts the first operator against each later one
    // with alternating sign.
    std::complex<double> wick(const std::vector<std::pair<int, bool>>& ops) const {
        if (ops.empty()) return 1.0;
        if (ops.size() % 2) return 0.0;
        return wick_rec(ops);
    }

    // <prod_{j in sites} n_j> for distinct sites
    std::complex<double> density_product(const std::vector<int>& sites) const {
        std::vector<std::pair<int, bool>> ops;
        for (int s : sites) {
            ops.emplace_back(s, true);
            ops.emplace_back(s, false);
        }
        return wick(ops);
    }

private:
    std::complex<double> contract(const std::pair<int, bool>& a, const std::pair<int, bool>& b) const {
        if (a.second && !b.second) return cdag_c(a.first, b.first);
        if (!a.second && b.second) return c_cdag(a.first, b.first);
        if (!a.second && !b.second) return c_c(a.first, b.first);
        return cdag_cdag(a.first, b.first);
    }

    std::complex<double> wick_rec(std::vector<std::pair<int, bool>> ops) const {
        if (ops.empty()) return 1.0;
        std::complex<double> acc = 0;
        const auto first = ops.front();
        for (std::size_t b = 1; b < ops.size(); ++b) {
            std::vector<std::pair<int, bool>> rest;
            rest.reserve(ops.size() - 2);
            for (std::size_t i = 1; i < ops.size(); ++i)
                if (i != b) rest.push_back(ops[i]);
            const double sign = (b % 2) ? 1.0 : -1.0;
            acc += sign * contract(first, ops[b]) * wick_rec(std::move(rest));
        }
        return acc;
    }

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(L_) + static_cast<std::size_t>(j);
    }
    const EncodedLattice& lat_;
    int L_;
    std::vector<std::complex<double>> G_, F_;
};

// <Z products> averaged over the four sectors; Z_j = 1 - 2 n_j, expanded over
// subsets.  `sites` must be distinct.
inline double exact_z_product(const EncodedLattice& lat, int n, double dt,
                              const std::vector<int>& occupation, const std::vector<int>& sites) {
    double total = 0;
    for (double phx : {0.0, 0.5})
        for (double phy : {0.0, 0.5}) {
            SectorCorrelators sc(lat, n, dt, occupation, phx, phy);
            std::complex<double> val = 0;
            const std::size_t w = sites.size();
            for (std::size_t mask = 0; mask < (std::size_t{1} << w); ++mask) {
                std::vector<int> sub;
                for (std::size_t b = 0; b < w; ++b)
                    if (mask & (std::size_t{1} << b)) sub.push_back(sites[b]);
                double coef = 1.0;
                for (std::size_t b = 0; b < sub.size(); ++b) coef *= -2.0;
                val += coef * sc.density_product(sub);
            }
            total += val.real();
        }
    return total / 4.0;
}

// O_[w]: sum over w-subsets of the sites of prod f_j Z_j; w in {1,2,3}.
inline double exact_Ow(const EncodedLattice& lat, int w, int n, double dt,
                       const std::vector<double>& f, const std::vector<int>& occupation) {
    if (w < 1 || w > 3) throw std::invalid_argument("supported observable weights are 1..3");
    const int L = lat.num_sites();
    // gather per-sector correlators once, evaluate all needed Z products
    std::vector<SectorCorrelators> secs;
    for (double phx : {0.0, 0.5})
        for (double phy : {0.0, 0.5}) secs.emplace_back(lat, n, dt, occupation, phx, phy);
    auto zprod = [&](const std::vector<int>& sites) {
        double tot = 0;
        for (const auto& sc : secs) {
            std::complex<double> val = 0;
            const std::size_t ww = sites.size();
            for (std::size_t mask = 0; mask < (std::size_t{1} << ww); ++mask) {
                std::vector<int> sub;
                for (std::size_t b = 0; b < ww; ++b)
                    if (mask & (std::size_t{1} << b)) sub.push_back(sites[b]);
                val += std::pow(-2.0, static_cast<double>(sub.size())) * sc.density_product(sub);
            }
            tot += val.real();
        }
        return tot / 4.0;
    };
    double acc = 0;
    if (w == 1) {
        for (int i = 0; i < L; ++i) acc += f[static_cast<std::size_t>(i)] * zprod({i});
    } else if (w == 2) {
        for (int i = 0; i < L; ++i)
            for (int j = i + 1; j < L; ++j)
                acc += f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(j)] * zprod({i, j});
    } else {
        for (int i = 0; i < L; ++i)
            for (int j = i + 1; j < L; ++j)
                for (int k = j + 1; k < L; ++k)
                    acc += f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(j)] *
                           f[static_cast<std::size_t>(k)] * zprod({i, j, k});
    }
    return acc;
}

} // namespace appqsim::ff

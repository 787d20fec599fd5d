#pragma once
#include <cstdint>
#include <cmath>

// Deterministic RNG plumbing. All randomness in the suite flows from a single
// master seed through mix() fan-out, so runs are reproducible bit-for-bit
// regardless of how work is split across tasks.

namespace appqsim {

inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derive a child seed from (parent, index). Used for trajectory/shot/database
// fan-out: children are statistically independent and order-insensitive.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x2545f4914f6cdd1dull * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix(mix(seed, a), b);
}

// xoshiro256** — small, fast, and we own the bits (libstdc++ distributions are
// not pinned by the standard, so we do not use <random> distributions anywhere).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : s_) w = splitmix64(s);
        have_gauss_ = false;
    }

    std::uint64_t next_u64() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection-free is fine here; n is tiny everywhere we call this
        return next_u64() % n;
    }

    double normal() {
        if (have_gauss_) { have_gauss_ = false; return gauss_; }
        double u1, u2;
        do { u1 = uniform(); } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        gauss_ = r * std::sin(a);
        have_gauss_ = true;
        return r * std::cos(a);
    }

    // Poisson via inversion for small mean, PTRS-free fallback loop for larger.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            const double l = std::exp(-mean);
            std::uint64_t k = 0;
            double p = 1.0;
            do { ++k; p *= uniform(); } while (p > l);
            return k - 1;
        }
        // split recursively; counts add
        return poisson(mean / 2) + poisson(mean - mean / 2);
    }

private:
    std::uint64_t s_[4];
    double gauss_ = 0.0;
    bool have_gauss_;
};

} // namespace appqsim

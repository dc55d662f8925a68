#pragma once

// Counter-based generator: value k of stream (seed, key) is splitmix64(seed ^ mix(key) + k * golden).
// Any language with 64-bit unsigned arithmetic reproduces the same stream.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "numlin.hpp"

namespace qgwb {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t key = 0) : base_(splitmix64(seed) ^ splitmix64(key + 0x51ED2701ULL)) {}

    std::uint64_t next_u64() { return splitmix64(base_ + 0x9E3779B97F4A7C15ULL * counter_++); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (two draws per value, no caching).
    double normal() {
        double u1 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cplx cnormal() { return {normal(), normal()}; }

    Vec cvector(std::size_t n) {
        Vec v(n);
        for (auto& x : v) x = cnormal();
        return v;
    }

    CMatrix cmatrix(std::size_t r, std::size_t c) {
        CMatrix m(r, c);
        for (auto& x : m.data()) x = cnormal();
        return m;
    }

    CMatrix hermitian(std::size_t n) {
        CMatrix g = cmatrix(n, n);
        return 0.5 * (g + g.adjoint());
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace qgwb

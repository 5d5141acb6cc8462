#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "spgcl/errors.hpp"

namespace spgcl {

// Deterministic pseudorandom generator used everywhere the library needs
// randomness. The algorithm is fixed so that a given 64-bit seed produces
// bit-identical streams on every platform:
//   * state seeding: splitmix64
//   * core generator: xoshiro256++
//   * uniform doubles: top 53 bits scaled by 2^-53, range [0, 1)
//   * bounded integers: rejection sampling (no modulo bias)
//   * normals: Box-Muller, the second variate is cached
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) fail(kErrDomain, "rng bound must be positive");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    int index(int bound) {
        if (bound <= 0) fail(kErrDomain, "rng bound must be positive");
        return static_cast<int>(below(static_cast<std::uint64_t>(bound)));
    }

    // Standard normal.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    // k distinct values from {0, ..., population-1}, returned ascending.
    std::vector<int> sample_without_replacement(int population, int count) {
        if (count < 0 || population < 0 || count > population)
            fail(kErrDomain, "cannot sample " + std::to_string(count) + " of " +
                                 std::to_string(population) + " without replacement");
        std::vector<int> pool(population);
        for (int i = 0; i < population; ++i) pool[i] = i;
        for (int i = 0; i < count; ++i) {
            const int j = i + index(population - i);
            std::swap(pool[i], pool[j]);
        }
        std::vector<int> picked(pool.begin(), pool.begin() + count);
        std::sort(picked.begin(), picked.end());
        return picked;
    }

    // Uniform permutation of {0, ..., n-1} (Fisher-Yates).
    std::vector<int> permutation(int n) {
        if (n < 0) fail(kErrDomain, "permutation size must be non-negative");
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = index(i + 1);
            std::swap(perm[i], perm[j]);
        }
        return perm;
    }

    // Independent generator for a named substream of this seed.
    Rng fork(std::uint64_t stream) const {
        std::uint64_t sm = seed_ ^ (0x6a09e667f3bcc909ull + stream);
        return Rng(splitmix64_next(sm));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace spgcl

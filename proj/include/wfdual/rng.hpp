#pragma once

#include <cmath>
#include <cstdint>

namespace wfdual {

// Counter-based stream derivation: (master seed, stream index) -> independent
// generator state.  Every trajectory owns stream(master, traj_index), so batch
// results do not depend on thread count or scheduling.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small self-contained generator (xoshiro256**).  We avoid <random> engines and
// distributions in simulation paths so that output is bit-reproducible across
// standard library implementations.
class Rng {
public:
    Rng() : Rng(0, 0) {}

    Rng(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::uint64_t sm = master_seed ^ (0x9e3779b97f4a7c15ULL * (stream_index + 1));
        for (auto& word : state_) word = splitmix64(sm);
        has_spare_normal_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on (0,1) -- never returns 0 or 1, safe inside logs.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Box-Muller with spare caching.
    double normal() {
        if (has_spare_normal_) {
            has_spare_normal_ = false;
            return spare_normal_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 6.283185307179586476925286766559 * u2;
        spare_normal_ = radius * std::sin(angle);
        has_spare_normal_ = true;
        return radius * std::cos(angle);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Index in [0, n) proportional to weights[i]; weights need not be normalized.
    template <class Vec>
    std::size_t categorical(const Vec& weights, double total) {
        double u = uniform() * total;
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            cum += weights[i];
            if (u < cum) return i;
        }
        return weights.size() - 1;
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        // Rejection-free modulo with negligible bias for n << 2^64.
        return next_u64() % n;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_normal_ = 0.0;
    bool has_spare_normal_;
};

}  // namespace wfdual

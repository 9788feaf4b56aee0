#pragma once

#include <cmath>
#include <cstdint>

namespace spinphoton {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-inited xoshiro256++ stream. One instance per trajectory/attempt;
/// streams derived from (seed, attempt_id) are independent, so results do
/// not depend on thread scheduling.
class RandomStream {
public:
    RandomStream() : RandomStream(0, 0) {}

    RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
        for (auto& w : s_) w = splitmix64(sm);
        has_cached_normal_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        has_cached_normal_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    double exponential(double mean) { return -mean * std::log(uniform_pos()); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Poisson by inversion; intended for small means (counting backgrounds).
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        double prod = uniform();
        int n = 0;
        while (prod > limit) {
            prod *= uniform();
            ++n;
        }
        return n;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_;
};

}  // namespace spinphoton

#ifndef PAIRSCAN_RNG_HPP
#define PAIRSCAN_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace pairscan {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Seeded PRNG (xoshiro256**) with splitmix64 stream derivation.
 *
 * Hand-rolled so that sequences are identical across platforms and
 * compilers; std::<distribution>s are implementation-defined and would
 * break bit-exact reproducibility guarantees. Streams derived from
 * (seed, a, b, c) are independent, which lets frame synthesis run on any
 * number of workers and still produce identical output.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    // Independent stream keyed by up to three indices (frame, window, tag).
    static Rng for_stream(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t sm = seed;
        std::uint64_t key = splitmix64(sm);
        sm = key ^ (a * 0xD6E8FEB86659FD93ULL);
        key = splitmix64(sm);
        sm = key ^ (b * 0xCA5A826395121157ULL);
        key = splitmix64(sm);
        sm = key ^ (c * 0x9E3779B97F4A7C15ULL);
        return Rng(splitmix64(sm));
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

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform on (-pi, pi].
    double uniform_phase() {
        return M_PI - 2.0 * M_PI * uniform01();
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        return next_u64() % n;
    }

    // Standard normal via Box-Muller; the spare is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

    // Circular complex Gaussian with E|z|^2 = mean_power.
    std::complex<double> complex_gaussian(double mean_power) {
        const double s = std::sqrt(0.5 * mean_power);
        return {s * gaussian(), s * gaussian()};
    }

    double exponential(double mean) {
        double u = uniform01();
        if (u < 1e-300) u = 1e-300;
        return -mean * std::log(u);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pairscan

#endif  // PAIRSCAN_RNG_HPP

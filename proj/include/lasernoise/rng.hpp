#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "lasernoise/errors.hpp"

namespace lasernoise {

// splitmix64 output mixer; whitens (seed, stream) pairs so that nearby
// seeds and stream indices give unrelated engine states.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One mt19937_64 per trajectory, stream index separating parallel
// trajectories under the same user seed.
[[nodiscard]] inline std::mt19937_64 make_stream_engine(std::uint64_t seed, std::uint64_t stream) noexcept {
    return std::mt19937_64(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1)));
}

// Uniform in [0, 1): the top 53 bits of one engine draw. The std
// distributions are implementation-defined, which would break seeded
// cross-platform reproducibility; every transform here is pinned.
[[nodiscard]] inline double uniform01(std::mt19937_64& eng) noexcept {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Exponential waiting time; -log1p(-u) keeps full precision near u = 0 and
// never sees log(0) since u < 1.
[[nodiscard]] inline double exponential(std::mt19937_64& eng, double rate) noexcept {
    return -std::log1p(-uniform01(eng)) / rate;
}

// Standard normals via Box-Muller with a cached spare.
class NormalSampler {
public:
    [[nodiscard]] double operator()(std::mt19937_64& eng) noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(eng);
        while (u1 == 0.0) {
            u1 = uniform01(eng);
        }
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * uniform01(eng);
        spare_ = mag * std::sin(ang);
        has_spare_ = true;
        return mag * std::cos(ang);
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Poisson counts by Knuth's product method; adequate for the small means
// used in calibration fixtures.
[[nodiscard]] inline std::uint64_t poisson_small_mean(std::mt19937_64& eng, double mean) {
    if (!(mean >= 0.0)) {
        throw InvalidParameter("Poisson mean must be >= 0");
    }
    if (mean > 50.0) {
        throw InvalidParameter("Poisson mean too large for the product method (limit 50)");
    }
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = uniform01(eng);
    while (prod > limit) {
        ++k;
        prod *= uniform01(eng);
    }
    return k;
}

}  // namespace lasernoise

#include <cmath>
#include <cstdint>

#include <catch2/catch_amalgamated.hpp>

#include "lasernoise/errors.hpp"
#include "lasernoise/rng.hpp"

using namespace lasernoise;

TEST_CASE("splitmix64 known-answer values", "[rng]") {
    // reference values from an independent implementation of the published
    // algorithm (the first one is the classic seed-0 stream output)
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
    CHECK(splitmix64(1) == 0x910a2dec89025cc1ULL);
}

TEST_CASE("stream engines are deterministic and decorrelated", "[rng]") {
    std::mt19937_64 a = make_stream_engine(42, 0);
    std::mt19937_64 b = make_stream_engine(42, 0);
    for (int i = 0; i < 5; ++i) {
        CHECK(a() == b());
    }
    std::mt19937_64 c = make_stream_engine(42, 1);
    CHECK(a() != c());
    std::mt19937_64 d = make_stream_engine(43, 0);
    CHECK(b() != d());
}

TEST_CASE("uniform01 stays in [0, 1) with the right moments", "[rng]") {
    std::mt19937_64 eng = make_stream_engine(7, 0);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double u = uniform01(eng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(0.5, 3.0 * std::sqrt(1.0 / 12.0 / n)));
    CHECK_THAT(var, Catch::Matchers::WithinAbs(1.0 / 12.0, 1e-3));
}

TEST_CASE("exponential waiting times have the requested rate", "[rng]") {
    std::mt19937_64 eng = make_stream_engine(8, 0);
    const double rate = 2.0;
    double sum = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double t = exponential(eng, rate);
        REQUIRE(t >= 0.0);
        sum += t;
    }
    CHECK_THAT(sum / n, Catch::Matchers::WithinAbs(0.5, 3.0 * 0.5 / std::sqrt(double(n))));
}

TEST_CASE("normal sampler calibration", "[rng]") {
    std::mt19937_64 eng = make_stream_engine(9, 0);
    NormalSampler normal;
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const double z = normal(eng);
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(0.0, 3.0 / std::sqrt(double(n))));
    // variance of z^2 is 2, so the standard error of var is sqrt(2/n)
    CHECK_THAT(var, Catch::Matchers::WithinAbs(1.0, 3.0 * std::sqrt(2.0 / n)));
}

TEST_CASE("poisson counts at small mean", "[rng]") {
    std::mt19937_64 eng = make_stream_engine(10, 0);
    const double mean = 4.0;
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(poisson_small_mean(eng, mean));
        sum += k;
        sum2 += k * k;
    }
    const double m = sum / n;
    const double var = sum2 / n - m * m;
    CHECK_THAT(m, Catch::Matchers::WithinAbs(4.0, 3.0 * 2.0 / std::sqrt(double(n))));
    CHECK_THAT(var, Catch::Matchers::WithinAbs(4.0, 0.15));

    CHECK(poisson_small_mean(eng, 0.0) == 0);
    CHECK_THROWS_AS(poisson_small_mean(eng, -1.0), InvalidParameter);
    CHECK_THROWS_AS(poisson_small_mean(eng, 100.0), InvalidParameter);
}

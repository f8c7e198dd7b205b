#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"
#include "lasernoise/fluctuations.hpp"
#include "lasernoise/rng.hpp"
#include "lasernoise/steady_state.hpp"

using namespace lasernoise;

TEST_CASE("relaxation rates at the threshold photon number", "[fluctuations]") {
    const DeviceParams p = reference_device();
    const double n = threshold_photon_number(p);
    const FluctuationRates rates = fluctuation_rates(p, n);
    CHECK_THAT(rates.gamma_n, Catch::Matchers::WithinRel(1.40323802e10, 1e-8));
    CHECK_THAT(rates.Gamma_N, Catch::Matchers::WithinRel(3.354415184e8, 1e-9));
    CHECK_THAT(rates.omega_R, Catch::Matchers::WithinRel(2.1593132e9, 1e-7));
    CHECK_THAT(rates.r, Catch::Matchers::WithinRel(1022.635, 1e-6));
}

TEST_CASE("rate combinations reduce to the stimulated-coupling terms", "[fluctuations]") {
    // r * omega_R and omega_R / r are the two off-diagonal couplings; they
    // must reproduce 2 beta (N_bar - N_T)/tau_sp and beta (2n+1)/tau_sp
    // without reference to r itself.
    const DeviceParams p = reference_device();
    for (const double n : {2.0, 50.0, 316.0, 1e4, 1e6}) {
        const FluctuationRates rates = fluctuation_rates(p, n);
        const double N_bar = stationary_excitations(p, n);
        CHECK_THAT(rates.r * rates.omega_R,
                   Catch::Matchers::WithinRel(2.0 * p.beta * (N_bar - p.N_T) / p.tau_sp, 1e-11));
        CHECK_THAT(rates.omega_R / rates.r,
                   Catch::Matchers::WithinRel(p.beta * (2.0 * n + 1.0) / p.tau_sp, 1e-11));
    }
}

TEST_CASE("limiting values of the relaxation rates", "[fluctuations]") {
    const DeviceParams p = reference_device();
    // at transparency the photon channel relaxes at the bare cavity rate
    // and the oscillation frequency collapses
    const FluctuationRates at_t = fluctuation_rates(p, p.n_t);
    CHECK_THAT(at_t.gamma_n, Catch::Matchers::WithinRel(1.0 / p.tau_cav, 1e-12));
    CHECK(at_t.omega_R == 0.0);
    // an empty cavity leaves the excitation channel at the spontaneous rate
    CHECK_THAT(excitation_relaxation_rate(p, 0.0),
               Catch::Matchers::WithinRel(1.0 / p.tau_sp, 1e-12));
}

TEST_CASE("drift matrix matches the finite-difference Jacobian", "[fluctuations]") {
    // The linearization must be the actual derivative of the rate equations
    // at the stationary point: d(deltas)/dt = -A deltas with the signs of
    // the off-diagonal couplings opposing each other. The rate equations
    // are bilinear, so centered differences are exact to round-off.
    const DeviceParams p = reference_device();
    const double j = 1.3 * threshold_current(p);
    const OperatingPoint op = steady_state(p, j);
    const auto [A, B] = drift_and_diffusion(fluctuation_rates(p, op.n_bar), op.n_bar);

    // Exactness means h can be generous; a large step drowns the round-off
    // from differencing the near-cancelling flux sums.
    const double hN = op.N_bar * 1e-2;
    const double hn = op.n_bar * 1e-2;
    const auto FNp = rate_residuals(p, op.N_bar + hN, op.n_bar, j);
    const auto FNm = rate_residuals(p, op.N_bar - hN, op.n_bar, j);
    const auto Fnp = rate_residuals(p, op.N_bar, op.n_bar + hn, j);
    const auto Fnm = rate_residuals(p, op.N_bar, op.n_bar - hn, j);

    CHECK_THAT((FNp.dN_dt - FNm.dN_dt) / (2.0 * hN), Catch::Matchers::WithinRel(-A[0][0], 1e-7));
    CHECK_THAT((Fnp.dN_dt - Fnm.dN_dt) / (2.0 * hn), Catch::Matchers::WithinRel(-A[0][1], 1e-7));
    CHECK_THAT((FNp.dn_dt - FNm.dn_dt) / (2.0 * hN), Catch::Matchers::WithinRel(-A[1][0], 1e-7));
    CHECK_THAT((Fnp.dn_dt - Fnm.dn_dt) / (2.0 * hn), Catch::Matchers::WithinRel(-A[1][1], 1e-7));

    // opposite signs on the couplings, positive relaxation on the diagonal
    CHECK(A[0][1] * A[1][0] < 0.0);
    CHECK(A[0][0] > 0.0);
    CHECK(A[1][1] > 0.0);
    CHECK(B[1][1] > 0.0);
    CHECK(B[0][0] == 0.0);
}

TEST_CASE("variance ratio at pinned operating points", "[fluctuations]") {
    const DeviceParams p = reference_device();
    const double n_th = threshold_photon_number(p);
    CHECK_THAT(photon_variance_closed_form(p, n_th).ratio,
               Catch::Matchers::WithinRel(0.9883819678704969, 1e-13));
    CHECK_THAT(photon_variance_closed_form(p, 1.1e4).ratio,
               Catch::Matchers::WithinRel(0.498874, 1e-5));
}

TEST_CASE("variance is exactly thermal at transparency", "[fluctuations]") {
    const DeviceParams p = reference_device();
    const NoiseResult res = photon_variance_closed_form(p, p.n_t);
    CHECK(res.ratio == 1.0);
    CHECK_THAT(res.variance, Catch::Matchers::WithinRel(p.n_t * (p.n_t + 1.0), 1e-13));
    // and still effectively thermal a hair above it
    CHECK(photon_variance_closed_form(p, p.n_t * (1.0 + 1e-6)).ratio > 0.999);
}

TEST_CASE("fano factor is the ratio scaled by n + 1", "[fluctuations]") {
    const DeviceParams p = reference_device();
    for (const double n : {10.0, 316.2277660168379, 2e4}) {
        const NoiseResult res = photon_variance_closed_form(p, n);
        CHECK_THAT(res.fano, Catch::Matchers::WithinRel(res.ratio * (n + 1.0), 1e-13));
        CHECK_THAT(res.thermal_limit, Catch::Matchers::WithinRel(n * (n + 1.0), 1e-13));
    }
}

TEST_CASE("the two algebraic forms of the ratio agree", "[fluctuations]") {
    // 1/(1 + C) with C = (Gamma/gamma) / (1 + Gamma gamma/w^2 + Gamma^2/w^2)
    // versus the cleared-fraction form; same number wherever w > 0.
    const DeviceParams p = reference_device();
    for (const double n : {5.0, 100.0, 1e4, 1e7}) {
        const FluctuationRates k = fluctuation_rates(p, n);
        const double g = k.gamma_n;
        const double G = k.Gamma_N;
        const double w2 = k.omega_R * k.omega_R;
        const double cleared = g * (G * G + G * g + w2) / (g * (G * G + G * g + w2) + G * w2);
        CHECK_THAT(photon_variance_closed_form(p, n).ratio,
                   Catch::Matchers::WithinRel(cleared, 1e-12));
    }
}

TEST_CASE("covariance solve agrees with the closed form on random devices", "[fluctuations]") {
    std::mt19937_64 eng = make_stream_engine(123, 0);
    for (int i = 0; i < 1000; ++i) {
        const double beta = std::pow(10.0, -11.0 + 10.0 * uniform01(eng));
        const double n_t = 0.6 + 3.0 * uniform01(eng);
        const double N_T = std::pow(10.0, 4.0 + 6.0 * uniform01(eng));
        const DeviceParams p = make_device(beta, N_T, 1.0, n_t / (beta * N_T));
        const double n_th = threshold_photon_number(p);
        const double lo = std::log(p.n_t * (1.0 + 1e-9));
        const double hi = std::log(1e3 * n_th);
        const double n = std::exp(lo + uniform01(eng) * (hi - lo));
        const double closed = photon_variance_closed_form(p, n).ratio;
        const double solved = photon_variance_lyapunov(p, n).ratio;
        CHECK_THAT(solved, Catch::Matchers::WithinRel(closed, 1e-9));
    }
}

TEST_CASE("the photon variance does not depend on the amplitude split", "[fluctuations]") {
    // r only balances how the oscillation is shared between the channels;
    // rescaling it must leave the photon-photon covariance untouched.
    const double G = 3.0;
    const double g = 7.0;
    const double w = 5.0;
    const double B_nn = 11.0;
    for (const double r : {0.01, 1.0, 250.0}) {
        const Mat2 A{{{G, r * w}, {-w / r, g}}};
        const Mat2 B{{{0.0, 0.0}, {0.0, B_nn}}};
        const Mat2 S = stationary_covariance(A, B);
        const Mat2 S1 = stationary_covariance(Mat2{{{G, w}, {-w, g}}}, B);
        CHECK_THAT(S[1][1], Catch::Matchers::WithinRel(S1[1][1], 1e-12));
        // the cross covariance scales like r, the excitation variance like r^2
        CHECK_THAT(S[0][1], Catch::Matchers::WithinRel(r * S1[0][1], 1e-12));
        CHECK_THAT(S[0][0], Catch::Matchers::WithinRel(r * r * S1[0][0], 1e-12));
    }
}

TEST_CASE("oscillation amplitude ratio is large across the lasing range", "[fluctuations]") {
    // many excitations swing per photon swing, which is what justifies
    // keeping only the photon channel in the noise source
    const DeviceParams p = reference_device();
    const double j_th = threshold_current(p);
    for (int i = 0; i <= 20; ++i) {
        const double j = j_th * std::pow(10.0, -0.1 + (1.1 / 20.0) * i);
        const double n = stationary_photon_number(p, j);
        if (n <= p.n_t) {
            continue;
        }
        CHECK(fluctuation_rates(p, n).r > 10.0);
    }
}

TEST_CASE("below transparency the linearization is refused", "[fluctuations]") {
    const DeviceParams p = reference_device();
    CHECK_THROWS_AS(fluctuation_rates(p, 0.5 * p.n_t), BelowTransparency);
    CHECK_THROWS_AS(photon_variance_closed_form(p, 0.0), BelowTransparency);
}

TEST_CASE("non-decaying drift matrices are rejected", "[fluctuations]") {
    const Mat2 B{{{0.0, 0.0}, {0.0, 1.0}}};
    CHECK_THROWS_AS(stationary_covariance(Mat2{{{-1.0, 0.0}, {0.0, 3.0}}}, B),
                    UnstableLinearization);
    CHECK_THROWS_AS(stationary_covariance(Mat2{{{1.0, 4.0}, {1.0, 1.0}}}, B),
                    UnstableLinearization);
}

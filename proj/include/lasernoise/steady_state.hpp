#pragma once

#include <cmath>
#include <string>

#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"

namespace lasernoise {

// A pump rate together with the stationary state it drives.
struct OperatingPoint {
    double j = 0.0;      // carriers/s
    double n_bar = 0.0;  // stationary photon number
    double N_bar = 0.0;  // stationary excitation number
};

// Both right-hand sides of the rate equations at state (N, n) under pump j.
struct RateResiduals {
    double dN_dt = 0.0;  // carriers/s
    double dn_dt = 0.0;  // photons/s
};

namespace detail {

// Dimensionless threshold pump J_th = j_th * tau_cav. Defined for any
// parameter set (negative when the device cannot lase), which the
// light-current quadratic below relies on.
[[nodiscard]] inline double dimensionless_threshold(const DeviceParams& p) noexcept {
    return (p.n_t + 0.5) / p.beta - (p.n_t + 1.0);
}

}  // namespace detail

// Pump rate at which the light-current characteristic turns over from its
// spontaneous-emission slope to slope one.
[[nodiscard]] inline double threshold_current(const DeviceParams& p) {
    if (!p.lasing_valid()) {
        throw NonLasingDevice("no threshold: transparency photon number n_t = " +
                              std::to_string(p.n_t) + " is not > 0.5");
    }
    return (p.N_T / p.tau_sp) * ((1.0 + 0.5 / p.n_t) - p.beta * (1.0 + 1.0 / p.n_t));
}

// Photon number at threshold, sqrt((n_t + 1/2)/(2 beta)). Assumes beta well
// below one; at beta near one the threshold region is too smeared for the
// formula to mean much, but it stays finite and monotone.
[[nodiscard]] inline double threshold_photon_number(const DeviceParams& p) {
    if (!p.lasing_valid()) {
        throw NonLasingDevice("no threshold: transparency photon number n_t = " +
                              std::to_string(p.n_t) + " is not > 0.5");
    }
    return std::sqrt((p.n_t + 0.5) / (2.0 * p.beta));
}

// Stationary photon number for pump rate j: the positive root of
// 2 n^2 - 2 u n - J = 0 with J = j*tau_cav and u = J - J_th - 1. The
// conjugate form avoids the cancellation between u and the square root
// below threshold and returns exactly 0 at j = 0.
[[nodiscard]] inline double stationary_photon_number(const DeviceParams& p, double j) {
    if (!(j >= 0.0)) {
        throw NegativeInput("pump rate j must be >= 0, got " + std::to_string(j));
    }
    const double J = j * p.tau_cav;
    const double u = J - detail::dimensionless_threshold(p) - 1.0;
    const double s = std::sqrt(u * u + 2.0 * J);
    return u >= 0.0 ? 0.5 * (u + s) : J / (s - u);
}

// Excitation number slaved to a stationary photon number; solves the photon
// line of the rate equations for N at fixed n.
[[nodiscard]] inline double stationary_excitations(const DeviceParams& p, double n_bar) {
    if (!(n_bar >= 0.0)) {
        throw NegativeInput("photon number must be >= 0, got " + std::to_string(n_bar));
    }
    return p.N_T * (2.0 * p.n_t + 1.0) * n_bar / (p.n_t * (2.0 * n_bar + 1.0));
}

[[nodiscard]] inline OperatingPoint steady_state(const DeviceParams& p, double j) {
    OperatingPoint op;
    op.j = j;
    op.n_bar = stationary_photon_number(p, j);
    op.N_bar = stationary_excitations(p, op.n_bar);
    return op;
}

// Inverse of the light-current characteristic. Uses the stationary flux
// balance: every injected carrier leaves either by spontaneous relaxation
// into non-lasing channels or through the cavity, so
// j = (1 - beta) N_bar / tau_sp + n_bar / tau_cav.
// Both terms are nonnegative, so no cancellation anywhere on the curve.
[[nodiscard]] inline double current_for_photon_number(const DeviceParams& p, double n_bar) {
    const double N_bar = stationary_excitations(p, n_bar);
    return (1.0 - p.beta) * N_bar / p.tau_sp + n_bar / p.tau_cav;
}

// The two rate equations evaluated verbatim; the plug-back oracle for every
// stationary point.
[[nodiscard]] inline RateResiduals rate_residuals(const DeviceParams& p, double N, double n, double j) {
    if (!(N >= 0.0)) {
        throw NegativeInput("excitation number must be >= 0, got " + std::to_string(N));
    }
    if (!(n >= 0.0)) {
        throw NegativeInput("photon number must be >= 0, got " + std::to_string(n));
    }
    if (!(j >= 0.0)) {
        throw NegativeInput("pump rate j must be >= 0, got " + std::to_string(j));
    }
    const double k = p.beta / p.tau_sp;
    RateResiduals res;
    res.dN_dt = j - N / p.tau_sp - 2.0 * k * N * n + 2.0 * k * p.N_T * n;
    res.dn_dt = k * N * (2.0 * n + 1.0) - 2.0 * k * p.N_T * n - n / p.tau_cav;
    return res;
}

}  // namespace lasernoise

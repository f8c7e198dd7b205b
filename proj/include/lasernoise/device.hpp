#pragma once

#include <string>
#include <string_view>

#include "lasernoise/errors.hpp"

namespace lasernoise {

// 2019 SI exact value; converts pump rates (carriers/s) to currents (A).
inline constexpr double elementary_charge = 1.602176634e-19;  // C

// The four parameters of the single-mode rate-equation model, plus the
// derived transparency photon number.
//
//   beta     fraction of spontaneous emission feeding the lasing mode
//   N_T      excitation (carrier) number at transparency
//   tau_sp   spontaneous relaxation time, s
//   tau_cav  cavity photon lifetime, s
//   n_t      transparency photon number beta*N_T*tau_cav/tau_sp (cached)
struct DeviceParams {
    double beta = 0.0;
    double N_T = 0.0;
    double tau_sp = 0.0;
    double tau_cav = 0.0;
    double n_t = 0.0;

    // Lasing requires more than half a photon at transparency; devices
    // below that never develop a threshold.
    [[nodiscard]] bool lasing_valid() const noexcept { return n_t > 0.5; }
};

[[nodiscard]] inline double transparency_photon_number(double beta, double N_T, double tau_sp,
                                                       double tau_cav) noexcept {
    return beta * N_T * tau_cav / tau_sp;
}

[[nodiscard]] inline DeviceParams make_device(double beta, double N_T, double tau_sp, double tau_cav) {
    // The negated comparisons also reject NaN.
    if (!(beta > 0.0) || !(beta <= 1.0)) {
        throw InvalidParameter("beta must be in (0, 1], got " + std::to_string(beta));
    }
    if (!(N_T > 0.0)) {
        throw InvalidParameter("N_T must be > 0, got " + std::to_string(N_T));
    }
    if (!(tau_sp > 0.0)) {
        throw InvalidParameter("tau_sp must be > 0 s, got " + std::to_string(tau_sp));
    }
    if (!(tau_cav > 0.0)) {
        throw InvalidParameter("tau_cav must be > 0 s, got " + std::to_string(tau_cav));
    }
    DeviceParams p;
    p.beta = beta;
    p.N_T = N_T;
    p.tau_sp = tau_sp;
    p.tau_cav = tau_cav;
    p.n_t = transparency_photon_number(beta, N_T, tau_sp, tau_cav);
    return p;
}

// Material form: beta*N_T equals (beta*V)*(N_T/V), the volume cancelling,
// and tau_cav is fixed by the requested transparency photon number.
[[nodiscard]] inline DeviceParams make_device_material(double beta, double betaV_cm3, double NT_per_cm3,
                                                       double tau_sp, double n_t) {
    if (!(betaV_cm3 > 0.0)) {
        throw InvalidParameter("betaV_cm3 must be > 0, got " + std::to_string(betaV_cm3));
    }
    if (!(NT_per_cm3 > 0.0)) {
        throw InvalidParameter("NT_per_cm3 must be > 0, got " + std::to_string(NT_per_cm3));
    }
    if (!(n_t > 0.0)) {
        throw InvalidParameter("n_T must be > 0, got " + std::to_string(n_t));
    }
    if (!(tau_sp > 0.0)) {
        throw InvalidParameter("tau_sp must be > 0 s, got " + std::to_string(tau_sp));
    }
    const double beta_N_T = betaV_cm3 * NT_per_cm3;
    return make_device(beta, beta_N_T / beta, tau_sp, n_t * tau_sp / beta_N_T);
}

// Rescale beta while keeping the gain material fixed: beta*N_T holds its
// value (fixed mode volume and transparency density) and so does n_t, which
// leaves tau_cav unchanged and rescales only N_T.
[[nodiscard]] inline DeviceParams with_beta_material(const DeviceParams& base, double beta) {
    const double beta_N_T = base.beta * base.N_T;
    return make_device(beta, beta_N_T / beta, base.tau_sp, base.n_t * base.tau_sp / beta_N_T);
}

// Default device: beta*N_T = 1e4 from typical gain material constants
// (beta*V ~ 1e-14 cm^3, N_T/V ~ 1e18 cm^-3), tau_sp = 3 ns, and a cavity
// lifetime placing the transparency photon number at 1.5.
[[nodiscard]] inline DeviceParams reference_device() {
    return make_device(1e-5, 1e9, 3e-9, 4.5e-13);
}

// Small devices whose jump-process simulation finishes in seconds; used as
// stochastic-oracle fixtures.
[[nodiscard]] inline DeviceParams toy_a() {
    return make_device(0.1, 500.0, 1.0, 0.02);  // n_t = 1.0
}

[[nodiscard]] inline DeviceParams toy_b() {
    return make_device(0.02, 5000.0, 1.0, 0.015);  // n_t = 1.5
}

[[nodiscard]] inline DeviceParams preset(std::string_view name) {
    if (name == "default" || name == "reference") {
        return reference_device();
    }
    if (name == "toy-a") {
        return toy_a();
    }
    if (name == "toy-b") {
        return toy_b();
    }
    throw InvalidParameter("unknown preset '" + std::string(name) +
                           "' (known: default, reference, toy-a, toy-b)");
}

}  // namespace lasernoise

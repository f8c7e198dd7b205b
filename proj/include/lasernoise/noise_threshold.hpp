#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"
#include "lasernoise/fluctuations.hpp"
#include "lasernoise/steady_state.hpp"

namespace lasernoise {

// Which of the three spontaneous-emission-factor regimes sets the noise
// threshold: gain relaxation adiabatically slaved (small beta), thresholds
// fixed by the gain material (middle), or stimulated emission dominating the
// excitation relaxation (large beta).
enum class RegimeTag {
    Adiabatic,
    GainFixed,
    StimulatedDominated,
};

[[nodiscard]] constexpr std::string_view to_string(RegimeTag tag) noexcept {
    switch (tag) {
        case RegimeTag::Adiabatic:
            return "adiabatic";
        case RegimeTag::GainFixed:
            return "gain-fixed";
        case RegimeTag::StimulatedDominated:
            return "stimulated-dominated";
    }
    return "unknown";
}

// Everything the half-thermal root scan saw: the chosen (smallest) root,
// every bracketed root, and the scanned range. More than one root is a
// warning condition the caller may surface; the physics expects exactly one.
struct NoiseThresholdReport {
    double n_half = 0.0;
    std::vector<double> roots;
    double scan_min = 0.0;
    double scan_max = 0.0;
};

// Noise threshold expressed on the pump axis.
struct NoiseThresholdCurrent {
    double j_half = 0.0;  // carriers/s
    double margin = 0.0;  // (j_half - j_th)/j_th
};

namespace detail {

// Signed distance of the variance correction term from its half-thermal
// value: f < 0 where fluctuations are still more than half thermal, f > 0
// beyond the noise threshold. Same root as the printed threshold condition
// Gamma_N omega_R^2 = gamma_n (omega_R^2 + Gamma_N gamma_n + Gamma_N^2),
// but conditioned like the variance ratio itself.
[[nodiscard]] inline double half_thermal_excess(const DeviceParams& p, double n_bar) {
    const double gamma_n = photon_relaxation_rate(p, n_bar);
    const double Gamma_N = excitation_relaxation_rate(p, n_bar);
    const double omega_R = relaxation_oscillation_rate(p, n_bar);
    const double w2 = omega_R * omega_R;
    return (Gamma_N / gamma_n) / (1.0 + Gamma_N * gamma_n / w2 + (Gamma_N / w2) * Gamma_N) - 1.0;
}

}  // namespace detail

// Locates every crossing of the half-thermal condition on a 400-point log
// scan of (n_t, 1e3 (n_t + 1/2)/beta], refining each bracket by bisection to
// 1e-12 relative. The lower scan edge sits just above transparency, where
// the fluctuations are fully thermal; the upper edge is three decades beyond
// the photon number that saturates the gain.
[[nodiscard]] inline NoiseThresholdReport noise_threshold_report(const DeviceParams& p) {
    if (!p.lasing_valid()) {
        throw NonLasingDevice("no noise threshold: transparency photon number n_t = " +
                              std::to_string(p.n_t) + " is not > 0.5");
    }
    NoiseThresholdReport report;
    report.scan_min = p.n_t * (1.0 + 1e-9);
    report.scan_max = 1e3 * (p.n_t + 0.5) / p.beta;

    constexpr int scan_points = 400;
    const double step = std::log(report.scan_max / report.scan_min) / (scan_points - 1);

    double x_prev = report.scan_min;
    double f_prev = detail::half_thermal_excess(p, x_prev);
    for (int i = 1; i < scan_points; ++i) {
        const double x = report.scan_min * std::exp(step * i);
        const double f = detail::half_thermal_excess(p, x);
        if (f_prev == 0.0) {
            report.roots.push_back(x_prev);
        } else if ((f_prev < 0.0) != (f < 0.0)) {
            double lo = x_prev;
            double hi = x;
            double f_lo = f_prev;
            for (int iter = 0; iter < 200 && (hi - lo) > 1e-12 * lo; ++iter) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = detail::half_thermal_excess(p, mid);
                if ((f_mid < 0.0) == (f_lo < 0.0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            report.roots.push_back(0.5 * (lo + hi));
        }
        x_prev = x;
        f_prev = f;
    }

    if (report.roots.empty()) {
        throw NoRootFound("no half-thermal crossing on the scan range [" +
                          std::to_string(report.scan_min) + ", " + std::to_string(report.scan_max) +
                          "] photons");
    }
    report.n_half = report.roots.front();
    return report;
}

// Photon number at which the variance falls to half the thermal limit.
[[nodiscard]] inline double noise_threshold_photon(const DeviceParams& p) {
    return noise_threshold_report(p).n_half;
}

// The same threshold on the pump axis, with its margin above the laser
// threshold current.
[[nodiscard]] inline NoiseThresholdCurrent noise_threshold_current(const DeviceParams& p) {
    const double n_half = noise_threshold_photon(p);
    const double j_th = threshold_current(p);
    NoiseThresholdCurrent result;
    result.j_half = current_for_photon_number(p, n_half);
    result.margin = (result.j_half - j_th) / j_th;
    return result;
}

// Largest beta for which the adiabatic elimination of the excitation
// dynamics is justified at threshold.
[[nodiscard]] inline double adiabatic_validity_bound(const DeviceParams& p) {
    const double x = p.n_t / (p.beta * p.N_T);
    return x * x / (2.0 * p.n_t + 1.0);
}

// Closed-form noise threshold in each regime's asymptotic limit.
[[nodiscard]] inline double asymptotic_noise_threshold(const DeviceParams& p, RegimeTag regime) {
    switch (regime) {
        case RegimeTag::Adiabatic:
            return std::sqrt((p.n_t + 0.5) / (2.0 * p.beta));
        case RegimeTag::GainFixed:
            return p.beta * p.N_T * (1.0 + 0.5 / p.n_t);
        case RegimeTag::StimulatedDominated:
            return std::sqrt(0.5 * p.N_T * (1.0 + 0.5 / p.n_t));
    }
    throw InvalidParameter("unknown regime tag");
}

// Regime assignment with one-sided safety factors around the asymptotic
// conditions (they are order-of-magnitude boundaries, not sharp cuts).
// Adiabatic wins when both apply; checked in this order.
[[nodiscard]] inline RegimeTag classify_regime(const DeviceParams& p) {
    if (!p.lasing_valid()) {
        throw NonLasingDevice("no regime: transparency photon number n_t = " +
                              std::to_string(p.n_t) + " is not > 0.5");
    }
    if (p.beta < 0.1 * adiabatic_validity_bound(p)) {
        return RegimeTag::Adiabatic;
    }
    // Stimulated emission overtakes spontaneous relaxation at the noise
    // threshold when 2 beta n_half > 1 with the gain-fixed n_half.
    if (2.0 * p.beta * (p.beta * p.N_T * (1.0 + 0.5 / p.n_t)) > 1.0) {
        return RegimeTag::StimulatedDominated;
    }
    return RegimeTag::GainFixed;
}

// Order-of-magnitude piecewise summaries for the default material family
// (beta*N_T = 1e4, n_t = 1.5); branch points at beta = 1e-8 and 1e-4.
[[nodiscard]] inline double piecewise_noise_threshold(double beta) {
    if (beta < 1e-8) {
        return 1.0 / std::sqrt(beta);
    }
    if (beta < 1e-4) {
        return 1e4;
    }
    return 1e2 / std::sqrt(beta);
}

[[nodiscard]] inline double piecewise_current_margin(double beta) {
    if (beta < 1e-8) {
        return 0.0;
    }
    if (beta < 1e-4) {
        return 1e4 * beta;
    }
    return 1e2 * std::sqrt(beta);
}

}  // namespace lasernoise

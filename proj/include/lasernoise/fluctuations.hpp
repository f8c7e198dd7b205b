#pragma once

#include <array>
#include <cmath>
#include <string>

#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"

namespace lasernoise {

using Mat2 = std::array<std::array<double, 2>, 2>;

// Coefficients of the linearized fluctuation dynamics at an operating point
// on the light-current curve, state order (dN, dn):
//
//   d/dt (dN, dn) = -A (dN, dn) + q(t),   A = [[Gamma_N, r*omega_R],
//                                              [-omega_R/r, gamma_n]]
//
// The off-diagonal signs follow the Jacobian of the rate equations: a photon
// excess depletes the gain (the -r*omega_R*dn term in the dN line) and extra
// gain grows the field (+omega_R/r*dN in the dn line), so the off-diagonal
// product is -omega_R^2 and the matrix is positive-stable above transparency.
struct FluctuationRates {
    double gamma_n = 0.0;  // photon-number-fluctuation relaxation rate, 1/s
    double Gamma_N = 0.0;  // excitation-number-fluctuation relaxation rate, 1/s
    double omega_R = 0.0;  // coupling (relaxation-oscillation) rate, 1/s
    double r = 0.0;        // dimensionless fluctuation ratio
};

// Photon variance against its thermal reference.
struct NoiseResult {
    double variance = 0.0;       // <dn^2>
    double thermal_limit = 0.0;  // n(n+1)
    double ratio = 0.0;          // variance / thermal_limit, in (0, 1]
    double fano = 0.0;           // variance / n
};

// Drift matrix A (state order (dN, dn)) paired with the only nonzero entry
// of the diffusion matrix B: photon-partition shot noise B_nn. Excitation
// noise is deliberately zero in this model; r >> 1 makes its contribution
// to the photon variance negligible.
struct DriftDiffusion {
    Mat2 A{};
    Mat2 B{};
};

namespace detail {

// Tolerance for operating points computed from pump rates, whose last-ulp
// rounding can land a hair below n_t.
inline constexpr double transparency_slack = 1e-12;

}  // namespace detail

[[nodiscard]] inline double photon_relaxation_rate(const DeviceParams& p, double n_bar) {
    return (1.0 / p.tau_sp) * (p.beta * p.N_T / p.n_t) * (p.n_t + 0.5) / (n_bar + 0.5);
}

[[nodiscard]] inline double excitation_relaxation_rate(const DeviceParams& p, double n_bar) {
    return (1.0 + 2.0 * p.beta * n_bar) / p.tau_sp;
}

[[nodiscard]] inline double relaxation_oscillation_rate(const DeviceParams& p, double n_bar) {
    // Clamp guards the square root against the rounding slack at n_bar ~ n_t.
    const double excess = std::max(0.0, n_bar - p.n_t);
    return std::sqrt(2.0 * p.beta * (p.beta * p.N_T / p.n_t) * excess) / p.tau_sp;
}

[[nodiscard]] inline double fluctuation_ratio(const DeviceParams& p, double n_bar) {
    const double excess = std::max(0.0, n_bar - p.n_t);
    const double half = n_bar + 0.5;
    return std::sqrt(p.N_T / (2.0 * p.n_t) * excess / (half * half));
}

[[nodiscard]] inline FluctuationRates fluctuation_rates(const DeviceParams& p, double n_bar) {
    if (!(n_bar >= p.n_t * (1.0 - detail::transparency_slack))) {
        throw BelowTransparency("operating point n_bar = " + std::to_string(n_bar) +
                                " is below the transparency photon number n_t = " +
                                std::to_string(p.n_t));
    }
    FluctuationRates rates;
    rates.gamma_n = photon_relaxation_rate(p, n_bar);
    rates.Gamma_N = excitation_relaxation_rate(p, n_bar);
    rates.omega_R = relaxation_oscillation_rate(p, n_bar);
    rates.r = fluctuation_ratio(p, n_bar);
    return rates;
}

[[nodiscard]] inline DriftDiffusion drift_and_diffusion(const FluctuationRates& rates, double n_bar) {
    DriftDiffusion dd;
    // r = 0 only at the transparency fixed point, where the coupling itself
    // vanishes; keep the off-diagonals at zero instead of dividing by zero.
    const double coupling_Nn = rates.r > 0.0 ? rates.r * rates.omega_R : 0.0;
    const double coupling_nN = rates.r > 0.0 ? rates.omega_R / rates.r : 0.0;
    dd.A = {{{rates.Gamma_N, coupling_Nn}, {-coupling_nN, rates.gamma_n}}};
    dd.B = {{{0.0, 0.0}, {0.0, 2.0 * n_bar * (n_bar + 1.0) * rates.gamma_n}}};
    return dd;
}

namespace detail {

// Variance-to-thermal ratio 1/(1 + C) with the correction term C arranged
// as (Gamma_N/gamma_n) / (1 + Gamma_N gamma_n/omega_R^2 + Gamma_N^2/omega_R^2)
// so no product of squared rates is ever formed. At omega_R = 0 the
// divisions overflow to +inf, C collapses to 0, and the ratio is exactly
// the thermal limit, which is the right physics for the decoupled point.
[[nodiscard]] inline double variance_ratio(double gamma_n, double Gamma_N, double omega_R) noexcept {
    const double w2 = omega_R * omega_R;
    const double correction = (Gamma_N / gamma_n) / (1.0 + Gamma_N * gamma_n / w2 + (Gamma_N / w2) * Gamma_N);
    return 1.0 / (1.0 + correction);
}

[[nodiscard]] inline NoiseResult make_noise_result(double n_bar, double ratio) noexcept {
    NoiseResult res;
    res.thermal_limit = n_bar * (n_bar + 1.0);
    res.ratio = ratio;
    res.variance = ratio * res.thermal_limit;
    res.fano = ratio * (n_bar + 1.0);
    return res;
}

}  // namespace detail

// Stationary photon-number variance of the linearized model, closed form.
[[nodiscard]] inline NoiseResult photon_variance_closed_form(const DeviceParams& p, double n_bar) {
    const FluctuationRates rates = fluctuation_rates(p, n_bar);
    return detail::make_noise_result(n_bar,
                                     detail::variance_ratio(rates.gamma_n, rates.Gamma_N, rates.omega_R));
}

// Full stationary covariance of dx = -A x dt + noise, <noise noise^T> = B d(t-t'),
// from the linear system A S + S A^T = B in the three unknowns of symmetric S.
// Requires A positive-stable (tr > 0 and det > 0 for a 2x2).
[[nodiscard]] inline Mat2 stationary_covariance(const Mat2& A, const Mat2& B) {
    const double tr = A[0][0] + A[1][1];
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    if (!(tr > 0.0) || !(det > 0.0)) {
        const double disc = 0.25 * tr * tr - det;
        std::string eigs;
        if (disc >= 0.0) {
            const double root = std::sqrt(disc);
            eigs = std::to_string(0.5 * tr - root) + ", " + std::to_string(0.5 * tr + root);
        } else {
            const double root = std::sqrt(-disc);
            eigs = std::to_string(0.5 * tr) + " +/- " + std::to_string(root) + "i";
        }
        throw UnstableLinearization("drift matrix is not positive-stable; eigenvalues: " + eigs);
    }

    // Unknowns (S_NN, S_Nn, S_nn); rows are the (0,0), (0,1), (1,1)
    // components of A S + S A^T = B.
    double m[3][4] = {
        {2.0 * A[0][0], 2.0 * A[0][1], 0.0, B[0][0]},
        {A[1][0], tr, A[0][1], B[0][1]},
        {0.0, 2.0 * A[1][0], 2.0 * A[1][1], B[1][1]},
    };

    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) {
                pivot = row;
            }
        }
        if (m[pivot][col] == 0.0) {
            throw UnstableLinearization("stationary covariance system is singular");
        }
        if (pivot != col) {
            for (int k = col; k < 4; ++k) {
                std::swap(m[pivot][k], m[col][k]);
            }
        }
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[row][col] / m[col][col];
            for (int k = col; k < 4; ++k) {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    double x[3];
    for (int row = 2; row >= 0; --row) {
        double acc = m[row][3];
        for (int k = row + 1; k < 3; ++k) {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    return {{{x[0], x[1]}, {x[1], x[2]}}};
}

// Independent oracle for the closed form: the photon variance obtained from
// the stationary-covariance solve of the same drift/diffusion pair.
[[nodiscard]] inline NoiseResult photon_variance_lyapunov(const DeviceParams& p, double n_bar) {
    const FluctuationRates rates = fluctuation_rates(p, n_bar);
    const DriftDiffusion dd = drift_and_diffusion(rates, n_bar);
    const Mat2 sigma = stationary_covariance(dd.A, dd.B);
    const double thermal = n_bar * (n_bar + 1.0);
    return detail::make_noise_result(n_bar, sigma[1][1] / thermal);
}

}  // namespace lasernoise

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "lasernoise/detail/format.hpp"
#include "lasernoise/device.hpp"
#include "lasernoise/fluctuations.hpp"
#include "lasernoise/gillespie.hpp"
#include "lasernoise/langevin.hpp"
#include "lasernoise/noise_threshold.hpp"
#include "lasernoise/rng.hpp"
#include "lasernoise/steady_state.hpp"
#include "lasernoise/sweeps.hpp"

// Self-contained verification battery. Each check states what it asserts,
// runs against frozen tolerances, and reports pass/fail with a one-line
// diagnostic plus its wall time (the time budget is part of the check).

namespace lasernoise {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CheckResult> checks;
    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

class CheckTimer {
  public:
    CheckTimer() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

[[nodiscard]] inline std::string fmt(double x) { return format_shortest(x); }

// Random lasing-valid device: beta log-uniform over [1e-12, 1e-1],
// transparency photon number uniform over (0.5, 4], saturable pool
// log-uniform over [1e4, 1e10], cavity lifetime solved from those.
[[nodiscard]] inline DeviceParams random_device(std::mt19937_64& eng) {
    const double beta = std::pow(10.0, -12.0 + 11.0 * uniform01(eng));
    double n_t = 0.0;
    do {
        n_t = 0.5 + 3.5 * uniform01(eng);
    } while (n_t <= 0.5);
    const double N_T = std::pow(10.0, 4.0 + 6.0 * uniform01(eng));
    const double tau_sp = 1.0;
    const double tau_cav = n_t * tau_sp / (beta * N_T);
    return make_device(beta, N_T, tau_sp, tau_cav);
}

[[nodiscard]] inline double ratio_deviation_percent(double value, double reference) {
    return 100.0 * std::abs(value / reference - 1.0);
}

}  // namespace detail

// 1. The variance ratio must live in (0, 1]: partition noise can only ever
//    reduce photon-number fluctuations below the thermal value.
[[nodiscard]] inline CheckResult check_thermal_bound() {
    detail::CheckTimer timer;
    CheckResult res{1, "variance ratio stays in (0, 1] on randomized devices", false, "", 0.0, 1.0};
    std::mt19937_64 eng = make_stream_engine(0x1a5e2, 0);
    double worst_low = 1.0;
    double worst_high = 0.0;
    bool ok = true;
    for (int d = 0; d < 1000 && ok; ++d) {
        const DeviceParams p = detail::random_device(eng);
        const double n_th = threshold_photon_number(p);
        const double lo = p.n_t * (1.0 + 1e-9);
        const double hi = 1e3 * n_th;
        for (int k = 0; k < 10; ++k) {
            const double u = uniform01(eng);
            const double n_bar = std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
            const double ratio = photon_variance_closed_form(p, n_bar).ratio;
            worst_low = std::min(worst_low, ratio);
            worst_high = std::max(worst_high, ratio);
            if (!(ratio > 0.0) || !(ratio <= 1.0)) {
                ok = false;
                res.detail = "violated at beta=" + detail::fmt(p.beta) +
                             " n=" + detail::fmt(n_bar) + " ratio=" + detail::fmt(ratio);
                break;
            }
        }
    }
    if (ok) {
        res.detail = "1000 devices x 10 points; ratio range [" + detail::fmt(worst_low) + ", " +
                     detail::fmt(worst_high) + "]";
    }
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

// 2. The closed-form ratio and the stationary-covariance solve are two
//    routes to the same number; they must agree to 1e-9 relative.
[[nodiscard]] inline CheckResult check_closed_form_vs_covariance() {
    detail::CheckTimer timer;
    CheckResult res{2, "closed form matches stationary-covariance solve", false, "", 0.0, 1.0};
    std::mt19937_64 eng = make_stream_engine(0x1a5e2, 1);
    double worst = 0.0;
    bool ok = true;
    for (int d = 0; d < 1000 && ok; ++d) {
        const DeviceParams p = detail::random_device(eng);
        const double n_th = threshold_photon_number(p);
        const double lo = p.n_t * (1.0 + 1e-9);
        const double hi = 1e3 * n_th;
        for (int k = 0; k < 10; ++k) {
            const double u = uniform01(eng);
            const double n_bar = std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
            const double closed = photon_variance_closed_form(p, n_bar).ratio;
            const double solved = photon_variance_lyapunov(p, n_bar).ratio;
            const double rel = std::abs(solved - closed) / closed;
            worst = std::max(worst, rel);
            if (!(rel <= 1e-9)) {
                ok = false;
                res.detail = "mismatch at beta=" + detail::fmt(p.beta) +
                             " n=" + detail::fmt(n_bar) + " rel=" + detail::fmt(rel);
                break;
            }
        }
    }
    if (ok) {
        res.detail = "1000 devices x 10 points; worst relative difference " + detail::fmt(worst);
    }
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

// 3. In the adiabatic limit the half-thermal photon number should approach
//    sqrt((n_T + 1/2) / (2 beta)). Gate: within 10% for beta in
//    [1e-12, 1e-10] with material-default covariation.
[[nodiscard]] inline CheckResult check_adiabatic_regime() {
    detail::CheckTimer timer;
    CheckResult res{3, "adiabatic half-thermal point approaches sqrt((n_T+1/2)/(2 beta))",
                    false, "", 0.0, 1.0};
    const DeviceParams base = reference_device();
    std::ostringstream detail_line;
    bool ok = true;
    for (const double exp10 : {-12.0, -11.5, -11.0, -10.5, -10.0}) {
        const double beta = std::pow(10.0, exp10);
        const DeviceParams p = with_beta_material(base, beta);
        const double n_half = noise_threshold_photon(p);
        const double n_th = threshold_photon_number(p);
        const double dev = detail::ratio_deviation_percent(n_half, n_th);
        detail_line << (detail_line.tellp() > 0 ? "; " : "") << "beta=" << detail::fmt(beta)
                    << " dev=" << detail::fmt(dev) << "%";
        if (dev > 10.0) {
            ok = false;
        }
    }
    res.detail = detail_line.str() + " (gate 10%)";
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

// 4. Mid-range couplings pin the half-thermal point near 1e4 photons,
//    independent of beta. Gate: within [3e3, 3e4] for beta in [1e-7, 1e-5].
[[nodiscard]] inline CheckResult check_gain_fixed_regime() {
    detail::CheckTimer timer;
    CheckResult res{4, "gain-fixed half-thermal plateau sits in [3e3, 3e4]", false, "", 0.0, 1.0};
    const DeviceParams base = reference_device();
    std::ostringstream detail_line;
    bool ok = true;
    for (const double exp10 : {-7.0, -6.5, -6.0, -5.5, -5.0}) {
        const double beta = std::pow(10.0, exp10);
        const double n_half = noise_threshold_photon(with_beta_material(base, beta));
        detail_line << (detail_line.tellp() > 0 ? "; " : "") << "beta=" << detail::fmt(beta)
                    << " n=" << detail::fmt(n_half);
        if (!(n_half >= 3e3 && n_half <= 3e4)) {
            ok = false;
        }
    }
    res.detail = detail_line.str();
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

// 5. Large-beta devices: the half-thermal point follows 1e2/sqrt(beta)
//    within a factor of 3 for beta in [1e-3, 1e-1].
[[nodiscard]] inline CheckResult check_stimulated_regime() {
    detail::CheckTimer timer;
    CheckResult res{5, "large-beta half-thermal point tracks 1e2/sqrt(beta)", false, "", 0.0, 1.0};
    const DeviceParams base = reference_device();
    std::ostringstream detail_line;
    bool ok = true;
    for (const double exp10 : {-3.0, -2.5, -2.0, -1.5, -1.0}) {
        const double beta = std::pow(10.0, exp10);
        const double n_half = noise_threshold_photon(with_beta_material(base, beta));
        const double summary = 1e2 / std::sqrt(beta);
        const double factor = n_half > summary ? n_half / summary : summary / n_half;
        detail_line << (detail_line.tellp() > 0 ? "; " : "") << "beta=" << detail::fmt(beta)
                    << " factor=" << detail::fmt(factor);
        if (!(factor <= 3.0)) {
            ok = false;
        }
    }
    res.detail = detail_line.str() + " (gate 3x)";
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

// 6. The pump-margin curve over a 60-point beta grid follows the piecewise
//    summary: negligible margin for small beta, within 3x of 1e4*beta and
//    1e2*sqrt(beta) one decade inside the middle and upper branches.
[[nodiscard]] inline CheckResult check_current_margin_curve() {
    detail::CheckTimer timer;
    CheckResult res{6, "pump-margin curve follows the piecewise summary", false, "", 0.0, 5.0};
    const DeviceParams base = reference_device();
    SweepSpec spec;
    spec.variable = SweepVariable::Beta;
    spec.grid = GridSpec{1e-11, 1e-1, 60, GridSpacing::Log};
    spec.device = base;
    const SweepTable table = figure2_data(spec);
    bool ok = table.errors.empty();
    double worst_factor = 1.0;
    double worst_small = 0.0;
    std::string fail_note;
    for (const std::vector<Cell>& row : table.rows) {
        const double inv_beta = std::get<double>(row[0]);
        const double beta = 1.0 / inv_beta;
        const double margin = std::get<double>(row[1]);
        if (beta <= 1e-9) {
            worst_small = std::max(worst_small, std::abs(margin));
            if (!(std::abs(margin) < 1e-3)) {
                ok = false;
                fail_note = " small-beta margin " + detail::fmt(margin) + " at beta=" +
                            detail::fmt(beta);
            }
        } else if (beta >= 1e-7 && beta <= 1e-5) {
            const double summary = 1e4 * beta;
            const double factor = margin > summary ? margin / summary : summary / margin;
            worst_factor = std::max(worst_factor, factor);
            if (!(factor <= 3.0)) {
                ok = false;
                fail_note = " mid-branch factor " + detail::fmt(factor) + " at beta=" +
                            detail::fmt(beta);
            }
        } else if (beta >= 1e-3) {
            const double summary = 1e2 * std::sqrt(beta);
            const double factor = margin > summary ? margin / summary : summary / margin;
            worst_factor = std::max(worst_factor, factor);
            if (!(factor <= 3.0)) {
                ok = false;
                fail_note = " upper-branch factor " + detail::fmt(factor) + " at beta=" +
                            detail::fmt(beta);
            }
        }
    }
    const double margin_1e10 = noise_threshold_current(with_beta_material(base, 1e-10)).margin;
    if (!(std::abs(margin_1e10) < 1e-3)) {
        ok = false;
        fail_note += " margin(beta=1e-10)=" + detail::fmt(margin_1e10);
    }
    res.detail = "60-point grid; worst branch factor " + detail::fmt(worst_factor) +
                 ", worst small-beta margin " + detail::fmt(worst_small) +
                 ", margin(1e-10)=" + detail::fmt(margin_1e10) + fail_note;
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

// 7. Scale anchor: with material defaults at beta = 1e-5 the product
//    beta * I_th lands in [0.2, 2] microamperes.
[[nodiscard]] inline CheckResult check_threshold_current_anchor() {
    detail::CheckTimer timer;
    CheckResult res{7, "beta * threshold current lands in [0.2, 2] uA", false, "", 0.0, 1e-3};
    const DeviceParams p = reference_device();
    const double j_th = threshold_current(p);
    const double I_th_mA = j_th * elementary_charge * 1e3;
    const double product_uA = p.beta * j_th * elementary_charge * 1e6;
    res.detail = "I_th = " + detail::fmt(I_th_mA) + " mA, beta*I_th = " + detail::fmt(product_uA) +
                 " uA";
    res.seconds = timer.seconds();
    res.passed = (product_uA >= 0.2 && product_uA <= 2.0) && res.seconds < res.budget_seconds;
    return res;
}

// 8. A beta = 1e-3 device is still mostly thermal at twice threshold:
//    variance ratio above one half.
[[nodiscard]] inline CheckResult check_thermal_above_threshold() {
    detail::CheckTimer timer;
    CheckResult res{8, "beta=1e-3 device stays above half-thermal at 2x threshold",
                    false, "", 0.0, 1e-3};
    const DeviceParams p = with_beta_material(reference_device(), 1e-3);
    const double j = 2.0 * threshold_current(p);
    const double n_bar = stationary_photon_number(p, j);
    const double ratio = photon_variance_closed_form(p, n_bar).ratio;
    res.detail = "n = " + detail::fmt(n_bar) + ", ratio = " + detail::fmt(ratio) + " (> 0.5)";
    res.seconds = timer.seconds();
    res.passed = (ratio > 0.5) && res.seconds < res.budget_seconds;
    return res;
}

// 9. Diffusion simulation at the half-thermal operating point reproduces
//    ratio = 0.50 within max(3 standard errors, 0.05) over 1e7 steps.
[[nodiscard]] inline CheckResult check_langevin_oracle() {
    detail::CheckTimer timer;
    CheckResult res{9, "diffusion simulation reproduces the half-thermal ratio", false, "", 0.0,
                    60.0};
    const DeviceParams p = reference_device();
    const double n_half = noise_threshold_photon(p);
    const LangevinConfig config = langevin_low_bias_config(p, n_half, 10'000'000, 2);
    const LangevinResult sim = simulate_langevin(p, n_half, config);
    const double thermal = n_half * (n_half + 1.0);
    const double ratio = sim.delta_n.variance / thermal;
    const double se = sim.delta_n.variance_std_error / thermal;
    const double tol = std::max(3.0 * se, 0.05);
    res.detail = "ratio = " + detail::fmt(ratio) + " +/- " + detail::fmt(se) + " (target 0.5, tol " +
                 detail::fmt(tol) + ")";
    res.seconds = timer.seconds();
    res.passed = (std::abs(ratio - 0.5) <= tol) && res.seconds < res.budget_seconds;
    return res;
}

// 10. Event-by-event simulation of the toy device agrees with the rate
//     equations: means within 5%, variance ratio > 0.8 just above
//     threshold and < 0.5 well above it, bit-identical across reruns.
[[nodiscard]] inline CheckResult check_gillespie_oracle() {
    detail::CheckTimer timer;
    CheckResult res{10, "jump simulation matches rate equations at toy scale", false, "", 0.0,
                    120.0};
    const DeviceParams p = toy_a();
    const double j_th = threshold_current(p);

    struct PointCheck {
        double j_factor;
        double t_max;
        std::uint64_t seed;
    };
    const PointCheck points[] = {{0.2, 3000.0, 3}, {5.0, 1500.0, 4}};

    bool ok = true;
    std::ostringstream detail_line;
    std::vector<GillespieResult> first_pass;
    for (const PointCheck& pc : points) {
        const double j = pc.j_factor * j_th;
        GillespieConfig config;
        config.t_max = pc.t_max;
        config.burn_in = 50.0;
        config.seed = pc.seed;
        const GillespieResult sim = simulate_gillespie(p, j, config);
        first_pass.push_back(sim);
        const OperatingPoint ref = steady_state(p, j);
        const double n_dev = detail::ratio_deviation_percent(sim.photon.mean, ref.n_bar);
        const double N_dev = detail::ratio_deviation_percent(sim.excitation.mean, ref.N_bar);
        const double ratio = sim.photon.variance / (sim.photon.mean * (sim.photon.mean + 1.0));
        detail_line << (detail_line.tellp() > 0 ? "; " : "") << "j=" << detail::fmt(pc.j_factor)
                    << "j_th: ratio=" << detail::fmt(ratio) << " dev(n)=" << detail::fmt(n_dev)
                    << "% dev(N)=" << detail::fmt(N_dev) << "%";
        if (n_dev > 5.0 || N_dev > 5.0) {
            ok = false;
        }
        if (pc.j_factor < 1.0 ? !(ratio > 0.8) : !(ratio < 0.5)) {
            ok = false;
        }
    }
    for (std::size_t i = 0; i < std::size(points); ++i) {
        const double j = points[i].j_factor * j_th;
        GillespieConfig config;
        config.t_max = points[i].t_max;
        config.burn_in = 50.0;
        config.seed = points[i].seed;
        const GillespieResult again = simulate_gillespie(p, j, config);
        if (again.photon.mean != first_pass[i].photon.mean ||
            again.photon.variance != first_pass[i].photon.variance ||
            again.excitation.mean != first_pass[i].excitation.mean ||
            again.events != first_pass[i].events) {
            ok = false;
            detail_line << "; rerun with seed " << points[i].seed << " not bit-identical";
        }
    }
    res.detail = detail_line.str();
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

// 11. Inversion and stationarity: pump -> photon number -> pump returns the
//     input to 1e-10 relative, and the rate equations evaluate to zero at
//     every stationary point (residuals below 1e-9 of the flux scale).
[[nodiscard]] inline CheckResult check_round_trip() {
    detail::CheckTimer timer;
    CheckResult res{11, "pump round trip is the identity and stationary residuals vanish",
                    false, "", 0.0, 1.0};
    bool ok = true;
    double worst_round = 0.0;
    double worst_resid = 0.0;
    std::string fail_note;
    for (const char* name : {"reference", "toy-a", "toy-b"}) {
        const DeviceParams p = preset(name);
        const double j_th = threshold_current(p);
        for (int i = 0; i < 41; ++i) {
            const double j =
                j_th * std::pow(10.0, -1.0 + 3.0 * static_cast<double>(i) / 40.0);
            const OperatingPoint op = steady_state(p, j);
            const double back = current_for_photon_number(p, op.n_bar);
            const double round_rel = std::abs(back - j) / j;
            worst_round = std::max(worst_round, round_rel);
            if (!(round_rel <= 1e-10)) {
                ok = false;
                fail_note = " round trip " + detail::fmt(round_rel) + " on " + name;
            }
            const RateResiduals r = rate_residuals(p, op.N_bar, op.n_bar, j);
            const double k = p.beta / p.tau_sp;
            const double scale_N = j + op.N_bar / p.tau_sp + 2.0 * k * op.N_bar * op.n_bar +
                                   2.0 * k * p.N_T * op.n_bar;
            const double scale_n = k * op.N_bar * (2.0 * op.n_bar + 1.0) +
                                   2.0 * k * p.N_T * op.n_bar + op.n_bar / p.tau_cav;
            const double resid = std::max(std::abs(r.dN_dt) / scale_N, std::abs(r.dn_dt) / scale_n);
            worst_resid = std::max(worst_resid, resid);
            if (!(resid <= 1e-9)) {
                ok = false;
                fail_note = " residual " + detail::fmt(resid) + " on " + name;
            }
        }
    }
    res.detail = "3 devices x 41 pumps; worst round trip " + detail::fmt(worst_round) +
                 ", worst residual " + detail::fmt(worst_resid) + fail_note;
    res.seconds = timer.seconds();
    res.passed = ok && res.seconds < res.budget_seconds;
    return res;
}

[[nodiscard]] inline AcceptanceReport run_acceptance() {
    AcceptanceReport report;
    report.checks.push_back(check_thermal_bound());
    report.checks.push_back(check_closed_form_vs_covariance());
    report.checks.push_back(check_adiabatic_regime());
    report.checks.push_back(check_gain_fixed_regime());
    report.checks.push_back(check_stimulated_regime());
    report.checks.push_back(check_current_margin_curve());
    report.checks.push_back(check_threshold_current_anchor());
    report.checks.push_back(check_thermal_above_threshold());
    report.checks.push_back(check_langevin_oracle());
    report.checks.push_back(check_gillespie_oracle());
    report.checks.push_back(check_round_trip());
    return report;
}

// Reduced pair of cross-checks for one device, used by `verify --preset`:
// a short diffusion run against the closed-form ratio, and (when the event
// budget allows) a jump-process run against the steady state.
[[nodiscard]] inline AcceptanceReport quick_verify(const DeviceParams& p, std::uint64_t seed) {
    AcceptanceReport report;
    {
        detail::CheckTimer timer;
        CheckResult res{1, "diffusion run matches closed-form ratio", false, "", 0.0, 60.0};
        const double n_half = noise_threshold_photon(p);
        const LangevinConfig config = langevin_low_bias_config(p, n_half, 2'000'000, seed);
        const LangevinResult sim = simulate_langevin(p, n_half, config);
        const double thermal = n_half * (n_half + 1.0);
        const double ratio = sim.delta_n.variance / thermal;
        const double se = sim.delta_n.variance_std_error / thermal;
        const double target = photon_variance_closed_form(p, n_half).ratio;
        const double tol = std::max(3.0 * se, 0.05);
        res.detail = "ratio = " + detail::fmt(ratio) + " vs " + detail::fmt(target) + " (tol " +
                     detail::fmt(tol) + ")";
        res.seconds = timer.seconds();
        res.passed = std::abs(ratio - target) <= tol && res.seconds < res.budget_seconds;
        report.checks.push_back(res);
    }
    {
        detail::CheckTimer timer;
        CheckResult res{2, "jump run matches steady state", false, "", 0.0, 120.0};
        const double j = 2.0 * threshold_current(p);
        GillespieConfig config;
        config.t_max = 2000.0 * std::max(p.tau_sp, p.tau_cav);
        config.burn_in = config.t_max * 0.02;
        config.seed = seed;
        config.max_events = 50'000'000;
        try {
            const GillespieResult sim = simulate_gillespie(p, j, config);
            const OperatingPoint ref = steady_state(p, j);
            const double n_dev = detail::ratio_deviation_percent(sim.photon.mean, ref.n_bar);
            const double N_dev = detail::ratio_deviation_percent(sim.excitation.mean, ref.N_bar);
            res.detail = "dev(n) = " + detail::fmt(n_dev) + "%, dev(N) = " + detail::fmt(N_dev) +
                         "% (gate 5%)";
            res.passed = n_dev <= 5.0 && N_dev <= 5.0;
        } catch (const BudgetExceeded&) {
            res.detail = "skipped: device too large for the event budget";
            res.passed = true;
        }
        res.seconds = timer.seconds();
        res.passed = res.passed && res.seconds < res.budget_seconds;
        report.checks.push_back(res);
    }
    return report;
}

}  // namespace lasernoise

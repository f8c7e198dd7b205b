#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "lasernoise/device.hpp"
#include "lasernoise/errors.hpp"
#include "lasernoise/rng.hpp"
#include "lasernoise/steady_state.hpp"
#include "lasernoise/trajectory_stats.hpp"

namespace lasernoise {

struct GillespieConfig {
    double t_max = 0.0;    // s, total simulated time including burn-in
    double burn_in = 0.0;  // s
    std::uint64_t seed = 1;
    // (N0, n0); defaults to the rounded steady state of the pump.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> initial_state;
    std::uint64_t max_events = 1'000'000'000;
};

struct GillespieResult {
    TrajectoryStats excitation;  // N channel
    TrajectoryStats photon;      // n channel
    std::uint64_t events = 0;
    double t_end = 0.0;             // s
    double estimated_events = 0.0;  // steady-state a priori cost estimate
};

// Exact-event simulation of the integer-valued jump process whose mean
// field is the pair of rate equations. Six channels, in this fixed order:
//
//   1. pump                      N -> N+1            rate j
//   2. spontaneous, into mode    (N, n) -> (N-1, n+1) rate beta N/tau_sp
//   3. spontaneous, elsewhere    N -> N-1            rate (1-beta) N/tau_sp
//   4. stimulated emission       (N, n) -> (N-1, n+1) rate 2 beta N n/tau_sp
//   5. absorption                (N, n) -> (N+1, n-1) rate 2 beta N_T n/tau_sp
//   6. cavity loss               n -> n-1            rate n/tau_cav
//
// Channels 4 and 5 reproduce the net gain 2 beta (N - N_T) n/tau_sp in the
// mean; the absorber pool is pinned at the transparency value N_T, a
// modeling choice whose order-1/n consequences at small scale are exactly
// what this oracle quantifies. Statistics are time-weighted over the
// post-burn-in window; moments are clipped to [burn_in, t_max] so the
// window length is exact. Optionally dumps the trajectory as CSV.
[[nodiscard]] inline GillespieResult simulate_gillespie(const DeviceParams& p, double j,
                                                        const GillespieConfig& config,
                                                        std::ostream* trajectory_dump = nullptr) {
    if (!(j >= 0.0)) {
        throw NegativeInput("pump rate j must be >= 0, got " + std::to_string(j));
    }
    if (!(config.t_max > config.burn_in) || !(config.burn_in >= 0.0)) {
        throw InvalidParameter("need t_max > burn_in >= 0 (got t_max = " + std::to_string(config.t_max) +
                               ", burn_in = " + std::to_string(config.burn_in) + ")");
    }

    double N;
    double n;
    if (config.initial_state) {
        N = static_cast<double>(config.initial_state->first);
        n = static_cast<double>(config.initial_state->second);
    } else {
        const OperatingPoint op = steady_state(p, j);
        N = std::round(op.N_bar);
        n = std::round(op.n_bar);
    }

    // A priori cost estimate from the steady-state total event rate.
    GillespieResult result;
    {
        const OperatingPoint op = steady_state(p, j);
        const double k = p.beta / p.tau_sp;
        const double a_total = j + op.N_bar / p.tau_sp + 2.0 * k * op.N_bar * op.n_bar +
                               2.0 * k * p.N_T * op.n_bar + op.n_bar / p.tau_cav;
        result.estimated_events = a_total * config.t_max;
        if (result.estimated_events > static_cast<double>(config.max_events)) {
            throw BudgetExceeded("estimated " + std::to_string(result.estimated_events) +
                                 " events exceed the cap of " + std::to_string(config.max_events) +
                                 "; shrink t_max or the device");
        }
    }
    // State-dependent rates can exceed the steady-state estimate; stop hard
    // at twice the cap rather than running away.
    const double hard_cap = 2.0 * static_cast<double>(config.max_events);

    MomentAccumulator acc_N(config.t_max - config.burn_in);
    MomentAccumulator acc_n(config.t_max - config.burn_in);
    std::mt19937_64 eng = make_stream_engine(config.seed, 0);

    if (trajectory_dump != nullptr) {
        *trajectory_dump << "t_seconds,N,n\n";
        *trajectory_dump << "0," << static_cast<std::uint64_t>(N) << "," << static_cast<std::uint64_t>(n)
                         << "\n";
    }

    const double k = p.beta / p.tau_sp;
    double t = 0.0;
    while (t < config.t_max) {
        const double a1 = j;
        const double a2 = p.beta * N / p.tau_sp;
        const double a3 = (1.0 - p.beta) * N / p.tau_sp;
        const double a4 = 2.0 * k * N * n;
        const double a5 = 2.0 * k * p.N_T * n;
        const double a6 = n / p.tau_cav;
        const double a_total = a1 + a2 + a3 + a4 + a5 + a6;

        // Absorbing state (possible only with j = 0): hold to the end.
        const double t_next = a_total > 0.0 ? t + exponential(eng, a_total) : config.t_max;

        const double lo = std::max(t, config.burn_in);
        const double hi = std::min(t_next, config.t_max);
        if (hi > lo) {
            acc_N.add(N, hi - lo);
            acc_n.add(n, hi - lo);
        }
        if (t_next >= config.t_max) {
            t = config.t_max;
            break;
        }
        t = t_next;

        const double u = uniform01(eng) * a_total;
        if (u < a1) {
            N += 1.0;
        } else if (u < a1 + a2) {
            N -= 1.0;
            n += 1.0;
        } else if (u < a1 + a2 + a3) {
            N -= 1.0;
        } else if (u < a1 + a2 + a3 + a4) {
            N -= 1.0;
            n += 1.0;
        } else if (u < a1 + a2 + a3 + a4 + a5) {
            N += 1.0;
            n -= 1.0;
        } else {
            n -= 1.0;
        }
        ++result.events;
        if (trajectory_dump != nullptr) {
            *trajectory_dump << t << "," << static_cast<std::uint64_t>(N) << ","
                             << static_cast<std::uint64_t>(n) << "\n";
        }
        if (static_cast<double>(result.events) > hard_cap) {
            throw BudgetExceeded("aborted after " + std::to_string(result.events) +
                                 " events (twice the configured cap)");
        }
    }

    result.excitation = acc_N.finish();
    result.photon = acc_n.finish();
    result.t_end = t;
    return result;
}

}  // namespace lasernoise

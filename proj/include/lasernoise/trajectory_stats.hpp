#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lasernoise/errors.hpp"

namespace lasernoise {

// Stationary moments estimated from one weighted trajectory.
//
// std_error is the standard error of the mean from the batch-means method,
// which absorbs the serial correlation of the trajectory; the plain
// sigma/sqrt(samples) would be far too optimistic. variance_std_error is the
// batch-means error of the variance estimate itself. decorrelation_time is
// the integrated autocorrelation time implied by the batch means, capped at
// one tenth of the observation window (beyond that the window is simply too
// short to measure it).
struct TrajectoryStats {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    double variance_std_error = 0.0;
    double decorrelation_time = 0.0;  // s
    std::uint64_t sample_count = 0;
    double total_weight = 0.0;  // s of observation time
};

// Streaming time-weighted moment accumulator over a window of known total
// weight. Samples arrive as (value, dwell weight) pairs; batches are cut by
// cumulative weight so each of the n_batches spans the same share of the
// window regardless of how many samples land in it.
class MomentAccumulator {
public:
    static constexpr int n_batches = 64;

    explicit MomentAccumulator(double expected_total_weight) : expected_(expected_total_weight) {
        if (!(expected_total_weight > 0.0)) {
            throw InvalidParameter("expected total weight must be > 0");
        }
    }

    void add(double value, double weight) noexcept {
        if (!(weight > 0.0)) {
            return;
        }
        const int batch = batch_index();
        batch_weight_[batch] += weight;
        batch_sum_[batch] += weight * value;
        batch_sum_sq_[batch] += weight * value * value;

        // Weighted Welford update for the global moments.
        weight_ += weight;
        const double delta = value - mean_;
        mean_ += (weight / weight_) * delta;
        m2_ += weight * delta * (value - mean_);
        ++count_;
    }

    [[nodiscard]] TrajectoryStats finish() const {
        if (!(weight_ > 0.0)) {
            throw EmptyWindow("no weighted samples accumulated");
        }
        TrajectoryStats stats;
        stats.mean = mean_;
        stats.variance = m2_ / weight_;
        stats.sample_count = count_;
        stats.total_weight = weight_;

        // Batch means and batch variances over the filled batches.
        std::array<double, n_batches> bmean{};
        std::array<double, n_batches> bvar{};
        int filled = 0;
        double filled_weight = 0.0;
        for (int i = 0; i < n_batches; ++i) {
            if (batch_weight_[i] > 0.0) {
                const double m = batch_sum_[i] / batch_weight_[i];
                bmean[filled] = m;
                bvar[filled] = batch_sum_sq_[i] / batch_weight_[i] - m * m;
                filled_weight += batch_weight_[i];
                ++filled;
            }
        }
        if (filled < 2) {
            return stats;  // errors stay at zero; too short to estimate them
        }

        double mean_spread = 0.0;
        double var_center = 0.0;
        for (int i = 0; i < filled; ++i) {
            const double d = bmean[i] - mean_;
            mean_spread += d * d;
            var_center += bvar[i];
        }
        var_center /= filled;
        double var_spread = 0.0;
        for (int i = 0; i < filled; ++i) {
            const double d = bvar[i] - var_center;
            var_spread += d * d;
        }
        // Standard error of the mean of `filled` near-independent batch
        // means, and likewise for the batch variances.
        stats.std_error = std::sqrt(mean_spread / (static_cast<double>(filled) * (filled - 1)));
        stats.variance_std_error = std::sqrt(var_spread / (static_cast<double>(filled) * (filled - 1)));

        // Batch-means identity: se^2 = 2 tau variance / T for T >> tau.
        if (stats.variance > 0.0) {
            const double tau = weight_ * stats.std_error * stats.std_error / (2.0 * stats.variance);
            stats.decorrelation_time = std::min(tau, 0.1 * weight_);
        }
        return stats;
    }

private:
    [[nodiscard]] int batch_index() const noexcept {
        const int idx = static_cast<int>(static_cast<double>(n_batches) * (weight_ / expected_));
        return idx < 0 ? 0 : (idx >= n_batches ? n_batches - 1 : idx);
    }

    double expected_ = 0.0;
    double weight_ = 0.0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    std::uint64_t count_ = 0;
    std::array<double, n_batches> batch_weight_{};
    std::array<double, n_batches> batch_sum_{};
    std::array<double, n_batches> batch_sum_sq_{};
};

// One-shot helper over stored samples.
[[nodiscard]] inline TrajectoryStats estimate_stationary_moments(std::span<const double> values,
                                                                 std::span<const double> weights) {
    if (values.size() != weights.size()) {
        throw InvalidParameter("values and weights must have equal length");
    }
    double total = 0.0;
    for (const double w : weights) {
        total += w;
    }
    if (!(total > 0.0)) {
        throw EmptyWindow("sample window has no positive weight");
    }
    MomentAccumulator acc(total);
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc.add(values[i], weights[i]);
    }
    return acc.finish();
}

}  // namespace lasernoise

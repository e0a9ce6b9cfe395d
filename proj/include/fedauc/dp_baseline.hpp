#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fedauc/metrics.hpp"

namespace fedauc {

/// Budget split of the Laplace baseline: four statistics at N decision points
/// each get epsilon' = epsilon / (4N).
struct DpConfig {
    double epsilon = 1.0;
    int n_points = 100;

    double per_stat_epsilon() const { return epsilon / (4.0 * n_points); }
    double laplace_scale() const { return 1.0 / per_stat_epsilon(); }
};

/// Per-party noisy confusion-matrix counts. Deliberately unclamped and
/// unrounded; the small-data pathology depends on keeping negative and
/// fractional values.
struct NoisyStats {
    std::vector<double> tp;
    std::vector<double> fp;
    std::vector<double> tn;
    std::vector<double> fn;
};

/// Derives TN/FN from the true totals, then adds independent Laplace noise
/// with sensitivity 1 to each of the 4N statistics.
NoisyStats dp_client_stats(const CountVector& counts, const DpConfig& config,
                           std::mt19937_64& rng);

/// Sums noisy statistics across parties and evaluates the trapezoidal AUC on
/// the per-threshold noisy TPR/FPR points. No clipping of the result.
double dp_aggregate_auc(const std::vector<NoisyStats>& parties);

struct DpTrialSummary {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> values;
};

/// Repeats the baseline with fresh noise; reports sample mean and standard
/// deviation across trials.
DpTrialSummary dp_trials(const std::vector<CountVector>& per_party, const DpConfig& config,
                         int trials, std::uint64_t seed);

}  // namespace fedauc

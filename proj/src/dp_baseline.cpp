#include "fedauc/dp_baseline.hpp"

#include <cmath>

#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

NoisyStats dp_client_stats(const CountVector& counts, const DpConfig& config,
                           std::mt19937_64& rng) {
    if (config.epsilon <= 0.0 || config.n_points < 2) {
        throw InvalidConfig("dp baseline needs epsilon > 0 and N >= 2");
    }
    if (counts.n_points() != config.n_points) {
        throw InvalidConfig("count vector does not match the configured grid");
    }
    const double scale = config.laplace_scale();
    const auto n = static_cast<std::size_t>(config.n_points);
    const double total_pos = static_cast<double>(counts.total_pos());
    const double total_neg = static_cast<double>(counts.total_neg());

    NoisyStats out;
    out.tp.resize(n);
    out.fp.resize(n);
    out.tn.resize(n);
    out.fn.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double tp = static_cast<double>(counts.tp[k]);
        double fp = static_cast<double>(counts.fp[k]);
        out.tp[k] = tp + laplace(rng, scale);
        out.fp[k] = fp + laplace(rng, scale);
        out.tn[k] = (total_neg - fp) + laplace(rng, scale);
        out.fn[k] = (total_pos - tp) + laplace(rng, scale);
    }
    return out;
}

double dp_aggregate_auc(const std::vector<NoisyStats>& parties) {
    if (parties.empty()) throw InvalidConfig("dp aggregation needs at least one party");
    const std::size_t n = parties.front().tp.size();
    std::vector<double> tp(n, 0.0), fp(n, 0.0), tn(n, 0.0), fn(n, 0.0);
    for (const NoisyStats& p : parties) {
        if (p.tp.size() != n) throw InvalidConfig("noisy stats disagree on grid size");
        for (std::size_t k = 0; k < n; ++k) {
            tp[k] += p.tp[k];
            fp[k] += p.fp[k];
            tn[k] += p.tn[k];
            fn[k] += p.fn[k];
        }
    }

    std::vector<double> tpr(n), fpr(n);
    for (std::size_t k = 0; k < n; ++k) {
        double pos = tp[k] + fn[k];
        double neg = fp[k] + tn[k];
        if (pos == 0.0 || neg == 0.0) {
            throw DegenerateLabels("noisy rate denominator is exactly zero");
        }
        tpr[k] = tp[k] / pos;
        fpr[k] = fp[k] / neg;
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        auc += (tpr[k] + tpr[k - 1]) * (fpr[k] - fpr[k - 1]) / 2.0;
    }
    return auc;
}

DpTrialSummary dp_trials(const std::vector<CountVector>& per_party, const DpConfig& config,
                         int trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidConfig("need at least one trial");
    DpTrialSummary summary;
    summary.values.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        auto rng = make_rng(seed, 0xd9u + static_cast<unsigned>(t));
        std::vector<NoisyStats> noisy;
        noisy.reserve(per_party.size());
        for (const CountVector& counts : per_party) {
            noisy.push_back(dp_client_stats(counts, config, rng));
        }
        summary.values.push_back(dp_aggregate_auc(noisy));
    }
    double sum = 0.0;
    for (double v : summary.values) sum += v;
    summary.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double ss = 0.0;
        for (double v : summary.values) ss += (v - summary.mean) * (v - summary.mean);
        summary.stddev = std::sqrt(ss / static_cast<double>(trials - 1));
    }
    return summary;
}

}  // namespace fedauc

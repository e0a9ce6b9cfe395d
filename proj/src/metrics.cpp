#include "fedauc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fedauc/errors.hpp"

namespace fedauc {

double exact_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw InvalidConfig("scores/labels length mismatch");
    std::vector<double> pos, neg;
    pos.reserve(scores.size());
    neg.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        (labels[i] ? pos : neg).push_back(scores[i]);
    }
    if (pos.empty() || neg.empty()) throw DegenerateLabels();

    // sweep scores ascending; ties between classes contribute half a pair
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    double pairs = 0.0;
    std::size_t below = 0;
    for (double p : pos) {
        while (below < neg.size() && neg[below] < p) ++below;
        std::size_t tied = 0;
        while (below + tied < neg.size() && neg[below + tied] == p) ++tied;
        pairs += static_cast<double>(below) + 0.5 * static_cast<double>(tied);
    }
    return pairs / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

DecisionGrid make_grid(int n_points) {
    if (n_points < 2) throw InvalidGrid("decision grid needs at least 2 points");
    DecisionGrid grid;
    grid.thresholds.resize(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        grid.thresholds[static_cast<std::size_t>(k)] =
            static_cast<double>(n_points - 1 - k) / static_cast<double>(n_points - 1);
    }
    return grid;
}

CountVector local_counts(const LocalDataset& dataset, const DecisionGrid& grid) {
    const int n = grid.n_points();
    if (n < 2) throw InvalidGrid("decision grid needs at least 2 points");
    std::vector<double> pos, neg;
    for (const Sample& s : dataset.samples) {
        (s.label ? pos : neg).push_back(s.score);
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());

    CountVector out;
    out.tp.resize(static_cast<std::size_t>(n));
    out.fp.resize(static_cast<std::size_t>(n));
    for (int k = 0; k + 1 < n; ++k) {
        double thr = grid.thresholds[static_cast<std::size_t>(k)];
        out.tp[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(
            pos.end() - std::upper_bound(pos.begin(), pos.end(), thr));
        out.fp[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(
            neg.end() - std::upper_bound(neg.begin(), neg.end(), thr));
    }
    out.tp.back() = static_cast<std::int64_t>(pos.size());
    out.fp.back() = static_cast<std::int64_t>(neg.size());
    return out;
}

PairVectors pair_transform(const CountVector& counts) {
    const int n = counts.n_points();
    PairVectors out;
    out.t.reserve(static_cast<std::size_t>(n - 1));
    out.f.reserve(static_cast<std::size_t>(n - 1));
    for (int k = 0; k + 1 < n; ++k) {
        auto i = static_cast<std::size_t>(k);
        std::int64_t fd = counts.fp[i + 1] - counts.fp[i];
        if (fd < 0) throw NonMonotone("fp counts decrease at index " + std::to_string(k));
        out.t.push_back(counts.tp[i + 1] + counts.tp[i]);
        out.f.push_back(fd);
    }
    return out;
}

double trapezoid_auc(const CountVector& global_counts) {
    if (global_counts.total_pos() <= 0 || global_counts.total_neg() <= 0) {
        throw DegenerateLabels("trapezoid_auc needs positive class totals");
    }
    PairVectors pv = pair_transform(global_counts);
    std::int64_t num = 0;
    for (std::size_t k = 0; k < pv.t.size(); ++k) num += pv.t[k] * pv.f[k];
    double denom = 2.0 * static_cast<double>(global_counts.total_pos()) *
                   static_cast<double>(global_counts.total_neg());
    return static_cast<double>(num) / denom;
}

CountVector sum_counts(const std::vector<CountVector>& per_party) {
    if (per_party.empty()) return {};
    CountVector out = per_party.front();
    for (std::size_t m = 1; m < per_party.size(); ++m) {
        if (per_party[m].n_points() != out.n_points()) {
            throw InvalidConfig("count vectors disagree on grid size");
        }
        for (std::size_t k = 0; k < out.tp.size(); ++k) {
            out.tp[k] += per_party[m].tp[k];
            out.fp[k] += per_party[m].fp[k];
        }
    }
    return out;
}

std::vector<std::pair<double, double>> roc_points(const CountVector& counts) {
    std::vector<std::pair<double, double>> pts;
    double p = static_cast<double>(counts.total_pos());
    double n = static_cast<double>(counts.total_neg());
    pts.reserve(counts.tp.size());
    for (std::size_t k = 0; k < counts.tp.size(); ++k) {
        pts.emplace_back(n > 0 ? static_cast<double>(counts.fp[k]) / n : 0.0,
                         p > 0 ? static_cast<double>(counts.tp[k]) / p : 0.0);
    }
    return pts;
}

}  // namespace fedauc

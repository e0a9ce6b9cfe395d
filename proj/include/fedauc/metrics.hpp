#pragma once

#include <cstdint>
#include <vector>

namespace fedauc {

struct Sample {
    double score;  // clamped to [0,1] on ingestion
    int label;     // 0 or 1
};

struct LocalDataset {
    std::vector<Sample> samples;
    int party_id = 0;
};

/// Descending thresholds over [0,1]; thresholds[0] == 1.0, back() == 0.0.
struct DecisionGrid {
    std::vector<double> thresholds;
    int n_points() const { return static_cast<int>(thresholds.size()); }
};

/// Per-decision-point true/false positive counts. Entries are non-decreasing
/// in the index and the last entry holds the class total.
struct CountVector {
    std::vector<std::int64_t> tp;
    std::vector<std::int64_t> fp;

    int n_points() const { return static_cast<int>(tp.size()); }
    std::int64_t total_pos() const { return tp.empty() ? 0 : tp.back(); }
    std::int64_t total_neg() const { return fp.empty() ? 0 : fp.back(); }
};

/// Adjacent-pair vectors t[k] = tp[k+1]+tp[k], f[k] = fp[k+1]-fp[k].
struct PairVectors {
    std::vector<std::int64_t> t;
    std::vector<std::int64_t> f;
};

/// Exact ROC-AUC (Mann-Whitney with ties counted 1/2) in O(n log n).
/// Throws DegenerateLabels unless both classes are present.
double exact_auc(const std::vector<double>& scores, const std::vector<int>& labels);

/// Uniform descending grid: thresholds[k] = (N-1-k)/(N-1).
DecisionGrid make_grid(int n_points);

/// Counts with strict `score > threshold` for k < N-1; index N-1 holds the
/// class totals by definition.
CountVector local_counts(const LocalDataset& dataset, const DecisionGrid& grid);

PairVectors pair_transform(const CountVector& counts);

/// Trapezoidal AUC over global counts:
///   sum_k t[k]*f[k] / (2 * tp[N-1] * fp[N-1]).
double trapezoid_auc(const CountVector& global_counts);

/// Element-wise sum; the homomorphic aggregation computes exactly this.
CountVector sum_counts(const std::vector<CountVector>& per_party);

/// (FPR, TPR) points of the counts, origin first. Convenience output only.
std::vector<std::pair<double, double>> roc_points(const CountVector& counts);

}  // namespace fedauc

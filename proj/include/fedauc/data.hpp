#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedauc/metrics.hpp"

namespace fedauc {

struct ScoreData {
    std::vector<double> scores;
    std::vector<int> labels;
    long clamped = 0;  // rows whose score was pulled into [0,1] on ingestion
};

/// Reads a `score,label` CSV. A literal `score,label` header line is allowed;
/// any other non-numeric row raises ParseError with its line number. Scores
/// are clamped to [0,1] (counted in `clamped`), labels must be 0 or 1.
ScoreData ingest(const std::string& path);

/// Synthetic scores: positives ~ N(0.5 + separation/2, 0.15), negatives
/// ~ N(0.5 - separation/2, 0.15), both clamped to [0,1]; labels are
/// Bernoulli(pos_fraction). Deterministic under the seed.
ScoreData synth(long count, double pos_fraction, double separation, std::uint64_t seed);

enum class PartitionMode { uniform_random, contiguous, label_skew };

PartitionMode partition_mode_from_string(const std::string& name);
std::string to_string(PartitionMode mode);

struct PartitionSpec {
    PartitionMode mode = PartitionMode::uniform_random;
    double alpha = 1.0;  // label_skew concentration
    std::uint64_t seed = 0;
};

/// Disjoint cover of the samples across n_parties non-empty local datasets.
std::vector<LocalDataset> partition(const ScoreData& data, int n_parties,
                                    const PartitionSpec& spec);

void write_score_csv(const std::string& path, const ScoreData& data);

}  // namespace fedauc

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fedauc/malicious.hpp"

namespace fedauc {

enum class AttackKind {
    none,                   // honest pass-through, for harness calibration
    reorder_slots,          // rotate the packed T shares, breaking slot pairing
    drop_party,             // omit one submission from both runs
    inject_ciphertext,      // add a fresh encryption onto the aggregated T
    scale_result,           // scale the blinded numerator in run 1 only
    cross_run_replay,       // replay run-1 output as the run-2 output
    selective_slot_tamper,  // add a constant onto chosen T share slots
};

AttackKind attack_kind_from_string(const std::string& name);
std::string to_string(AttackKind kind);
std::vector<AttackKind> all_attack_kinds();  // the six real attacks, no `none`

/// A deterministic transformation of the honest aggregator's behaviour.
/// Strategies only touch ciphertext-level messages; none of them require the
/// secret key or any plaintext statistic.
struct AttackStrategy {
    AttackKind kind = AttackKind::none;
    double scale_factor = 1.01;  // scale_result
    int rotation = 1;            // reorder_slots
    int target_party = 0;        // drop_party
    double delta = 5000.0;       // inject_ciphertext / selective_slot_tamper
    /// selective_slot_tamper targets; empty means 16 slots spread evenly
    /// across the packed width (a single slot can land on a share group whose
    /// replicated co-factor is zero, leaving the sums untouched)
    std::vector<std::uint32_t> slots;

    /// Rejects parameter choices that degenerate to honest behaviour.
    void validate() const;
};

struct DetectionReport {
    AttackKind strategy = AttackKind::none;
    int trials = 0;
    int detected = 0;
    /// Accepted runs whose reported AUC differs from the honest value; the
    /// soundness claim is that this stays zero.
    int soundness_violations = 0;
    int n_points = 0;
    int split_count = 0;
    int n_parties = 0;

    double detection_rate() const {
        return trials == 0 ? 0.0 : static_cast<double>(detected) / trials;
    }
};

/// Probability that a malicious aggregator guesses the share grouping in both
/// runs: (S! * (S*N - S)! / (S*N)!)^2, evaluated in log space.
double detection_evasion_probability(int n_points, int split_count);
double log2_detection_evasion_probability(int n_points, int split_count);

/// 2^-(bits_per_value * values); the multiplier-guessing bound.
double multiplier_guess_probability(int bits_per_value, int values);

struct AttackExperimentConfig {
    int n_parties = 3;
    int n_points = 100;
    int split_count = 4;
    int samples = 120;
    std::uint64_t seed = 1;
    BackendKind backend = BackendKind::exact;
};

/// Runs `run_verified` with the strategy spliced into the aggregator and
/// counts rejections; accepted-but-wrong results are recorded separately.
DetectionReport run_attack_experiment(const AttackStrategy& strategy,
                                      const AttackExperimentConfig& config, int trials);

/// The optimal slot-guessing adversary on a tiny configuration: guesses the
/// permuted share group of threshold 0 in both runs and scales it. Returns
/// the number of undetected-and-wrong outcomes over `trials`; the rate should
/// match detection_evasion_probability(N, S).
int run_slot_guessing_experiment(const AttackExperimentConfig& config, int trials);

}  // namespace fedauc

#include "fedauc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

namespace {

class StrategyBehavior final : public AggregatorBehavior {
public:
    StrategyBehavior(AttackStrategy strategy, const PublicKey& pk, std::uint32_t packed_width,
                     std::uint64_t seed)
        : strategy_(std::move(strategy)), pk_(pk), width_(packed_width),
          rng_(make_rng(seed, 0xadu)) {}

    std::vector<MaskedSubmission> intercept_submissions(HeBackend& backend,
                                                        std::vector<MaskedSubmission> subs,
                                                        int run_index) override {
        (void)run_index;
        switch (strategy_.kind) {
            case AttackKind::reorder_slots:
                for (auto& sub : subs) {
                    sub.enc_t_all = CiphertextMalleability::rotate(sub.enc_t_all,
                                                                   strategy_.rotation, width_);
                }
                return subs;
            case AttackKind::drop_party: {
                std::size_t victim =
                    static_cast<std::size_t>(strategy_.target_party) % subs.size();
                subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(victim));
                return subs;
            }
            case AttackKind::inject_ciphertext: {
                std::vector<double> forged(width_, strategy_.delta);
                subs.front().enc_t_all =
                    backend.add_ct(subs.front().enc_t_all, backend.encrypt(pk_, forged));
                return subs;
            }
            case AttackKind::selective_slot_tamper: {
                std::vector<std::uint32_t> slots;
                if (strategy_.slots.empty()) {
                    std::uint32_t spread = std::max(1u, width_ / 16);
                    for (std::uint32_t s = 0; s < width_; s += spread) slots.push_back(s);
                } else {
                    for (std::uint32_t s : strategy_.slots) slots.push_back(s % width_);
                }
                subs.front().enc_t_all = CiphertextMalleability::add_to_slots(
                    subs.front().enc_t_all, slots, strategy_.delta);
                return subs;
            }
            default:
                return subs;
        }
    }

    RunOutput intercept_output(HeBackend& backend, RunOutput output, int run_index) override {
        (void)backend;
        switch (strategy_.kind) {
            case AttackKind::scale_result:
                if (run_index == 0) {
                    output.enc_blinded_num = CiphertextMalleability::scale(
                        output.enc_blinded_num, strategy_.scale_factor);
                }
                return output;
            case AttackKind::cross_run_replay:
                if (run_index == 0) {
                    replayed_ = output;
                    return output;
                }
                return *replayed_;
            default:
                return output;
        }
    }

private:
    AttackStrategy strategy_;
    PublicKey pk_;
    std::uint32_t width_;
    std::mt19937_64 rng_;
    std::optional<RunOutput> replayed_;
};

// Scales the T slots it believes hold threshold group 0's shares; evades
// detection exactly when it guesses the permuted group in both runs.
class SlotGuessingBehavior final : public AggregatorBehavior {
public:
    SlotGuessingBehavior(int n_points, int split_count, double factor, std::uint64_t seed)
        : n_points_(n_points), split_count_(split_count), factor_(factor),
          rng_(make_rng(seed, 0x9355)) {}

    std::vector<MaskedSubmission> intercept_submissions(HeBackend& backend,
                                                        std::vector<MaskedSubmission> subs,
                                                        int run_index) override {
        (void)backend;
        (void)run_index;
        std::vector<std::uint32_t> all(
            static_cast<std::size_t>(n_points_) * static_cast<std::size_t>(split_count_));
        std::iota(all.begin(), all.end(), 0u);
        std::shuffle(all.begin(), all.end(), rng_);
        std::vector<std::uint32_t> guess(all.begin(), all.begin() + split_count_);
        for (auto& sub : subs) {
            sub.enc_t_all = CiphertextMalleability::scale_slots(sub.enc_t_all, guess, factor_);
        }
        return subs;
    }

private:
    int n_points_;
    int split_count_;
    double factor_;
    std::mt19937_64 rng_;
};

std::vector<LocalDataset> harness_datasets(const AttackExperimentConfig& config) {
    auto rng = make_rng(config.seed, 0xda7a);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::uniform_int_distribution<int> label(0, 1);
    std::vector<LocalDataset> datasets(static_cast<std::size_t>(config.n_parties));
    for (int m = 0; m < config.n_parties; ++m) {
        datasets[static_cast<std::size_t>(m)].party_id = m;
    }
    for (int i = 0; i < config.samples; ++i) {
        auto m = static_cast<std::size_t>(i % config.n_parties);
        // force both classes to exist globally
        int lbl = i < 2 ? i : label(rng);
        datasets[m].samples.push_back({score(rng), lbl});
    }
    return datasets;
}

struct Harness {
    std::unique_ptr<HeBackend> backend;
    KeyPair keys;
    std::vector<LocalDataset> datasets;
    DecisionGrid grid;
    double honest_auc = 0.0;
    double tolerance = 0.0;
};

Harness make_harness(const AttackExperimentConfig& config) {
    Harness h;
    h.backend = make_backend(config.backend, HeParams{}, config.seed);
    h.keys = h.backend->keygen(mix_seed(config.seed, 0x6b));
    h.datasets = harness_datasets(config);
    h.grid = make_grid(config.n_points);
    MaliciousConfig mc{config.split_count, mix_seed(config.seed, 0xbead), -1.0};
    VerifiedAuc honest = run_verified(*h.backend, h.datasets, h.grid, h.keys, mc);
    if (!honest.accepted) throw InvalidConfig("honest baseline run was rejected");
    h.honest_auc = honest.auc;
    h.tolerance = honest.tolerance;
    return h;
}

}  // namespace

AttackKind attack_kind_from_string(const std::string& name) {
    if (name == "none") return AttackKind::none;
    if (name == "reorder_slots") return AttackKind::reorder_slots;
    if (name == "drop_party") return AttackKind::drop_party;
    if (name == "inject_ciphertext") return AttackKind::inject_ciphertext;
    if (name == "scale_result") return AttackKind::scale_result;
    if (name == "cross_run_replay") return AttackKind::cross_run_replay;
    if (name == "selective_slot_tamper") return AttackKind::selective_slot_tamper;
    throw InvalidConfig("unknown attack strategy: " + name);
}

std::string to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::none: return "none";
        case AttackKind::reorder_slots: return "reorder_slots";
        case AttackKind::drop_party: return "drop_party";
        case AttackKind::inject_ciphertext: return "inject_ciphertext";
        case AttackKind::scale_result: return "scale_result";
        case AttackKind::cross_run_replay: return "cross_run_replay";
        case AttackKind::selective_slot_tamper: return "selective_slot_tamper";
    }
    return "unknown";
}

std::vector<AttackKind> all_attack_kinds() {
    return {AttackKind::reorder_slots,   AttackKind::drop_party,
            AttackKind::inject_ciphertext, AttackKind::scale_result,
            AttackKind::cross_run_replay,  AttackKind::selective_slot_tamper};
}

void AttackStrategy::validate() const {
    switch (kind) {
        case AttackKind::reorder_slots:
            if (rotation == 0) throw InvalidConfig("reorder_slots needs a nonzero rotation");
            break;
        case AttackKind::scale_result:
            if (scale_factor == 1.0) throw InvalidConfig("scale_result needs a factor != 1");
            break;
        case AttackKind::inject_ciphertext:
        case AttackKind::selective_slot_tamper:
            if (delta == 0.0) throw InvalidConfig("tampering needs a nonzero delta");
            break;
        default:
            break;
    }
}

double log2_detection_evasion_probability(int n_points, int split_count) {
    if (n_points < 1 || split_count < 1) throw InvalidConfig("need N >= 1 and S >= 1");
    double sn = static_cast<double>(split_count) * n_points;
    double s = static_cast<double>(split_count);
    double log_one_run = std::lgamma(s + 1.0) + std::lgamma(sn - s + 1.0) - std::lgamma(sn + 1.0);
    return 2.0 * log_one_run / std::log(2.0);
}

double detection_evasion_probability(int n_points, int split_count) {
    return std::exp2(log2_detection_evasion_probability(n_points, split_count));
}

double multiplier_guess_probability(int bits_per_value, int values) {
    if (bits_per_value <= 0 || values <= 0) throw InvalidConfig("need positive arguments");
    return std::exp2(-static_cast<double>(bits_per_value) * values);
}

DetectionReport run_attack_experiment(const AttackStrategy& strategy,
                                      const AttackExperimentConfig& config, int trials) {
    if (trials < 1) throw InvalidConfig("need at least one trial");
    strategy.validate();
    Harness h = make_harness(config);
    const std::uint32_t width = static_cast<std::uint32_t>(config.n_points) *
                                static_cast<std::uint32_t>(config.split_count);

    DetectionReport report;
    report.strategy = strategy.kind;
    report.trials = trials;
    report.n_points = config.n_points;
    report.split_count = config.split_count;
    report.n_parties = config.n_parties;

    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t trial_seed = mix_seed(config.seed, 0x7000u + static_cast<unsigned>(trial));
        StrategyBehavior behavior(strategy, h.keys.public_key, width, trial_seed);
        MaliciousConfig mc{config.split_count, trial_seed, -1.0};
        try {
            VerifiedAuc verdict = run_verified(*h.backend, h.datasets, h.grid, h.keys, mc,
                                               &behavior);
            if (!verdict.accepted) {
                report.detected += 1;
            } else if (std::fabs(verdict.auc - h.honest_auc) > h.tolerance) {
                report.soundness_violations += 1;
            }
        } catch (const Error&) {
            // garbage decryptions (e.g. broken masks) surface as protocol
            // errors; the parties notice, so this counts as detected
            report.detected += 1;
        }
    }
    return report;
}

int run_slot_guessing_experiment(const AttackExperimentConfig& config, int trials) {
    Harness h = make_harness(config);
    int evasions = 0;
    for (int trial = 0; trial < trials; ++trial) {
        std::uint64_t trial_seed = mix_seed(config.seed, 0x8000u + static_cast<unsigned>(trial));
        SlotGuessingBehavior behavior(config.n_points, config.split_count, 3.0, trial_seed);
        MaliciousConfig mc{config.split_count, trial_seed, -1.0};
        try {
            VerifiedAuc verdict = run_verified(*h.backend, h.datasets, h.grid, h.keys, mc,
                                               &behavior);
            if (verdict.accepted && std::fabs(verdict.auc - h.honest_auc) > h.tolerance) {
                evasions += 1;
            }
        } catch (const Error&) {
            // detected
        }
    }
    return evasions;
}

}  // namespace fedauc

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fedauc/bus.hpp"
#include "fedauc/data.hpp"
#include "fedauc/dp_baseline.hpp"
#include "fedauc/he.hpp"
#include "fedauc/malicious.hpp"

namespace fedauc {

enum class Protocol { semi_honest, malicious, dp_baseline, exact_oracle };

Protocol protocol_from_string(const std::string& name);
std::string to_string(Protocol protocol);

struct DataSpec {
    std::string path;            // csv input; empty means synthetic
    long synth_count = 10000;
    double pos_fraction = 0.5;
    double separation = 0.6;
};

struct ScenarioConfig {
    Protocol protocol = Protocol::semi_honest;
    BackendKind backend = BackendKind::exact;
    int parties = 2;
    int decision_points = 100;
    int splits = 4;
    double epsilon = 1.0;
    int dp_trial_count = 1;
    DataSpec data;
    PartitionSpec partition;
    std::uint64_t seed = 1;
    double tolerance = -1.0;  // negative = protocol default
    double noise_std = 1e-9;
};

struct PartyRegistry {
    int n_parties = 0;
    std::string aggregator = "aggregator";

    std::vector<std::string> party_names() const;
};

/// Key generation by a randomly designated party; distribution is a direct
/// handoff stub, logged as out of scope for security. The aggregator ends up
/// with the public key only.
struct TrustedSetup {
    KeyPair keypair;
    int designated_party = 0;
};

TrustedSetup trusted_setup(const PartyRegistry& registry, HeBackend& backend, std::uint64_t seed,
                           Bus* bus);

struct CostReport {
    int parties = 0;
    int decision_points = 0;
    int splits = 0;
    std::string protocol;
    std::string backend;
    std::size_t client_bytes = 0;       // per client, sent + received (uniform)
    std::size_t server_bytes = 0;       // aggregator, sent + received
    int client_ciphertexts = 0;         // per client, sent + received
    int server_ciphertexts = 0;
    PhaseTimings phases;
};

struct ScenarioResult {
    std::string scenario_id;
    ScenarioConfig config;
    double auc = 0.0;
    double auc_prime = std::numeric_limits<double>::quiet_NaN();
    bool accepted = true;
    double dp_stddev = std::numeric_limits<double>::quiet_NaN();
    CostReport cost;
    std::vector<TranscriptEntry> transcript;
    std::string error;  // nonempty if the scenario failed (sweep rows)
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Runs every config, capturing per-row failures instead of aborting.
std::vector<ScenarioResult> sweep(const std::vector<ScenarioConfig>& configs);

/// Key-value scenario file: `key = value` lines, `#` comments.
ScenarioConfig parse_scenario_config(std::istream& in);
void apply_config_entry(ScenarioConfig& config, const std::string& key, const std::string& value);

std::string result_csv_header();
std::string result_csv_row(const ScenarioResult& result);
std::string result_json_row(const ScenarioResult& result);
std::string transcript_jsonl(const std::vector<TranscriptEntry>& transcript);

}  // namespace fedauc

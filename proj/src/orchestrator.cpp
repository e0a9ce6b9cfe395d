#include "fedauc/orchestrator.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"
#include "fedauc/semihonest.hpp"

namespace fedauc {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point start) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

ScoreData load_data(const ScenarioConfig& config) {
    if (!config.data.path.empty()) return ingest(config.data.path);
    return synth(config.data.synth_count, config.data.pos_fraction, config.data.separation,
                 mix_seed(config.seed, 0xda7a));
}

std::string make_scenario_id(const ScenarioConfig& c) {
    std::ostringstream id;
    id << to_string(c.protocol) << "-" << to_string(c.backend) << "-M" << c.parties << "-N"
       << c.decision_points << "-S" << c.splits << "-seed" << c.seed;
    return id.str();
}

CostReport build_cost_report(const ScenarioConfig& config, const Bus& bus,
                             const PhaseTimings& phases) {
    CostReport cost;
    cost.parties = config.parties;
    cost.decision_points = config.decision_points;
    cost.splits = config.splits;
    cost.protocol = to_string(config.protocol);
    cost.backend = to_string(config.backend);
    cost.phases = phases;

    bool first_party = true;
    for (const auto& [role, traffic] : bus.traffic()) {
        if (role == "aggregator") {
            cost.server_bytes = traffic.bytes_sent + traffic.bytes_received;
            cost.server_ciphertexts = traffic.ciphertexts_sent + traffic.ciphertexts_received;
        } else if (role.rfind("party_", 0) == 0) {
            std::size_t bytes = traffic.bytes_sent + traffic.bytes_received;
            int cts = traffic.ciphertexts_sent + traffic.ciphertexts_received;
            if (first_party) {
                cost.client_bytes = bytes;
                cost.client_ciphertexts = cts;
                first_party = false;
            } else if (bytes != cost.client_bytes) {
                throw InvalidConfig("client traffic is not uniform across parties");
            }
        }
    }
    return cost;
}

}  // namespace

Protocol protocol_from_string(const std::string& name) {
    if (name == "semi_honest") return Protocol::semi_honest;
    if (name == "malicious") return Protocol::malicious;
    if (name == "dp_baseline") return Protocol::dp_baseline;
    if (name == "exact_oracle") return Protocol::exact_oracle;
    throw InvalidConfig("unknown protocol: " + name);
}

std::string to_string(Protocol protocol) {
    switch (protocol) {
        case Protocol::semi_honest: return "semi_honest";
        case Protocol::malicious: return "malicious";
        case Protocol::dp_baseline: return "dp_baseline";
        case Protocol::exact_oracle: return "exact_oracle";
    }
    return "unknown";
}

std::vector<std::string> PartyRegistry::party_names() const {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n_parties));
    for (int m = 0; m < n_parties; ++m) names.push_back("party_" + std::to_string(m));
    return names;
}

TrustedSetup trusted_setup(const PartyRegistry& registry, HeBackend& backend, std::uint64_t seed,
                           Bus* bus) {
    if (registry.n_parties < 2) throw InvalidConfig("setup needs at least 2 parties");
    auto rng = make_rng(seed, 0x5e7);
    std::uniform_int_distribution<int> pick(0, registry.n_parties - 1);
    TrustedSetup setup;
    setup.designated_party = pick(rng);
    setup.keypair = backend.keygen(mix_seed(seed, 0x6b6579));
    if (bus != nullptr) {
        std::string designated = "party_" + std::to_string(setup.designated_party);
        bus->note(designated, registry.aggregator, "setup_public_key", "SETUP-OUT-OF-SCOPE");
        for (const std::string& party : registry.party_names()) {
            if (party == designated) continue;
            bus->note(designated, party, "setup_private_key", "SETUP-OUT-OF-SCOPE");
        }
    }
    return setup;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    if (config.parties < 2) throw InvalidConfig("scenario needs at least 2 parties");
    if (config.decision_points < 2) throw InvalidConfig("scenario needs at least 2 decision points");

    ScenarioResult result;
    result.scenario_id = make_scenario_id(config);
    result.config = config;

    ScoreData data = load_data(config);
    PartitionSpec part = config.partition;
    part.seed = mix_seed(config.seed, 0x9a47);
    std::vector<LocalDataset> datasets = partition(data, config.parties, part);
    DecisionGrid grid = make_grid(config.decision_points);

    Bus bus;
    PhaseTimings phases;

    switch (config.protocol) {
        case Protocol::exact_oracle: {
            auto t0 = clock_type::now();
            std::vector<CountVector> counts;
            counts.reserve(datasets.size());
            for (const auto& ds : datasets) counts.push_back(local_counts(ds, grid));
            phases.client_prep_ms = ms_since(t0);
            t0 = clock_type::now();
            result.auc = trapezoid_auc(sum_counts(counts));
            phases.finalize_ms = ms_since(t0);
            break;
        }
        case Protocol::dp_baseline: {
            auto t0 = clock_type::now();
            std::vector<CountVector> counts;
            counts.reserve(datasets.size());
            for (const auto& ds : datasets) counts.push_back(local_counts(ds, grid));
            phases.client_prep_ms = ms_since(t0);
            t0 = clock_type::now();
            DpConfig dp{config.epsilon, config.decision_points};
            DpTrialSummary summary =
                dp_trials(counts, dp, config.dp_trial_count, mix_seed(config.seed, 0xd9));
            result.auc = summary.mean;
            result.dp_stddev = summary.stddev;
            phases.finalize_ms = ms_since(t0);
            break;
        }
        case Protocol::semi_honest: {
            HeParams params;
            if (config.backend == BackendKind::noise_model) params.noise_std = config.noise_std;
            auto backend = make_backend(config.backend, params, config.seed);
            PartyRegistry registry{config.parties, "aggregator"};
            TrustedSetup setup = trusted_setup(registry, *backend, config.seed, &bus);
            result.auc = run_semi_honest(*backend, datasets, grid, setup.keypair, config.seed,
                                         &bus, &phases);
            break;
        }
        case Protocol::malicious: {
            HeParams params;
            if (config.backend == BackendKind::noise_model) params.noise_std = config.noise_std;
            auto backend = make_backend(config.backend, params, config.seed);
            PartyRegistry registry{config.parties, "aggregator"};
            TrustedSetup setup = trusted_setup(registry, *backend, config.seed, &bus);
            MaliciousConfig mc{config.splits, config.seed, config.tolerance};
            VerifiedAuc verdict = run_verified(*backend, datasets, grid, setup.keypair, mc,
                                               nullptr, &bus, &phases);
            result.auc = verdict.auc;
            result.auc_prime = verdict.auc_prime;
            result.accepted = verdict.accepted;
            break;
        }
    }

    result.cost = build_cost_report(config, bus, phases);
    result.transcript = bus.transcript();
    return result;
}

std::vector<ScenarioResult> sweep(const std::vector<ScenarioConfig>& configs) {
    if (configs.empty()) throw InvalidConfig("sweep needs at least one scenario");
    std::vector<ScenarioResult> rows;
    rows.reserve(configs.size());
    for (const ScenarioConfig& config : configs) {
        try {
            rows.push_back(run_scenario(config));
        } catch (const std::exception& e) {
            ScenarioResult failed;
            failed.scenario_id = make_scenario_id(config);
            failed.config = config;
            failed.accepted = false;
            failed.auc = std::numeric_limits<double>::quiet_NaN();
            failed.error = e.what();
            rows.push_back(std::move(failed));
        }
    }
    return rows;
}

void apply_config_entry(ScenarioConfig& config, const std::string& key, const std::string& value) try {
    if (key == "protocol") {
        config.protocol = protocol_from_string(value);
    } else if (key == "backend") {
        config.backend = backend_kind_from_string(value);
    } else if (key == "parties") {
        config.parties = std::stoi(value);
    } else if (key == "decision_points") {
        config.decision_points = std::stoi(value);
    } else if (key == "splits") {
        config.splits = std::stoi(value);
    } else if (key == "epsilon") {
        config.epsilon = std::stod(value);
    } else if (key == "dp_trials") {
        config.dp_trial_count = std::stoi(value);
    } else if (key == "data") {
        config.data.path = value;
    } else if (key == "synth") {
        config.data.synth_count = std::stol(value);
        config.data.path.clear();
    } else if (key == "pos_fraction") {
        config.data.pos_fraction = std::stod(value);
    } else if (key == "separation") {
        config.data.separation = std::stod(value);
    } else if (key == "partition") {
        config.partition.mode = partition_mode_from_string(value);
    } else if (key == "alpha") {
        config.partition.alpha = std::stod(value);
    } else if (key == "seed") {
        config.seed = std::stoull(value);
    } else if (key == "tolerance") {
        config.tolerance = std::stod(value);
    } else if (key == "noise_std") {
        config.noise_std = std::stod(value);
    } else {
        throw InvalidConfig("unknown scenario config key: " + key);
    }
} catch (const std::invalid_argument&) {
    throw InvalidConfig("bad value for " + key + ": " + value);
} catch (const std::out_of_range&) {
    throw InvalidConfig("bad value for " + key + ": " + value);
}

ScenarioConfig parse_scenario_config(std::istream& in) {
    ScenarioConfig config;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto begin = s.find_first_not_of(" \t\r");
            auto end = s.find_last_not_of(" \t\r");
            return begin == std::string::npos ? std::string{} : s.substr(begin, end - begin + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;
        apply_config_entry(config, key, value);
    }
    return config;
}

std::string result_csv_header() {
    return "scenario_id,protocol,backend,M,N,S,epsilon,auc,auc_prime,accepted,"
           "client_bytes,server_bytes,phase_ms_client_prep,phase_ms_aggregate,"
           "phase_ms_blind,phase_ms_finalize";
}

std::string result_csv_row(const ScenarioResult& r) {
    std::ostringstream row;
    row.precision(17);
    row << r.scenario_id << ',' << to_string(r.config.protocol) << ','
        << to_string(r.config.backend) << ',' << r.config.parties << ','
        << r.config.decision_points << ',' << r.config.splits << ',' << r.config.epsilon << ','
        << r.auc << ',' << r.auc_prime << ',' << (r.accepted ? 1 : 0) << ',' << r.cost.client_bytes
        << ',' << r.cost.server_bytes << ',' << r.cost.phases.client_prep_ms << ','
        << r.cost.phases.aggregate_ms << ',' << r.cost.phases.blind_ms << ','
        << r.cost.phases.finalize_ms;
    return row.str();
}

std::string result_json_row(const ScenarioResult& r) {
    nlohmann::json row;
    row["scenario_id"] = r.scenario_id;
    row["protocol"] = to_string(r.config.protocol);
    row["backend"] = to_string(r.config.backend);
    row["M"] = r.config.parties;
    row["N"] = r.config.decision_points;
    row["S"] = r.config.splits;
    row["epsilon"] = r.config.epsilon;
    row["auc"] = r.auc;
    if (std::isfinite(r.auc_prime)) row["auc_prime"] = r.auc_prime;
    row["accepted"] = r.accepted;
    if (std::isfinite(r.dp_stddev)) row["dp_stddev"] = r.dp_stddev;
    row["client_bytes"] = r.cost.client_bytes;
    row["server_bytes"] = r.cost.server_bytes;
    row["client_ciphertexts"] = r.cost.client_ciphertexts;
    row["server_ciphertexts"] = r.cost.server_ciphertexts;
    row["phase_ms"] = {{"client_prep", r.cost.phases.client_prep_ms},
                       {"aggregate", r.cost.phases.aggregate_ms},
                       {"blind", r.cost.phases.blind_ms},
                       {"finalize", r.cost.phases.finalize_ms}};
    if (!r.error.empty()) row["error"] = r.error;
    return row.dump();
}

std::string transcript_jsonl(const std::vector<TranscriptEntry>& transcript) {
    std::ostringstream out;
    for (const TranscriptEntry& entry : transcript) {
        nlohmann::json row;
        row["seq"] = entry.seq;
        row["sender"] = entry.sender;
        row["receiver"] = entry.receiver;
        row["kind"] = entry.kind;
        row["bytes"] = entry.bytes;
        row["ciphertexts"] = entry.ciphertexts;
        if (!entry.note.empty()) row["note"] = entry.note;
        out << row.dump() << '\n';
    }
    return out.str();
}

}  // namespace fedauc

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fedauc/adversary.hpp"
#include "fedauc/data.hpp"
#include "fedauc/errors.hpp"
#include "fedauc/orchestrator.hpp"

namespace {

using namespace fedauc;

struct CommonOpts {
    std::string protocol = "semi_honest";
    std::string backend = "exact";
    int parties = 2;
    int decision_points = 100;
    int splits = 4;
    double epsilon = 1.0;
    std::string data_path;
    long synth_count = 10000;
    double pos_fraction = 0.5;
    double separation = 0.6;
    std::string partition_mode = "uniform_random";
    double alpha = 1.0;
    std::uint64_t seed = 1;
    double tolerance = -1.0;
    double noise_std = 1e-9;
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string transcript_path;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_protocol = true) {
    if (with_protocol) {
        cmd->add_option("--protocol", opts.protocol,
                        "semi_honest | malicious | dp_baseline | exact_oracle");
    }
    cmd->add_option("--backend", opts.backend, "exact | noise");
    cmd->add_option("--parties", opts.parties, "number of input parties (M >= 2)");
    cmd->add_option("--decision-points", opts.decision_points, "grid size N");
    cmd->add_option("--splits", opts.splits, "additive share count S (malicious)");
    cmd->add_option("--epsilon", opts.epsilon, "DP budget (dp_baseline)");
    cmd->add_option("--data", opts.data_path, "score,label CSV input");
    cmd->add_option("--synth", opts.synth_count, "synthesize this many samples instead");
    cmd->add_option("--pos-fraction", opts.pos_fraction, "synthetic positive fraction");
    cmd->add_option("--separation", opts.separation, "synthetic class separation");
    cmd->add_option("--partition", opts.partition_mode,
                    "uniform_random | contiguous | label_skew");
    cmd->add_option("--alpha", opts.alpha, "label_skew concentration");
    cmd->add_option("--seed", opts.seed, "scenario seed (FEDAUC_SEED overrides)");
    cmd->add_option("--tolerance", opts.tolerance, "verification tolerance override");
    cmd->add_option("--noise-std", opts.noise_std, "noise backend slot noise");
    cmd->add_option("--config", opts.config_path, "key=value scenario file");
    cmd->add_option("--out", opts.out_path, "write result rows here");
    cmd->add_option("--format", opts.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--transcript", opts.transcript_path, "write transcript JSONL here");
}

ScenarioConfig to_config(const CommonOpts& opts, const CLI::App* cmd) {
    ScenarioConfig config;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw InvalidConfig("cannot open config file: " + opts.config_path);
        config = parse_scenario_config(in);
    }
    auto given = [&](const std::string& flag) {
        const auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--protocol")) config.protocol = protocol_from_string(opts.protocol);
    if (given("--backend")) config.backend = backend_kind_from_string(opts.backend);
    if (given("--parties")) config.parties = opts.parties;
    if (given("--decision-points")) config.decision_points = opts.decision_points;
    if (given("--splits")) config.splits = opts.splits;
    if (given("--epsilon")) config.epsilon = opts.epsilon;
    if (given("--data")) {
        config.data.path = opts.data_path;
    }
    if (given("--synth")) {
        config.data.synth_count = opts.synth_count;
        config.data.path.clear();
    }
    if (given("--pos-fraction")) config.data.pos_fraction = opts.pos_fraction;
    if (given("--separation")) config.data.separation = opts.separation;
    if (given("--partition")) config.partition.mode = partition_mode_from_string(opts.partition_mode);
    if (given("--alpha")) config.partition.alpha = opts.alpha;
    if (given("--seed")) config.seed = opts.seed;
    if (given("--tolerance")) config.tolerance = opts.tolerance;
    if (given("--noise-std")) config.noise_std = opts.noise_std;
    if (const char* env_seed = std::getenv("FEDAUC_SEED")) {
        config.seed = std::stoull(env_seed);
    }
    return config;
}

void write_rows(const CommonOpts& opts, const std::vector<ScenarioResult>& rows) {
    std::ostringstream body;
    if (opts.format == "csv") {
        body << result_csv_header() << '\n';
        for (const auto& row : rows) body << result_csv_row(row) << '\n';
    } else {
        for (const auto& row : rows) body << result_json_row(row) << '\n';
    }
    if (opts.out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(opts.out_path);
        if (!out) throw InvalidConfig("cannot write " + opts.out_path);
        out << body.str();
    }
}

void maybe_write_transcript(const CommonOpts& opts, const ScenarioResult& result) {
    if (opts.transcript_path.empty()) return;
    std::ofstream out(opts.transcript_path);
    if (!out) throw InvalidConfig("cannot write " + opts.transcript_path);
    out << transcript_jsonl(result.transcript);
}

int cmd_run(const CommonOpts& opts, const CLI::App* cmd) {
    ScenarioConfig config = to_config(opts, cmd);
    ScenarioResult result = run_scenario(config);
    std::cerr << "AUC: " << result.auc;
    if (config.protocol == Protocol::malicious) {
        std::cerr << "  AUC': " << result.auc_prime
                  << (result.accepted ? "  [verified]" : "  [VERIFICATION FAILED]");
    }
    std::cerr << '\n';
    write_rows(opts, {result});
    maybe_write_transcript(opts, result);
    return result.accepted ? 0 : 1;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(std::stoi(token));
    }
    return out;
}

int cmd_sweep(const CommonOpts& opts, const CLI::App* cmd, const std::string& parties_list,
              const std::string& points_list) {
    ScenarioConfig base = to_config(opts, cmd);
    std::vector<int> parties = parties_list.empty() ? std::vector<int>{base.parties}
                                                    : parse_int_list(parties_list);
    std::vector<int> points = points_list.empty() ? std::vector<int>{base.decision_points}
                                                  : parse_int_list(points_list);
    std::vector<ScenarioConfig> grid;
    for (int m : parties) {
        for (int n : points) {
            ScenarioConfig config = base;
            config.parties = m;
            config.decision_points = n;
            grid.push_back(config);
        }
    }
    std::vector<ScenarioResult> rows = sweep(grid);
    write_rows(opts, rows);
    int failures = 0;
    for (const auto& row : rows) failures += row.error.empty() ? 0 : 1;
    if (failures > 0) std::cerr << failures << " scenario(s) failed\n";
    return failures == 0 ? 0 : 1;
}

int cmd_attack(const CommonOpts& opts, const std::string& strategy_name, int trials) {
    AttackExperimentConfig config;
    config.n_parties = opts.parties < 2 ? 3 : opts.parties;
    config.n_points = opts.decision_points;
    config.split_count = opts.splits;
    config.samples = static_cast<int>(opts.synth_count < 4 ? 120 : opts.synth_count);
    config.seed = opts.seed;
    config.backend = backend_kind_from_string(opts.backend);

    std::vector<AttackKind> kinds = strategy_name == "all"
                                        ? all_attack_kinds()
                                        : std::vector<AttackKind>{
                                              attack_kind_from_string(strategy_name)};
    std::ostringstream body;
    bool json = opts.format == "json";
    if (!json) body << "strategy,trials,detected,detection_rate,soundness_violations\n";
    bool all_detected = true;
    for (AttackKind kind : kinds) {
        AttackStrategy strategy;
        strategy.kind = kind;
        DetectionReport report = run_attack_experiment(strategy, config, trials);
        int expected_detections = kind == AttackKind::none ? 0 : report.trials;
        all_detected = all_detected && report.detected == expected_detections &&
                       report.soundness_violations == 0;
        if (json) {
            nlohmann::json row;
            row["strategy"] = to_string(report.strategy);
            row["trials"] = report.trials;
            row["detected"] = report.detected;
            row["detection_rate"] = report.detection_rate();
            row["soundness_violations"] = report.soundness_violations;
            row["N"] = report.n_points;
            row["S"] = report.split_count;
            row["M"] = report.n_parties;
            body << row.dump() << '\n';
        } else {
            body << to_string(report.strategy) << ',' << report.trials << ',' << report.detected
                 << ',' << report.detection_rate() << ',' << report.soundness_violations << '\n';
        }
        std::cerr << to_string(report.strategy) << ": detected " << report.detected << "/"
                  << report.trials << "\n";
    }
    if (opts.out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(opts.out_path);
        if (!out) throw InvalidConfig("cannot write " + opts.out_path);
        out << body.str();
    }
    return all_detected ? 0 : 1;
}

int cmd_dp(const CommonOpts& opts, const CLI::App* cmd, int trials) {
    ScenarioConfig config = to_config(opts, cmd);
    config.protocol = Protocol::dp_baseline;
    config.dp_trial_count = trials;
    ScenarioResult result = run_scenario(config);
    std::cerr << "DP AUC mean: " << result.auc << "  std: " << result.dp_stddev << " ("
              << trials << " trials)\n";
    write_rows(opts, {result});
    return 0;
}

int cmd_gen(const CommonOpts& opts, const std::string& out_path) {
    ScoreData data = synth(opts.synth_count, opts.pos_fraction, opts.separation, opts.seed);
    write_score_csv(out_path, data);
    std::cerr << "wrote " << data.scores.size() << " samples to " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"federated ROC-AUC evaluation over homomorphic encryption"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* run = app.add_subcommand("run", "run one scenario");
    add_common_flags(run, opts);

    auto* sweep_cmd = app.add_subcommand("sweep", "run a config grid");
    std::string parties_list, points_list;
    add_common_flags(sweep_cmd, opts);
    sweep_cmd->add_option("--parties-list", parties_list, "comma list, e.g. 5,10,15");
    sweep_cmd->add_option("--decision-points-list", points_list, "comma list, e.g. 25,50,100");

    auto* attack = app.add_subcommand("attack", "malicious-aggregator detection experiments");
    std::string strategy = "all";
    int attack_trials = 1000;
    add_common_flags(attack, opts, false);
    attack->add_option("--strategy", strategy,
                       "reorder_slots | drop_party | inject_ciphertext | scale_result | "
                       "cross_run_replay | selective_slot_tamper | all");
    attack->add_option("--trials", attack_trials, "trials per strategy");

    auto* dp = app.add_subcommand("dp", "DP baseline trials");
    int dp_trials_count = 100;
    add_common_flags(dp, opts, false);
    dp->add_option("--trials", dp_trials_count, "noise trials");

    auto* gen = app.add_subcommand("gen", "write synthetic score,label CSV");
    std::string gen_out;
    gen->add_option("--count", opts.synth_count, "sample count");
    gen->add_option("--pos-fraction", opts.pos_fraction, "positive fraction");
    gen->add_option("--separation", opts.separation, "class separation");
    gen->add_option("--seed", opts.seed, "generator seed");
    gen->add_option("--out", gen_out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            if (opts.parties < 2) throw InvalidConfig("--parties must be >= 2");
            return cmd_run(opts, run);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(opts, sweep_cmd, parties_list, points_list);
        if (attack->parsed()) return cmd_attack(opts, strategy, attack_trials);
        if (dp->parsed()) return cmd_dp(opts, dp, dp_trials_count);
        if (gen->parsed()) return cmd_gen(opts, gen_out);
    } catch (const InvalidConfig& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

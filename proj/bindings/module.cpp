#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fedauc/adversary.hpp"
#include "fedauc/data.hpp"
#include "fedauc/dp_baseline.hpp"
#include "fedauc/metrics.hpp"
#include "fedauc/orchestrator.hpp"

namespace py = pybind11;
using namespace fedauc;

namespace {

LocalDataset to_dataset(const std::vector<double>& scores, const std::vector<int>& labels) {
    LocalDataset ds;
    ds.samples.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        ds.samples.push_back({scores[i], labels[i]});
    }
    return ds;
}

ScenarioConfig config_from_kwargs(const std::string& protocol, const std::string& backend,
                                  int parties, int decision_points, int splits, double epsilon,
                                  long synth_count, double pos_fraction, double separation,
                                  const std::string& data_path, std::uint64_t seed,
                                  int dp_trial_count) {
    ScenarioConfig config;
    config.protocol = protocol_from_string(protocol);
    config.backend = backend_kind_from_string(backend);
    config.parties = parties;
    config.decision_points = decision_points;
    config.splits = splits;
    config.epsilon = epsilon;
    config.dp_trial_count = dp_trial_count;
    config.data.synth_count = synth_count;
    config.data.pos_fraction = pos_fraction;
    config.data.separation = separation;
    config.data.path = data_path;
    config.seed = seed;
    return config;
}

py::dict result_to_dict(const ScenarioResult& result) {
    py::dict out;
    out["scenario_id"] = result.scenario_id;
    out["auc"] = result.auc;
    out["auc_prime"] = result.auc_prime;
    out["accepted"] = result.accepted;
    out["dp_stddev"] = result.dp_stddev;
    out["client_bytes"] = result.cost.client_bytes;
    out["server_bytes"] = result.cost.server_bytes;
    out["client_ciphertexts"] = result.cost.client_ciphertexts;
    out["server_ciphertexts"] = result.cost.server_ciphertexts;
    return out;
}

}  // namespace

PYBIND11_MODULE(_fedauc, m) {
    m.doc() = "federated ROC-AUC evaluation over homomorphic encryption";

    m.def("exact_auc", &exact_auc, py::arg("scores"), py::arg("labels"),
          "Exact Mann-Whitney ROC-AUC with ties counted 1/2.");

    m.def(
        "grid_thresholds",
        [](int n_points) { return make_grid(n_points).thresholds; },
        py::arg("n_points"), "Uniform descending decision thresholds over [0,1].");

    m.def(
        "local_counts",
        [](const std::vector<double>& scores, const std::vector<int>& labels, int n_points) {
            CountVector counts =
                fedauc::local_counts(to_dataset(scores, labels), make_grid(n_points));
            return py::make_tuple(counts.tp, counts.fp);
        },
        py::arg("scores"), py::arg("labels"), py::arg("n_points"),
        "Per-threshold (tp, fp) counts; the last entry holds the class totals.");

    m.def(
        "trapezoid_auc",
        [](const std::vector<std::int64_t>& tp, const std::vector<std::int64_t>& fp) {
            CountVector counts;
            counts.tp = tp;
            counts.fp = fp;
            return trapezoid_auc(counts);
        },
        py::arg("tp"), py::arg("fp"), "Trapezoidal AUC over global counts.");

    m.def(
        "synth",
        [](long count, double pos_fraction, double separation, std::uint64_t seed) {
            ScoreData data = synth(count, pos_fraction, separation, seed);
            return py::make_tuple(data.scores, data.labels);
        },
        py::arg("count"), py::arg("pos_fraction") = 0.5, py::arg("separation") = 0.6,
        py::arg("seed") = 1, "Deterministic synthetic (scores, labels).");

    m.def(
        "run_scenario",
        [](const std::string& protocol, const std::string& backend, int parties,
           int decision_points, int splits, double epsilon, long synth_count, double pos_fraction,
           double separation, const std::string& data, std::uint64_t seed, int dp_trials) {
            return result_to_dict(run_scenario(config_from_kwargs(
                protocol, backend, parties, decision_points, splits, epsilon, synth_count,
                pos_fraction, separation, data, seed, dp_trials)));
        },
        py::arg("protocol") = "semi_honest", py::arg("backend") = "exact", py::arg("parties") = 3,
        py::arg("decision_points") = 100, py::arg("splits") = 4, py::arg("epsilon") = 1.0,
        py::arg("synth_count") = 10000L, py::arg("pos_fraction") = 0.5,
        py::arg("separation") = 0.6, py::arg("data") = std::string{}, py::arg("seed") = 1,
        py::arg("dp_trials") = 1, "Run one scenario and return its result row as a dict.");

    m.def("detection_evasion_probability", &detection_evasion_probability, py::arg("n_points"),
          py::arg("split_count"));
    m.def("log2_detection_evasion_probability", &log2_detection_evasion_probability,
          py::arg("n_points"), py::arg("split_count"));
    m.def("multiplier_guess_probability", &multiplier_guess_probability,
          py::arg("bits_per_value"), py::arg("values"));

    m.def(
        "run_attack",
        [](const std::string& strategy, int trials, int parties, int decision_points, int splits,
           int samples, std::uint64_t seed) {
            AttackStrategy attack;
            attack.kind = attack_kind_from_string(strategy);
            AttackExperimentConfig config;
            config.n_parties = parties;
            config.n_points = decision_points;
            config.split_count = splits;
            config.samples = samples;
            config.seed = seed;
            DetectionReport report = run_attack_experiment(attack, config, trials);
            py::dict out;
            out["strategy"] = to_string(report.strategy);
            out["trials"] = report.trials;
            out["detected"] = report.detected;
            out["detection_rate"] = report.detection_rate();
            out["soundness_violations"] = report.soundness_violations;
            return out;
        },
        py::arg("strategy"), py::arg("trials") = 100, py::arg("parties") = 3,
        py::arg("decision_points") = 20, py::arg("splits") = 3, py::arg("samples") = 120,
        py::arg("seed") = 1, "Detection experiment for one attack strategy.");

    m.def(
        "dp_trials",
        [](long synth_count, double epsilon, int n_points, int parties, int trials,
           std::uint64_t seed) {
            ScoreData data = synth(synth_count, 0.5, 0.6, seed);
            auto parts = partition(data, parties, PartitionSpec{PartitionMode::uniform_random,
                                                                1.0, seed});
            std::vector<CountVector> counts;
            DecisionGrid grid = make_grid(n_points);
            for (const auto& p : parts) counts.push_back(fedauc::local_counts(p, grid));
            DpTrialSummary summary = dp_trials(counts, DpConfig{epsilon, n_points}, trials, seed);
            return py::make_tuple(summary.mean, summary.stddev);
        },
        py::arg("synth_count") = 10000L, py::arg("epsilon") = 1.0, py::arg("n_points") = 100,
        py::arg("parties") = 15, py::arg("trials") = 100, py::arg("seed") = 1,
        "(mean, std) of the Laplace baseline across trials.");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}

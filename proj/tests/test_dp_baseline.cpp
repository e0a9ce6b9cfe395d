#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fedauc/dp_baseline.hpp"
#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"

using namespace fedauc;

namespace {

std::vector<CountVector> party_counts(std::mt19937_64& rng, int parties, int samples, int n) {
    DecisionGrid grid = make_grid(n);
    std::vector<LocalDataset> datasets(static_cast<std::size_t>(parties));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        int label = i % 2;
        double score = std::clamp(0.5 + (label ? 0.1 : -0.1) + 0.3 * (u(rng) - 0.5), 0.0, 1.0);
        datasets[static_cast<std::size_t>(i % parties)].samples.push_back({score, label});
    }
    std::vector<CountVector> out;
    for (const auto& ds : datasets) out.push_back(local_counts(ds, grid));
    return out;
}

}  // namespace

TEST_CASE("budget accounting is exact") {
    DpConfig cfg{1.0, 100};
    CHECK(cfg.per_stat_epsilon() * 4.0 * 100 == 1.0);
    CHECK(cfg.laplace_scale() == 400.0);
    DpConfig wide{8.0, 25};
    CHECK(wide.laplace_scale() == 12.5);
}

TEST_CASE("noisy stats have the Laplace spread and carry no clamping") {
    std::mt19937_64 data_rng(3);
    auto counts = party_counts(data_rng, 1, 50, 25);
    DpConfig cfg{1.0, 25};  // scale 100

    auto rng = make_rng(17, 0);
    double sum = 0.0, sq = 0.0;
    const int draws = 10000;
    bool saw_negative = false;
    for (int i = 0; i < draws; ++i) {
        NoisyStats stats = dp_client_stats(counts[0], cfg, rng);
        double noise = stats.tp[5] - static_cast<double>(counts[0].tp[5]);
        sum += noise;
        sq += noise * noise;
        saw_negative = saw_negative || stats.tp[5] < 0.0;
    }
    double mean = sum / draws;
    double std = std::sqrt(sq / draws - mean * mean);
    double expected_std = cfg.laplace_scale() * std::sqrt(2.0);
    CHECK(std::fabs(std - expected_std) / expected_std < 0.05);
    CHECK(std::fabs(mean) < 5.0 * expected_std / std::sqrt(static_cast<double>(draws)));
    CHECK(saw_negative);  // no post-processing of noisy counts
}

TEST_CASE("near-zero noise reproduces the trapezoid value") {
    std::mt19937_64 data_rng(5);
    auto counts = party_counts(data_rng, 3, 600, 50);
    DpConfig cfg{1e9, 50};  // essentially noiseless
    auto rng = make_rng(19, 0);
    std::vector<NoisyStats> noisy;
    for (const auto& c : counts) noisy.push_back(dp_client_stats(c, cfg, rng));
    double dp_auc = dp_aggregate_auc(noisy);
    double reference = trapezoid_auc(sum_counts(counts));
    CHECK(dp_auc == doctest::Approx(reference).epsilon(1e-4));
}

TEST_CASE("small data with tight budget goes haywire; large data does not") {
    std::mt19937_64 data_rng(7);
    auto small = party_counts(data_rng, 15, 100, 100);
    DpConfig tight{1.0, 100};
    DpTrialSummary pathological = dp_trials(small, tight, 100, 21);
    CHECK(pathological.stddev > 1.0);
    bool outside = false;
    for (double v : pathological.values) outside = outside || v < 0.0 || v > 1.0;
    CHECK(outside);  // single-trial values stray far outside [0,1]

    auto large = party_counts(data_rng, 15, 100000, 25);
    DpConfig loose{8.0, 25};
    DpTrialSummary calm = dp_trials(large, loose, 100, 23);
    CHECK(calm.stddev < 0.05);
    CHECK(std::fabs(calm.mean - trapezoid_auc(sum_counts(large))) < 0.02);
}

TEST_CASE("trial std is non-increasing in data size, within sampling error") {
    // in the noise-dominated regime the per-run std is heavy-tailed, so the
    // trend is asserted on the median over repetitions with a 2*IQR allowance
    std::mt19937_64 data_rng(9);
    DpConfig cfg{1.0, 100};
    double prev_median = std::numeric_limits<double>::infinity();
    double prev_iqr = 0.0;
    for (int size : {100, 1000, 10000, 100000}) {
        auto counts = party_counts(data_rng, 15, size, 100);
        std::vector<double> stds;
        for (int rep = 0; rep < 10; ++rep) {
            stds.push_back(dp_trials(counts, cfg, 60, 25 + static_cast<unsigned>(rep)).stddev);
        }
        std::sort(stds.begin(), stds.end());
        double median = (stds[4] + stds[5]) / 2.0;
        double iqr = stds[7] - stds[2];
        CHECK(median <= prev_median + 2.0 * prev_iqr);
        prev_median = median;
        prev_iqr = iqr;
    }
}

TEST_CASE("an unbounded budget is exactly noiseless") {
    std::mt19937_64 data_rng(13);
    auto counts = party_counts(data_rng, 3, 300, 25);
    DpConfig noiseless{std::numeric_limits<double>::infinity(), 25};
    CHECK(noiseless.laplace_scale() == 0.0);
    DpTrialSummary summary = dp_trials(counts, noiseless, 20, 31);
    // every trial is identical; only mean-summation rounding remains, and the
    // rate-form trapezoid agrees with the single-division form to the ulp
    CHECK(summary.stddev <= 1e-12);
    CHECK(summary.mean == doctest::Approx(trapezoid_auc(sum_counts(counts))).epsilon(1e-12));
}

TEST_CASE("config validation") {
    std::mt19937_64 data_rng(11);
    auto counts = party_counts(data_rng, 2, 40, 25);
    auto rng = make_rng(1, 0);
    DpConfig bad_eps{0.0, 25};
    CHECK_THROWS_AS(dp_client_stats(counts[0], bad_eps, rng), InvalidConfig);
    DpConfig wrong_grid{1.0, 50};
    CHECK_THROWS_AS(dp_client_stats(counts[0], wrong_grid, rng), InvalidConfig);
    CHECK_THROWS_AS(dp_aggregate_auc({}), InvalidConfig);
    CHECK_THROWS_AS(dp_trials(counts, DpConfig{1.0, 25}, 0, 1), InvalidConfig);
}

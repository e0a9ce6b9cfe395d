#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "fedauc/errors.hpp"
#include "fedauc/metrics.hpp"

using namespace fedauc;

namespace {

// O(P*Neg) pairwise oracle: (1*[s+ > s-] + 0.5*[s+ == s-]) / (P*Neg)
double pairwise_auc_oracle(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    long pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        ++pos;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    for (int l : labels) neg += l == 0;
    return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

// naive per-threshold recount
CountVector counts_oracle(const LocalDataset& ds, const DecisionGrid& grid) {
    CountVector out;
    out.tp.assign(grid.thresholds.size(), 0);
    out.fp.assign(grid.thresholds.size(), 0);
    for (std::size_t k = 0; k + 1 < grid.thresholds.size(); ++k) {
        for (const Sample& s : ds.samples) {
            if (s.score > grid.thresholds[k]) (s.label ? out.tp : out.fp)[k] += 1;
        }
    }
    for (const Sample& s : ds.samples) (s.label ? out.tp : out.fp).back() += 1;
    return out;
}

LocalDataset random_dataset(std::mt19937_64& rng, int n, double pos_frac = 0.4) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LocalDataset ds;
    for (int i = 0; i < n; ++i) {
        ds.samples.push_back({u(rng), u(rng) < pos_frac ? 1 : 0});
    }
    return ds;
}

}  // namespace

TEST_CASE("exact_auc on separable and tied data") {
    std::vector<double> scores{0.9, 0.9, 0.1, 0.1};
    std::vector<int> labels{1, 1, 0, 0};
    CHECK(exact_auc(scores, labels) == 1.0);

    std::vector<double> same{0.5, 0.5, 0.5, 0.5};
    CHECK(exact_auc(same, labels) == 0.5);

    CHECK_THROWS_AS(exact_auc({0.1, 0.2}, {1, 1}), DegenerateLabels);
    CHECK_THROWS_AS(exact_auc({0.1, 0.2}, {0, 0}), DegenerateLabels);
}

TEST_CASE("exact_auc matches the pairwise oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        auto ds = random_dataset(rng, 50);
        std::vector<double> scores;
        std::vector<int> labels;
        bool both = false;
        for (const Sample& s : ds.samples) {
            scores.push_back(s.score);
            labels.push_back(s.label);
        }
        both = std::count(labels.begin(), labels.end(), 1) > 0 &&
               std::count(labels.begin(), labels.end(), 0) > 0;
        if (!both) continue;
        CHECK(exact_auc(scores, labels) == doctest::Approx(pairwise_auc_oracle(scores, labels))
                                               .epsilon(1e-12));
    }
}

TEST_CASE("make_grid endpoints and spacing") {
    DecisionGrid g2 = make_grid(2);
    CHECK(g2.thresholds == std::vector<double>{1.0, 0.0});
    DecisionGrid g3 = make_grid(3);
    CHECK(g3.thresholds == std::vector<double>{1.0, 0.5, 0.0});
    for (int n : {25, 50, 100}) {
        DecisionGrid g = make_grid(n);
        CHECK(g.n_points() == n);
        CHECK(g.thresholds.front() == 1.0);
        CHECK(g.thresholds.back() == 0.0);
        CHECK(std::is_sorted(g.thresholds.rbegin(), g.thresholds.rend()));
    }
    CHECK_THROWS_AS(make_grid(1), InvalidGrid);
    CHECK_THROWS_AS(make_grid(0), InvalidGrid);
}

TEST_CASE("local_counts basics") {
    DecisionGrid grid = make_grid(3);
    LocalDataset one{{{0.9, 1}}, 0};
    CountVector c = local_counts(one, grid);
    CHECK(c.tp == std::vector<std::int64_t>{0, 1, 1});
    CHECK(c.fp == std::vector<std::int64_t>{0, 0, 0});

    LocalDataset negs{{{0.3, 0}, {0.6, 0}}, 0};
    CountVector cn = local_counts(negs, grid);
    CHECK(cn.tp == std::vector<std::int64_t>{0, 0, 0});
    CHECK(cn.fp.back() == 2);

    CountVector empty = local_counts(LocalDataset{}, grid);
    CHECK(empty.tp == std::vector<std::int64_t>{0, 0, 0});
    CHECK(empty.fp == std::vector<std::int64_t>{0, 0, 0});
}

TEST_CASE("local_counts matches the linear-scan oracle") {
    std::mt19937_64 rng(43);
    DecisionGrid grid = make_grid(100);
    auto ds = random_dataset(rng, 200);
    CountVector fast = local_counts(ds, grid);
    CountVector slow = counts_oracle(ds, grid);
    CHECK(fast.tp == slow.tp);
    CHECK(fast.fp == slow.fp);
}

TEST_CASE("counts are monotone with totals at the end") {
    std::mt19937_64 rng(47);
    DecisionGrid grid = make_grid(50);
    auto ds = random_dataset(rng, 500);
    CountVector c = local_counts(ds, grid);
    CHECK(std::is_sorted(c.tp.begin(), c.tp.end()));
    CHECK(std::is_sorted(c.fp.begin(), c.fp.end()));
    CHECK(c.tp[0] == 0);  // nothing scores above 1.0
    CHECK(c.fp[0] == 0);
    CHECK(c.total_pos() + c.total_neg() == static_cast<std::int64_t>(ds.samples.size()));
}

TEST_CASE("pair_transform hand example and error path") {
    CountVector c;
    c.tp = {0, 10, 10};
    c.fp = {0, 0, 10};
    PairVectors pv = pair_transform(c);
    CHECK(pv.t == std::vector<std::int64_t>{10, 20});
    CHECK(pv.f == std::vector<std::int64_t>{0, 10});

    CountVector zero;
    zero.tp = {0, 0};
    zero.fp = {0, 0};
    PairVectors z = pair_transform(zero);
    CHECK(z.t == std::vector<std::int64_t>{0});
    CHECK(z.f == std::vector<std::int64_t>{0});

    CountVector bad;
    bad.tp = {0, 1};
    bad.fp = {5, 3};
    CHECK_THROWS_AS(pair_transform(bad), NonMonotone);
}

TEST_CASE("pair product sum equals the direct numerator") {
    std::mt19937_64 rng(53);
    DecisionGrid grid = make_grid(25);
    auto ds = random_dataset(rng, 300);
    CountVector c = local_counts(ds, grid);
    PairVectors pv = pair_transform(c);
    std::int64_t via_pairs = 0;
    for (std::size_t k = 0; k < pv.t.size(); ++k) via_pairs += pv.t[k] * pv.f[k];
    std::int64_t direct = 0;
    for (std::size_t k = 0; k + 1 < c.tp.size(); ++k) {
        direct += (c.tp[k + 1] + c.tp[k]) * (c.fp[k + 1] - c.fp[k]);
    }
    CHECK(via_pairs == direct);
}

TEST_CASE("trapezoid_auc hand examples") {
    CountVector perfect;
    perfect.tp = {0, 10, 10};
    perfect.fp = {0, 0, 10};
    CHECK(trapezoid_auc(perfect) == 1.0);  // (10*0 + 20*10) / (2*10*10)

    CountVector diagonal;
    diagonal.tp = {0, 3, 7, 9};
    diagonal.fp = {0, 3, 7, 9};
    CHECK(trapezoid_auc(diagonal) == 0.5);

    CountVector degenerate;
    degenerate.tp = {0, 0, 0};
    degenerate.fp = {0, 1, 5};
    CHECK_THROWS_AS(trapezoid_auc(degenerate), DegenerateLabels);
}

TEST_CASE("trapezoid approximation is close to exact AUC at N=100") {
    std::mt19937_64 rng(59);
    std::normal_distribution<double> pos_score(0.65, 0.15), neg_score(0.35, 0.15);
    LocalDataset ds;
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 10000; ++i) {
        int label = i % 2;
        double s = std::clamp(label ? pos_score(rng) : neg_score(rng), 0.0, 1.0);
        ds.samples.push_back({s, label});
        scores.push_back(s);
        labels.push_back(label);
    }
    double exact = exact_auc(scores, labels);
    double approx = trapezoid_auc(local_counts(ds, make_grid(100)));
    CHECK(std::fabs(approx - exact) / exact < 0.005);
}

TEST_CASE("approximation error shrinks on average as the grid refines") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> pos_score(0.6, 0.15), neg_score(0.4, 0.15);
    double mean_err[3] = {0, 0, 0};
    const int grids[3] = {25, 50, 100};
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        LocalDataset ds;
        std::vector<double> scores;
        std::vector<int> labels;
        for (int i = 0; i < 4000; ++i) {
            int label = i % 2;
            double s = std::clamp(label ? pos_score(rng) : neg_score(rng), 0.0, 1.0);
            ds.samples.push_back({s, label});
            scores.push_back(s);
            labels.push_back(label);
        }
        double exact = exact_auc(scores, labels);
        for (int g = 0; g < 3; ++g) {
            mean_err[g] +=
                std::fabs(trapezoid_auc(local_counts(ds, make_grid(grids[g]))) - exact) / seeds;
        }
    }
    CHECK(mean_err[1] <= mean_err[0] + 1e-9);
    CHECK(mean_err[2] <= mean_err[1] + 1e-9);
}

TEST_CASE("counts are additive across parties and permutation invariant") {
    std::mt19937_64 rng(67);
    DecisionGrid grid = make_grid(50);
    auto all = random_dataset(rng, 600);

    // split the same samples into 3 parties
    std::vector<LocalDataset> parts(3);
    for (std::size_t i = 0; i < all.samples.size(); ++i) {
        parts[i % 3].samples.push_back(all.samples[i]);
    }
    std::vector<CountVector> per_party;
    for (const auto& p : parts) per_party.push_back(local_counts(p, grid));
    CountVector summed = sum_counts(per_party);
    CountVector direct = local_counts(all, grid);
    CHECK(summed.tp == direct.tp);
    CHECK(summed.fp == direct.fp);

    // shuffled sample order changes nothing
    LocalDataset shuffled = all;
    std::shuffle(shuffled.samples.begin(), shuffled.samples.end(), rng);
    CHECK(trapezoid_auc(local_counts(shuffled, grid)) == trapezoid_auc(direct));
}

TEST_CASE("roc_points anchors at the origin and ends at (1,1)") {
    CountVector c;
    c.tp = {0, 6, 10};
    c.fp = {0, 2, 8};
    auto pts = roc_points(c);
    REQUIRE(pts.size() == 3);
    CHECK(pts.front() == std::pair<double, double>{0.0, 0.0});
    CHECK(pts.back() == std::pair<double, double>{1.0, 1.0});
    CHECK(pts[1].first == 0.25);
    CHECK(pts[1].second == 0.6);
}

TEST_CASE("trapezoid output lies in [0,1] on random monotone counts") {
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> step(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        CountVector c;
        std::int64_t tp = 0, fp = 0;
        for (int k = 0; k < 20; ++k) {
            tp += step(rng);
            fp += step(rng);
            c.tp.push_back(tp);
            c.fp.push_back(fp);
        }
        if (c.total_pos() == 0 || c.total_neg() == 0) continue;
        double auc = trapezoid_auc(c);
        CHECK(auc >= 0.0);
        CHECK(auc <= 1.0);
    }
}

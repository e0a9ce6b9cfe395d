#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fedauc/bus.hpp"
#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"
#include "fedauc/semihonest.hpp"

using namespace fedauc;

namespace {

std::vector<LocalDataset> random_parties(std::mt19937_64& rng, int parties, int samples) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<LocalDataset> out(static_cast<std::size_t>(parties));
    for (int m = 0; m < parties; ++m) out[static_cast<std::size_t>(m)].party_id = m;
    for (int i = 0; i < samples; ++i) {
        int label = i % 2;
        double score = std::clamp(0.5 + (label ? 0.12 : -0.12) + 0.25 * (u(rng) - 0.5), 0.0, 1.0);
        out[static_cast<std::size_t>(i % parties)].samples.push_back({score, label});
    }
    return out;
}

CountVector global_counts(const std::vector<LocalDataset>& parties, const DecisionGrid& grid) {
    std::vector<CountVector> per_party;
    for (const auto& p : parties) per_party.push_back(local_counts(p, grid));
    return sum_counts(per_party);
}

}  // namespace

TEST_CASE("client_prepare packs exactly what the plaintext pipeline computes") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(3);
    DecisionGrid grid = make_grid(25);
    std::mt19937_64 rng(5);
    auto parties = random_parties(rng, 2, 150);

    ClientSubmission sub = client_prepare(parties[0], grid, *backend, keys.public_key);
    CountVector counts = local_counts(parties[0], grid);
    PairVectors pairs = pair_transform(counts);

    PlainVector t = backend->decrypt(keys.private_key, sub.enc_t);
    PlainVector f = backend->decrypt(keys.private_key, sub.enc_f);
    REQUIRE(t.size() == pairs.t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(t[k] == static_cast<double>(pairs.t[k]));
        CHECK(f[k] == static_cast<double>(pairs.f[k]));
    }
    CHECK(backend->decrypt(keys.private_key, sub.enc_tp_total)[0] ==
          static_cast<double>(counts.total_pos()));
    CHECK(backend->decrypt(keys.private_key, sub.enc_fp_total)[0] ==
          static_cast<double>(counts.total_neg()));
}

TEST_CASE("all-negative party uploads an encrypted zero total") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(3);
    DecisionGrid grid = make_grid(10);
    LocalDataset negatives{{{0.2, 0}, {0.7, 0}}, 0};
    ClientSubmission sub = client_prepare(negatives, grid, *backend, keys.public_key);
    CHECK(backend->decrypt(keys.private_key, sub.enc_tp_total)[0] == 0.0);
    CHECK(backend->decrypt(keys.private_key, sub.enc_fp_total)[0] == 2.0);
}

TEST_CASE("aggregation equals the plaintext sums, including M=15") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(7);
    DecisionGrid grid = make_grid(50);
    std::mt19937_64 rng(9);

    for (int parties : {2, 15}) {
        auto datasets = random_parties(rng, parties, 60 * parties);
        std::vector<ClientSubmission> subs;
        for (const auto& ds : datasets) {
            subs.push_back(client_prepare(ds, grid, *backend, keys.public_key));
        }
        AggregatedStats stats = aggregate(*backend, subs);
        CountVector global = global_counts(datasets, grid);
        PairVectors pairs = pair_transform(global);

        PlainVector t = backend->decrypt(keys.private_key, stats.enc_t);
        for (std::size_t k = 0; k < pairs.t.size(); ++k) {
            CHECK(t[k] == static_cast<double>(pairs.t[k]));
        }
        CHECK(backend->decrypt(keys.private_key, stats.enc_tp_total)[0] ==
              static_cast<double>(global.total_pos()));
    }

    CHECK_THROWS_AS(aggregate(*backend, {}), TooFewParties);
}

TEST_CASE("num/denom matches the perfect-classifier hand example") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(11);
    DecisionGrid grid = make_grid(3);

    // two parties, each 5 positives at 0.9 and 5 negatives at 0.1
    std::vector<LocalDataset> parties(2);
    for (int m = 0; m < 2; ++m) {
        parties[static_cast<std::size_t>(m)].party_id = m;
        for (int i = 0; i < 5; ++i) {
            parties[static_cast<std::size_t>(m)].samples.push_back({0.9, 1});
            parties[static_cast<std::size_t>(m)].samples.push_back({0.1, 0});
        }
    }
    std::vector<ClientSubmission> subs;
    for (const auto& ds : parties) subs.push_back(client_prepare(ds, grid, *backend, keys.public_key));
    auto [enc_num, enc_denom] = compute_num_denom(*backend, aggregate(*backend, subs));
    CHECK(backend->decrypt(keys.private_key, enc_num)[0] == 200.0);
    CHECK(backend->decrypt(keys.private_key, enc_denom)[0] == 200.0);
}

TEST_CASE("a globally positive-free instance yields an encrypted zero denominator") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(12);
    DecisionGrid grid = make_grid(5);
    std::vector<LocalDataset> parties(2);
    parties[0] = LocalDataset{{{0.3, 0}, {0.8, 0}}, 0};
    parties[1] = LocalDataset{{{0.6, 0}}, 1};
    std::vector<ClientSubmission> subs;
    for (const auto& ds : parties) subs.push_back(client_prepare(ds, grid, *backend, keys.public_key));
    auto [enc_num, enc_denom] = compute_num_denom(*backend, aggregate(*backend, subs));
    CHECK(backend->decrypt(keys.private_key, enc_denom)[0] == 0.0);
    CHECK(backend->decrypt(keys.private_key, enc_num)[0] == 0.0);
}

TEST_CASE("blinding preserves the ratio and has wide support") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(13);
    CipherVector num = backend->encrypt(keys.public_key, std::vector<double>{120.0});
    CipherVector denom = backend->encrypt(keys.public_key, std::vector<double>{240.0});

    std::mt19937_64 rng(15);
    double lo = 1e300, hi = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto [blinded, mask] = blind(*backend, num, denom, rng);
        CHECK(mask.c > 0.0);
        double n = backend->decrypt(keys.private_key, blinded.enc_num)[0];
        double d = backend->decrypt(keys.private_key, blinded.enc_denom)[0];
        CHECK(n / d == 0.5);
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    CHECK(hi / lo >= 1e6);  // blinded numerators span >= 6 orders of magnitude
}

TEST_CASE("finalize divides out the mask and rejects degenerate denominators") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(17);
    BlindedOutput out;
    out.enc_num = backend->encrypt(keys.public_key, std::vector<double>{100.0});
    out.enc_denom = backend->encrypt(keys.public_key, std::vector<double>{200.0});
    CHECK(client_finalize(*backend, out, keys.private_key) == 0.5);

    BlindedOutput zero;
    zero.enc_num = backend->encrypt(keys.public_key, std::vector<double>{100.0});
    zero.enc_denom = backend->encrypt(keys.public_key, std::vector<double>{0.0});
    CHECK_THROWS_AS(client_finalize(*backend, zero, keys.private_key), DegenerateLabels);
}

TEST_CASE("end-to-end pipeline equals the plaintext trapezoid exactly") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(19);
    DecisionGrid grid = make_grid(100);
    std::mt19937_64 rng(21);

    for (int trial = 0; trial < 10; ++trial) {
        auto datasets = random_parties(rng, 3, 1000);
        double oracle = trapezoid_auc(global_counts(datasets, grid));
        double pipeline = run_semi_honest(*backend, datasets, grid, keys, 1000 + trial);
        CHECK(pipeline == oracle);
    }
}

TEST_CASE("the finalized AUC is invariant to the mask") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(23);
    DecisionGrid grid = make_grid(50);
    std::mt19937_64 rng(25);
    auto datasets = random_parties(rng, 4, 400);

    double first = run_semi_honest(*backend, datasets, grid, keys, 1);
    for (std::uint64_t seed : {2ull, 3ull, 4ull, 5ull}) {
        CHECK(run_semi_honest(*backend, datasets, grid, keys, seed) == first);
    }
}

TEST_CASE("noise backend pipeline stays within 1e-6 of the oracle") {
    HeParams params;
    params.noise_std = 1e-9;
    auto backend = make_backend(BackendKind::noise_model, params, 3);
    KeyPair keys = backend->keygen(27);
    DecisionGrid grid = make_grid(100);
    std::mt19937_64 rng(29);
    auto datasets = random_parties(rng, 3, 2000);

    double oracle = trapezoid_auc(global_counts(datasets, grid));
    double pipeline = run_semi_honest(*backend, datasets, grid, keys, 31);
    CHECK(std::fabs(pipeline - oracle) < 1e-6);
}

TEST_CASE("client uploads exactly 4 ciphertexts regardless of data size") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(31);
    DecisionGrid grid = make_grid(100);
    std::mt19937_64 rng(33);

    for (int samples : {40, 4000}) {
        Bus bus;
        auto datasets = random_parties(rng, 2, samples);
        run_semi_honest(*backend, datasets, grid, keys, 7, &bus);
        CHECK(bus.traffic().at("party_0").ciphertexts_sent == 4);
        CHECK(bus.traffic().at("party_1").ciphertexts_sent == 4);
        CHECK(bus.traffic().at("party_0").ciphertexts_received == 2);
    }
}

TEST_CASE("only ciphertext blobs cross the client to aggregator boundary") {
    auto backend = make_backend(BackendKind::exact, HeParams{}, 1);
    KeyPair keys = backend->keygen(35);
    DecisionGrid grid = make_grid(25);
    std::mt19937_64 rng(37);
    auto datasets = random_parties(rng, 2, 100);

    Bus bus;
    run_semi_honest(*backend, datasets, grid, keys, 9, &bus);
    std::size_t blob = ciphertext_wire_size(backend->params());
    for (const TranscriptEntry& entry : bus.transcript()) {
        if (entry.receiver != "aggregator") continue;
        CHECK(entry.kind == "submission");
        // fixed header plus whole ciphertext blobs, nothing else
        CHECK(entry.bytes == kMessageHeaderBytes + 4 * blob);
        CHECK(entry.ciphertexts == 4);
    }
}

TEST_CASE("masking bijection residual is tiny for consistent candidates") {
    std::mt19937_64 rng(39);
    std::uniform_real_distribution<double> u(0.1, 1e6);
    for (int trial = 0; trial < 100; ++trial) {
        double num = u(rng), denom = u(rng);
        double c = log_uniform_pow2(rng, 20.0, 40.0);
        double g = u(rng);
        double residual = masking_bijection_residual(num * c, denom * c, num * g, denom * g);
        CHECK(residual <= 1e-9);
    }
}

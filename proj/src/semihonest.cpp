#include "fedauc/semihonest.hpp"

#include <chrono>
#include <cmath>

#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

namespace {

std::vector<double> to_doubles(const std::vector<std::int64_t>& values) {
    return {values.begin(), values.end()};
}

// Serializes a protocol message (fixed header + ciphertext blobs) through the
// bus and returns the ciphertexts as the receiver re-parses them.
std::vector<CipherVector> via_bus(Bus* bus, HeBackend& backend, const std::string& sender,
                                  const std::string& receiver, const std::string& kind,
                                  const std::vector<const CipherVector*>& cts) {
    if (bus == nullptr) {
        std::vector<CipherVector> out;
        out.reserve(cts.size());
        for (const auto* ct : cts) out.push_back(*ct);
        return out;
    }
    std::vector<std::uint8_t> payload(kMessageHeaderBytes, 0);
    payload[0] = static_cast<std::uint8_t>(cts.size());
    for (const auto* ct : cts) {
        auto blob = backend.serialize(*ct);
        payload.insert(payload.end(), blob.begin(), blob.end());
    }
    auto wire = bus->transfer(sender, receiver, kind, std::move(payload),
                              static_cast<int>(cts.size()));
    std::vector<CipherVector> out;
    std::size_t off = kMessageHeaderBytes;
    std::size_t blob_size = ciphertext_wire_size(backend.params());
    for (std::size_t i = 0; i < cts.size(); ++i) {
        out.push_back(backend.deserialize(
            std::span<const std::uint8_t>(wire.data() + off, blob_size)));
        off += blob_size;
    }
    return out;
}

}  // namespace

ClientSubmission client_prepare(const LocalDataset& dataset, const DecisionGrid& grid,
                                HeBackend& backend, const PublicKey& pk) {
    CountVector counts = local_counts(dataset, grid);
    PairVectors pairs = pair_transform(counts);
    if (pairs.t.size() + 1 > backend.params().slot_count()) {
        throw SlotOverflow("decision grid exceeds slot count");
    }
    ClientSubmission sub;
    sub.party_id = dataset.party_id;
    sub.enc_t = backend.encrypt(pk, to_doubles(pairs.t));
    sub.enc_f = backend.encrypt(pk, to_doubles(pairs.f));
    sub.enc_tp_total = backend.encrypt(pk, std::vector<double>{
                                               static_cast<double>(counts.total_pos())});
    sub.enc_fp_total = backend.encrypt(pk, std::vector<double>{
                                               static_cast<double>(counts.total_neg())});
    return sub;
}

AggregatedStats aggregate(HeBackend& backend, const std::vector<ClientSubmission>& submissions) {
    if (submissions.size() < 2) {
        throw TooFewParties("aggregation needs at least 2 submissions, got " +
                            std::to_string(submissions.size()));
    }
    AggregatedStats stats{submissions[0].enc_t, submissions[0].enc_f,
                          submissions[0].enc_tp_total, submissions[0].enc_fp_total};
    for (std::size_t m = 1; m < submissions.size(); ++m) {
        stats.enc_t = backend.add_ct(stats.enc_t, submissions[m].enc_t);
        stats.enc_f = backend.add_ct(stats.enc_f, submissions[m].enc_f);
        stats.enc_tp_total = backend.add_ct(stats.enc_tp_total, submissions[m].enc_tp_total);
        stats.enc_fp_total = backend.add_ct(stats.enc_fp_total, submissions[m].enc_fp_total);
    }
    return stats;
}

std::pair<CipherVector, CipherVector> compute_num_denom(HeBackend& backend,
                                                        const AggregatedStats& stats) {
    CipherVector enc_num = backend.sum_slots(backend.mul_ct(stats.enc_t, stats.enc_f));
    CipherVector prod = backend.mul_ct(stats.enc_tp_total, stats.enc_fp_total);
    // doubling via addition keeps the scalar-mask level free for the blind step
    CipherVector enc_denom = backend.add_ct(prod, prod);
    return {std::move(enc_num), std::move(enc_denom)};
}

std::pair<BlindedOutput, BlindMask> blind(HeBackend& backend, const CipherVector& enc_num,
                                          const CipherVector& enc_denom, std::mt19937_64& rng) {
    BlindMask mask{log_uniform_pow2(rng, 20.0, 40.0)};
    BlindedOutput out;
    out.enc_num = backend.mul_scalar(enc_num, mask.c);
    out.enc_denom = backend.mul_scalar(enc_denom, mask.c);
    return {std::move(out), mask};
}

double client_finalize(HeBackend& backend, const BlindedOutput& output, const SecretKey& sk) {
    std::vector<Dyadic> num = backend.decrypt_exact(sk, output.enc_num);
    std::vector<Dyadic> denom = backend.decrypt_exact(sk, output.enc_denom);
    Dyadic u = num.empty() ? Dyadic{} : num[0];
    Dyadic v = denom.empty() ? Dyadic{} : denom[0];
    double v_approx = v.to_double();
    double u_approx = u.to_double();
    if (v.is_zero() || std::fabs(v_approx) < 1e-6 ||
        std::fabs(v_approx) < 1e-12 * std::fabs(u_approx)) {
        throw DegenerateLabels("blinded denominator is degenerate");
    }
    return Dyadic::div_to_double(u, v);
}

double run_semi_honest(HeBackend& backend, const std::vector<LocalDataset>& datasets,
                       const DecisionGrid& grid, const KeyPair& keys, std::uint64_t seed,
                       Bus* bus, PhaseTimings* timings) {
    if (datasets.size() < 2) throw TooFewParties("semi-honest protocol needs at least 2 parties");
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point start) {
        return std::chrono::duration<double, std::milli>(clock::now() - start).count();
    };

    auto t0 = clock::now();
    std::vector<ClientSubmission> submissions;
    submissions.reserve(datasets.size());
    for (const LocalDataset& ds : datasets) {
        ClientSubmission sub = client_prepare(ds, grid, backend, keys.public_key);
        std::string party = "party_" + std::to_string(ds.party_id);
        auto cts = via_bus(bus, backend, party, "aggregator", "submission",
                           {&sub.enc_t, &sub.enc_f, &sub.enc_tp_total, &sub.enc_fp_total});
        submissions.push_back(
            ClientSubmission{cts[0], cts[1], cts[2], cts[3], ds.party_id});
    }
    if (timings) timings->client_prep_ms += ms_since(t0);

    t0 = clock::now();
    AggregatedStats stats = aggregate(backend, submissions);
    auto [enc_num, enc_denom] = compute_num_denom(backend, stats);
    if (timings) timings->aggregate_ms += ms_since(t0);

    t0 = clock::now();
    auto rng = make_rng(seed, 0xa66);
    auto [blinded, mask] = blind(backend, enc_num, enc_denom, rng);
    (void)mask;  // stays with the aggregator
    if (timings) timings->blind_ms += ms_since(t0);

    t0 = clock::now();
    double auc = 0.0;
    for (const LocalDataset& ds : datasets) {
        std::string party = "party_" + std::to_string(ds.party_id);
        auto cts = via_bus(bus, backend, "aggregator", party, "blinded_output",
                           {&blinded.enc_num, &blinded.enc_denom});
        auc = client_finalize(backend, BlindedOutput{cts[0], cts[1]}, keys.private_key);
    }
    if (timings) timings->finalize_ms += ms_since(t0);
    return auc;
}

double masking_bijection_residual(double num_prime, double denom_prime, double num0,
                                  double denom0) {
    double c0 = num_prime / num0;
    return std::fabs(denom_prime - denom0 * c0) / std::fabs(denom_prime);
}

}  // namespace fedauc

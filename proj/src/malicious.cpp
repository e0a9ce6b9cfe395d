#include "fedauc/malicious.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "fedauc/errors.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

namespace {

std::vector<std::vector<double>> zero_sum_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> mask(-kMaskHalfRange, kMaskHalfRange);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(rows));
    for (auto& row : out) {
        row.resize(static_cast<std::size_t>(cols));
        std::int64_t sum = 0;
        for (int m = 0; m + 1 < cols; ++m) {
            std::int64_t v = mask(rng);
            row[static_cast<std::size_t>(m)] = static_cast<double>(v);
            sum += v;
        }
        row.back() = static_cast<double>(-sum);
    }
    return out;
}

std::vector<std::int64_t> additive_shares(std::int64_t value, int count, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> draw(-kMaskHalfRange, kMaskHalfRange);
    std::vector<std::int64_t> shares(static_cast<std::size_t>(count));
    std::int64_t sum = 0;
    for (int s = 0; s + 1 < count; ++s) {
        shares[static_cast<std::size_t>(s)] = draw(rng);
        sum += shares[static_cast<std::size_t>(s)];
    }
    shares.back() = value - sum;
    return shares;
}

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
        out.push_back(
            backend.deserialize(std::span<const std::uint8_t>(wire.data() + off, blob_size)));
        off += blob_size;
    }
    return out;
}

}  // namespace

double VerifiedAuc::require_accepted() const {
    if (!accepted) {
        throw VerificationFailed(auc, auc_prime,
                                 "verification rejected: results differ by more than " +
                                     std::to_string(tolerance));
    }
    return auc;
}

CommonRandomness gen_common_randomness(int n_parties, int n_points, int split_count,
                                       std::uint64_t seed) {
    if (n_parties < 2 || n_points < 2 || split_count < 2) {
        throw InvalidConfig("common randomness needs M >= 2, N >= 2, S >= 2");
    }
    auto rng = make_rng(seed, 0xc0de);
    CommonRandomness cr;
    cr.n_parties = n_parties;
    cr.n_points = n_points;
    cr.split_count = split_count;
    cr.r3 = random_multiplier32(rng, 10, 26);
    cr.r4 = random_multiplier32(rng, 10, 26);
    cr.r5 = random_multiplier32(rng, 10, 26);
    cr.r6 = random_multiplier32(rng, 10, 26);
    cr.r7 = random_multiplier32(rng, 10, 26);
    cr.r8 = random_multiplier32(rng, 10, 26);
    cr.tr = zero_sum_matrix(n_points + 1, n_parties, rng);
    cr.fr = zero_sum_matrix(n_points + 1, n_parties, rng);
    cr.pi.resize(static_cast<std::size_t>(split_count) * static_cast<std::size_t>(n_points));
    std::iota(cr.pi.begin(), cr.pi.end(), 0u);
    std::shuffle(cr.pi.begin(), cr.pi.end(), rng);
    cr.b.resize(static_cast<std::size_t>(n_points));
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& flag : cr.b) flag = static_cast<std::uint8_t>(bit(rng));
    return cr;
}

MaskedSubmission client_mask_split(const CountVector& counts, const CommonRandomness& cr,
                                   int party_id, HeBackend& backend, const PublicKey& pk,
                                   std::mt19937_64& rng) {
    const int n = cr.n_points;
    const int s_count = cr.split_count;
    if (counts.n_points() != n) throw InvalidConfig("count vector does not match randomness grid");
    if (party_id < 0 || party_id >= cr.n_parties) throw InvalidConfig("party id out of range");
    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(s_count);
    if (total > backend.params().slot_count()) {
        throw SlotOverflow("S*N exceeds slot count");
    }

    PairVectors pairs = pair_transform(counts);
    const auto m = static_cast<std::size_t>(party_id);
    std::vector<double> t_all(total, 0.0), f_all(total, 0.0);

    for (int g = 0; g < n; ++g) {
        const auto gi = static_cast<std::size_t>(g);
        const bool totals = g == n - 1;
        const std::int64_t base_t = totals ? counts.total_pos() : pairs.t[gi];
        const std::int64_t base_f = totals ? counts.total_neg() : pairs.f[gi];
        const double rt = totals ? cr.r5 : cr.r3;
        const double rf = totals ? cr.r6 : cr.r4;
        const std::int64_t masked_t = base_t + static_cast<std::int64_t>(cr.tr[gi][m]);
        const std::int64_t masked_f = base_f + static_cast<std::int64_t>(cr.fr[gi][m]);

        // b[g] picks which side is split into S shares; the other side is
        // replicated so per-group share products still sum to T*F
        std::vector<std::int64_t> t_parts, f_parts;
        if (cr.b[gi] == 0) {
            t_parts = additive_shares(masked_t, s_count, rng);
            f_parts.assign(static_cast<std::size_t>(s_count), masked_f);
        } else {
            t_parts.assign(static_cast<std::size_t>(s_count), masked_t);
            f_parts = additive_shares(masked_f, s_count, rng);
        }
        for (int s = 0; s < s_count; ++s) {
            const std::size_t slot = cr.pi[gi * static_cast<std::size_t>(s_count) +
                                           static_cast<std::size_t>(s)];
            t_all[slot] = rt * static_cast<double>(t_parts[static_cast<std::size_t>(s)]);
            f_all[slot] = rf * static_cast<double>(f_parts[static_cast<std::size_t>(s)]);
        }
    }

    const auto row_dt = static_cast<std::size_t>(n);
    const double dt = cr.r7 * (static_cast<double>(counts.total_pos()) + cr.tr[row_dt][m]);
    const double df = cr.r8 * (static_cast<double>(counts.total_neg()) + cr.fr[row_dt][m]);

    MaskedSubmission sub;
    sub.party_id = party_id;
    sub.enc_t_all = backend.encrypt(pk, t_all);
    sub.enc_f_all = backend.encrypt(pk, f_all);
    sub.enc_dt = backend.encrypt(pk, std::vector<double>{dt});
    sub.enc_df = backend.encrypt(pk, std::vector<double>{df});
    return sub;
}

AggregatorResult aggregator_compute(HeBackend& backend,
                                    const std::vector<MaskedSubmission>& submissions,
                                    std::mt19937_64& rng) {
    if (submissions.size() < 2) {
        throw TooFewParties("aggregation needs at least 2 submissions, got " +
                            std::to_string(submissions.size()));
    }
    CipherVector t_sum = submissions[0].enc_t_all;
    CipherVector f_sum = submissions[0].enc_f_all;
    CipherVector dt_sum = submissions[0].enc_dt;
    CipherVector df_sum = submissions[0].enc_df;
    for (std::size_t i = 1; i < submissions.size(); ++i) {
        t_sum = backend.add_ct(t_sum, submissions[i].enc_t_all);
        f_sum = backend.add_ct(f_sum, submissions[i].enc_f_all);
        dt_sum = backend.add_ct(dt_sum, submissions[i].enc_dt);
        df_sum = backend.add_ct(df_sum, submissions[i].enc_df);
    }

    CipherVector inner = backend.sum_slots(backend.mul_ct(t_sum, f_sum));
    CipherVector dprod = backend.mul_ct(dt_sum, df_sum);

    BlindMask mask{log_uniform_pow2(rng, 20.0, 40.0)};
    AggregatorResult result;
    result.mask = mask;
    result.output.enc_blinded_num = backend.mul_scalar(inner, mask.c);
    result.output.enc_blinded_denom = backend.mul_scalar(dprod, mask.c);
    return result;
}

double client_unmask(const Dyadic& u, const Dyadic& v, const CommonRandomness& cr) {
    double v_approx = v.to_double();
    if (v.is_zero() || std::fabs(v_approx) < 1e-6) {
        throw DegenerateLabels("blinded denominator is degenerate");
    }
    const Dyadic r0 = Dyadic::from_double(cr.r3) * Dyadic::from_double(cr.r4);
    const Dyadic r1 = Dyadic::from_double(cr.r5) * Dyadic::from_double(cr.r6);
    const Dyadic r2 = Dyadic::from_double(cr.r7) * Dyadic::from_double(cr.r8);
    const Dyadic numerator = u * r2 - v * r1;
    const Dyadic denominator = v * r0 * Dyadic::from_int64(2);
    return Dyadic::div_to_double(numerator, denominator);
}

double default_verification_tolerance(const HeBackend& backend,
                                      const std::vector<CountVector>& counts, int n_parties,
                                      int split_count) {
    if (backend.params().noise_std > 0.0) return 5e-6;
    std::int64_t max_count = 0;
    for (const CountVector& c : counts) {
        max_count = std::max({max_count, c.total_pos(), c.total_neg()});
    }
    // masked share integers must stay under 2^21 so the 32-bit-mantissa
    // multiplier products remain exact doubles on the client side
    std::int64_t bound = 2 * max_count +
                         static_cast<std::int64_t>(n_parties + split_count) * kMaskHalfRange;
    return bound < (1 << 21) ? 0.0 : 1e-12;
}

VerifiedAuc run_verified(HeBackend& backend, const std::vector<LocalDataset>& datasets,
                         const DecisionGrid& grid, const KeyPair& keys,
                         const MaliciousConfig& config, AggregatorBehavior* behavior,
                         Bus* bus, PhaseTimings* timings) {
    const int m_count = static_cast<int>(datasets.size());
    if (m_count < 2) throw TooFewParties("malicious protocol needs at least 2 parties");
    if (config.split_count < 2) throw InvalidConfig("split count must be >= 2");

    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point start) {
        return std::chrono::duration<double, std::milli>(clock::now() - start).count();
    };

    std::vector<CountVector> counts;
    counts.reserve(datasets.size());
    for (const LocalDataset& ds : datasets) counts.push_back(local_counts(ds, grid));

    const double tolerance =
        config.tolerance >= 0.0
            ? config.tolerance
            : default_verification_tolerance(backend, counts, m_count, config.split_count);

    AggregatorBehavior honest;
    AggregatorBehavior* agg = behavior ? behavior : &honest;

    double results[2] = {0.0, 0.0};
    for (int run = 0; run < 2; ++run) {
        auto t0 = clock::now();
        CommonRandomness cr =
            gen_common_randomness(m_count, grid.n_points(), config.split_count,
                                  mix_seed(config.seed, 0x100u + static_cast<unsigned>(run)));

        std::vector<MaskedSubmission> submissions;
        submissions.reserve(datasets.size());
        for (int m = 0; m < m_count; ++m) {
            auto rng = make_rng(config.seed,
                                (static_cast<std::uint64_t>(run) << 32) | static_cast<unsigned>(m));
            MaskedSubmission sub = client_mask_split(counts[static_cast<std::size_t>(m)], cr, m,
                                                     backend, keys.public_key, rng);
            std::string party = "party_" + std::to_string(m);
            auto cts = via_bus(bus, backend, party, "aggregator", "masked_submission",
                               {&sub.enc_t_all, &sub.enc_f_all, &sub.enc_dt, &sub.enc_df});
            submissions.push_back(MaskedSubmission{cts[0], cts[1], cts[2], cts[3], m});
        }
        if (timings) timings->client_prep_ms += ms_since(t0);

        t0 = clock::now();
        submissions = agg->intercept_submissions(backend, std::move(submissions), run);
        auto agg_rng = make_rng(config.seed, 0xa99u + static_cast<unsigned>(run));
        AggregatorResult result = aggregator_compute(backend, submissions, agg_rng);
        if (timings) timings->aggregate_ms += ms_since(t0);

        t0 = clock::now();
        RunOutput output = agg->intercept_output(backend, std::move(result.output), run);
        if (timings) timings->blind_ms += ms_since(t0);

        t0 = clock::now();
        double auc = 0.0;
        for (int m = 0; m < m_count; ++m) {
            std::string party = "party_" + std::to_string(m);
            auto cts = via_bus(bus, backend, "aggregator", party, "run_output",
                               {&output.enc_blinded_num, &output.enc_blinded_denom});
            auto u = backend.decrypt_exact(keys.private_key, cts[0]);
            auto v = backend.decrypt_exact(keys.private_key, cts[1]);
            auc = client_unmask(u.empty() ? Dyadic{} : u[0], v.empty() ? Dyadic{} : v[0], cr);
        }
        if (timings) timings->finalize_ms += ms_since(t0);
        results[run] = auc;
    }

    VerifiedAuc verdict;
    verdict.auc = results[0];
    verdict.auc_prime = results[1];
    verdict.tolerance = tolerance;
    verdict.accepted = std::fabs(results[0] - results[1]) <= tolerance;
    if (bus != nullptr) {
        bus->note("parties", "parties", "verdict",
                  verdict.accepted ? "accepted" : "rejected");
    }
    return verdict;
}

}  // namespace fedauc

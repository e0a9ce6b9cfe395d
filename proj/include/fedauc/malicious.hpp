#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fedauc/bus.hpp"
#include "fedauc/he.hpp"
#include "fedauc/metrics.hpp"
#include "fedauc/semihonest.hpp"

namespace fedauc {

/// Shared randomness the input parties agree on before a run; the aggregator
/// never sees any of it. r3..r8 are multipliers with 32 significant bits
/// (r0 = r3*r4, r1 = r5*r6, r2 = r7*r8 are formed exactly during unmasking).
/// tr/fr have N+1 rows (pair thresholds, class totals, DT/DF) of M
/// integer-valued offsets each, summing to zero across parties.
struct CommonRandomness {
    double r3 = 1, r4 = 1, r5 = 1, r6 = 1, r7 = 1, r8 = 1;
    std::vector<std::vector<double>> tr;  // (N+1) x M
    std::vector<std::vector<double>> fr;  // (N+1) x M
    std::vector<std::uint32_t> pi;        // permutation of S*N share slots
    std::vector<std::uint8_t> b;          // split-direction bit per threshold group
    int split_count = 2;
    int n_parties = 0;
    int n_points = 0;
};

/// Integer half-range of the zero-sum mask and additive-share draws.
inline constexpr std::int64_t kMaskHalfRange = 1 << 16;

struct MaskedSubmission {
    CipherVector enc_t_all;  // S*N permuted shares
    CipherVector enc_f_all;
    CipherVector enc_dt;
    CipherVector enc_df;
    int party_id = 0;
};

struct RunOutput {
    CipherVector enc_blinded_num;    // c * (r0*num + r1*denom)
    CipherVector enc_blinded_denom;  // c * r2*denom
};

struct VerifiedAuc {
    double auc = 0;
    double auc_prime = 0;
    bool accepted = false;
    double tolerance = 0;

    /// The verified value; throws VerificationFailed (carrying both results)
    /// when the equality check was rejected.
    double require_accepted() const;
};

CommonRandomness gen_common_randomness(int n_parties, int n_points, int split_count,
                                       std::uint64_t seed);

/// Steps 3-8: multiplier+mask application, bit-directed additive splitting
/// with a replicated co-factor, concatenation, common permutation, encryption.
/// `rng` supplies the party-local share randomness.
MaskedSubmission client_mask_split(const CountVector& counts, const CommonRandomness& cr,
                                   int party_id, HeBackend& backend, const PublicKey& pk,
                                   std::mt19937_64& rng);

struct AggregatorResult {
    RunOutput output;
    BlindMask mask;
};

/// Steps 9-11: slot-wise sums, packed inner product plus DT*DF, per-run mask.
AggregatorResult aggregator_compute(HeBackend& backend,
                                    const std::vector<MaskedSubmission>& submissions,
                                    std::mt19937_64& rng);

/// Step 12 + unmasking: recovers num/(2*TP*FP) from the decrypted pair,
///   ((u/v - r1/r2) * (r2/r0)) / 2
/// evaluated cancellation-free as (u*r2 - v*r1) / (2*r0*v).
double client_unmask(const Dyadic& u, const Dyadic& v, const CommonRandomness& cr);

/// Override points for a (possibly malicious) aggregator. The honest
/// aggregator passes everything through unchanged.
class AggregatorBehavior {
public:
    virtual ~AggregatorBehavior() = default;
    virtual std::vector<MaskedSubmission> intercept_submissions(
        HeBackend& backend, std::vector<MaskedSubmission> submissions, int run_index) {
        (void)backend;
        (void)run_index;
        return submissions;
    }
    virtual RunOutput intercept_output(HeBackend& backend, RunOutput output, int run_index) {
        (void)backend;
        (void)run_index;
        return output;
    }
};

struct MaliciousConfig {
    int split_count = 4;
    std::uint64_t seed = 0;
    /// Negative means auto: 0 on the exact backend while the masked integers
    /// fit the exact-arithmetic envelope (1e-12 beyond it), 5e-6 under noise.
    double tolerance = -1.0;
};

double default_verification_tolerance(const HeBackend& backend,
                                      const std::vector<CountVector>& counts, int n_parties,
                                      int split_count);

/// Both runs end to end with independent randomness; accepted iff the two
/// unmasked results agree within the tolerance.
VerifiedAuc run_verified(HeBackend& backend, const std::vector<LocalDataset>& datasets,
                         const DecisionGrid& grid, const KeyPair& keys,
                         const MaliciousConfig& config, AggregatorBehavior* behavior = nullptr,
                         Bus* bus = nullptr, PhaseTimings* timings = nullptr);

}  // namespace fedauc

#pragma once

#include <random>
#include <utility>
#include <vector>

#include "fedauc/bus.hpp"
#include "fedauc/he.hpp"
#include "fedauc/metrics.hpp"

namespace fedauc {

/// One party's encrypted statistics: T packed in slots 0..N-2, F likewise,
/// and the two class totals in slot 0 of their own ciphertexts. Exactly four
/// ciphertexts regardless of the local dataset size.
struct ClientSubmission {
    CipherVector enc_t;
    CipherVector enc_f;
    CipherVector enc_tp_total;
    CipherVector enc_fp_total;
    int party_id = 0;
};

struct AggregatedStats {
    CipherVector enc_t;
    CipherVector enc_f;
    CipherVector enc_tp_total;
    CipherVector enc_fp_total;
};

struct BlindMask {
    double c = 1.0;
};

struct BlindedOutput {
    CipherVector enc_num;
    CipherVector enc_denom;
};

/// Steps 1-4: local counts, pair transform, packing, encryption.
ClientSubmission client_prepare(const LocalDataset& dataset, const DecisionGrid& grid,
                                HeBackend& backend, const PublicKey& pk);

/// Steps 5-6: slot-wise homomorphic sums across parties.
AggregatedStats aggregate(HeBackend& backend, const std::vector<ClientSubmission>& submissions);

/// Step 7: enc_num = sum of slotwise T*F products, enc_denom = 2*TP*FP.
std::pair<CipherVector, CipherVector> compute_num_denom(HeBackend& backend,
                                                        const AggregatedStats& stats);

/// Step 8: same multiplicative mask on both ciphertexts. The mask is
/// log-uniform over [2^20, 2^40] and stays with the aggregator.
std::pair<BlindedOutput, BlindMask> blind(HeBackend& backend, const CipherVector& enc_num,
                                          const CipherVector& enc_denom, std::mt19937_64& rng);

/// Step 9: decrypt and divide; the mask cancels in the ratio.
double client_finalize(HeBackend& backend, const BlindedOutput& output, const SecretKey& sk);

/// Whole pipeline. When `bus` is non-null every client->aggregator and
/// aggregator->client message is serialized through it.
double run_semi_honest(HeBackend& backend, const std::vector<LocalDataset>& datasets,
                       const DecisionGrid& grid, const KeyPair& keys, std::uint64_t seed,
                       Bus* bus = nullptr, PhaseTimings* timings = nullptr);

/// Residual of the Appendix-A masking bijection: given the blinded pair and a
/// candidate (num0, denom0) with the same ratio, reconstruct c0 = num'/num0
/// and return the relative mismatch |denom' - denom0*c0| / |denom'|.
double masking_bijection_residual(double num_prime, double denom_prime, double num0,
                                  double denom0);

}  // namespace fedauc

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fedauc/dyadic.hpp"

namespace fedauc {

/// CKKS-style parameter set. Defaults follow the reference configuration:
/// ring dimension 2^14 (8192 packed slots), 50-bit scaling factor, 128-bit
/// security. noise_std only applies to the noise-model backend.
struct HeParams {
    std::uint32_t ring_dimension = 1u << 14;
    int scale_bits = 50;
    int security_bits = 128;
    double noise_std = 1e-9;

    std::uint32_t slot_count() const { return ring_dimension / 2; }
    bool operator==(const HeParams&) const = default;
};

/// Fresh ciphertexts carry this many multiplicative levels: one ciphertext
/// product plus one scalar mask is the whole circuit either protocol needs.
inline constexpr int kFreshLevel = 2;

struct PublicKey {
    HeParams params;
    std::uint64_t key_id = 0;
};

struct SecretKey {
    HeParams params;
    std::uint64_t key_id = 0;
};

struct KeyPair {
    PublicKey public_key;
    SecretKey private_key;
};

using PlainVector = std::vector<double>;

/// Packed-slot ciphertext. The payload is opaque to protocol code; `level`
/// tracks the remaining multiplicative depth. Serialized size depends on the
/// parameters only, never on slot contents or how many slots are occupied.
class CipherVector {
public:
    CipherVector() = default;

    int level() const { return level_; }
    const HeParams& params() const { return params_; }
    std::uint32_t backend_tag() const { return backend_tag_; }
    std::uint64_t key_id() const { return key_id_; }
    std::size_t serialized_size() const;

private:
    friend class MockBackend;
    friend struct CiphertextMalleability;

    std::uint32_t backend_tag_ = 0;
    HeParams params_;
    std::uint64_t key_id_ = 0;
    int level_ = 0;
    std::vector<Dyadic> slots_;  // occupied prefix; slots beyond are zero
};

/// Backend contract. All operations are pure: inputs are never mutated.
class HeBackend {
public:
    virtual ~HeBackend() = default;

    virtual std::string name() const = 0;
    virtual std::uint32_t tag() const = 0;
    virtual const HeParams& params() const = 0;

    /// Deterministic under a fixed seed.
    virtual KeyPair keygen(std::uint64_t seed) = 0;

    virtual CipherVector encrypt(const PublicKey& pk, std::span<const double> plain) = 0;
    virtual PlainVector decrypt(const SecretKey& sk, const CipherVector& ct) const = 0;

    /// Slot values without the final rounding to double. On the exact backend
    /// this is the bit-exact circuit output; protocol finalization uses it so
    /// the unmasking algebra cancels exactly.
    virtual std::vector<Dyadic> decrypt_exact(const SecretKey& sk, const CipherVector& ct) const = 0;

    virtual CipherVector add_ct(const CipherVector& a, const CipherVector& b) = 0;
    /// Requires one remaining level on both operands; consumes it.
    virtual CipherVector mul_ct(const CipherVector& a, const CipherVector& b) = 0;
    /// Requires and consumes one level.
    virtual CipherVector mul_scalar(const CipherVector& a, double s) = 0;
    /// Sum of all slots, placed in slot 0. Costs no level.
    virtual CipherVector sum_slots(const CipherVector& a) = 0;

    /// Length-prefixed opaque bytes with a 4-byte backend tag; size is a
    /// function of the parameters only.
    virtual std::vector<std::uint8_t> serialize(const CipherVector& ct) const = 0;
    virtual CipherVector deserialize(std::span<const std::uint8_t> bytes) const = 0;
};

enum class BackendKind { exact, noise_model };

BackendKind backend_kind_from_string(const std::string& name);
std::string to_string(BackendKind kind);

/// `seed` drives keygen determinism and (for the noise model) the noise
/// stream. The exact backend ignores noise_std and computes every operation
/// without rounding; the noise model additionally draws one absolute
/// N(0, noise_std) perturbation per occupied slot per operation, so the error
/// after k operations composes from at most k+1 independent draws.
std::unique_ptr<HeBackend> make_backend(BackendKind kind, const HeParams& params,
                                        std::uint64_t seed);

/// Fixed per-ciphertext wire size: 8-byte prefix (length + tag) plus
/// 2 polynomials x ring_dimension coefficients x 8 bytes.
std::size_t ciphertext_wire_size(const HeParams& params);

/// Ciphertext manipulations a malicious aggregator can perform without the
/// secret key (CKKS ciphertexts are malleable). These bypass the level
/// bookkeeping on purpose and exist for the adversary harness only.
struct CiphertextMalleability {
    /// Cyclically rotate the first `width` slots by `k`.
    static CipherVector rotate(const CipherVector& ct, int k, std::uint32_t width);
    /// Scale every slot without consuming a level.
    static CipherVector scale(const CipherVector& ct, double factor);
    /// Add `delta` to the given slots.
    static CipherVector add_to_slots(const CipherVector& ct, std::span<const std::uint32_t> slots,
                                     double delta);
    /// Scale only the given slots.
    static CipherVector scale_slots(const CipherVector& ct, std::span<const std::uint32_t> slots,
                                    double factor);
};

}  // namespace fedauc

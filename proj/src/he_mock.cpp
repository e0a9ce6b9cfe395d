#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "fedauc/errors.hpp"
#include "fedauc/he.hpp"
#include "fedauc/rng.hpp"

namespace fedauc {

namespace {

constexpr std::uint32_t kExactTag = 0x45584354;  // "EXCT"
constexpr std::uint32_t kNoiseTag = 0x4e4f4953;  // "NOIS"

void validate_params(const HeParams& p) {
    if (p.ring_dimension < 4 || (p.ring_dimension & (p.ring_dimension - 1)) != 0) {
        throw UnsupportedParams("ring_dimension must be a power of two >= 4");
    }
    if (p.scale_bits < 30) throw UnsupportedParams("scale_bits must be >= 30");
    if (!(p.noise_std >= 0.0)) throw UnsupportedParams("noise_std must be >= 0");
}

template <typename T>
void put(std::vector<std::uint8_t>& buf, std::size_t& off, T value) {
    std::memcpy(buf.data() + off, &value, sizeof(T));
    off += sizeof(T);
}

template <typename T>
T get(std::span<const std::uint8_t> buf, std::size_t& off) {
    if (off + sizeof(T) > buf.size()) throw ParamMismatch("ciphertext blob truncated");
    T value;
    std::memcpy(&value, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return value;
}

}  // namespace

std::size_t ciphertext_wire_size(const HeParams& params) {
    // 4-byte length prefix + 4-byte backend tag + 2 polynomials of
    // ring_dimension 8-byte coefficients
    return 8 + 2ull * params.ring_dimension * 8;
}

std::size_t CipherVector::serialized_size() const { return ciphertext_wire_size(params_); }

class MockBackend final : public HeBackend {
public:
    MockBackend(BackendKind kind, const HeParams& params, std::uint64_t seed)
        : kind_(kind), params_(params), noise_rng_(make_rng(seed, 0x6e6f6973)) {
        validate_params(params_);
        if (kind_ == BackendKind::exact) params_.noise_std = 0.0;
    }

    std::string name() const override {
        return kind_ == BackendKind::exact ? "exact" : "noise_model";
    }
    std::uint32_t tag() const override {
        return kind_ == BackendKind::exact ? kExactTag : kNoiseTag;
    }
    const HeParams& params() const override { return params_; }

    KeyPair keygen(std::uint64_t seed) override {
        std::uint64_t key_id = mix_seed(seed, 0x6b657967);
        return KeyPair{PublicKey{params_, key_id}, SecretKey{params_, key_id}};
    }

    CipherVector encrypt(const PublicKey& pk, std::span<const double> plain) override {
        if (!(pk.params == params_)) throw ParamMismatch("public key params mismatch");
        if (plain.size() > params_.slot_count()) {
            throw SlotOverflow("plaintext needs " + std::to_string(plain.size()) +
                               " slots, backend has " + std::to_string(params_.slot_count()));
        }
        CipherVector ct;
        ct.backend_tag_ = tag();
        ct.params_ = params_;
        ct.key_id_ = pk.key_id;
        ct.level_ = kFreshLevel;
        ct.slots_.reserve(plain.size());
        for (double v : plain) {
            if (!std::isfinite(v)) throw SlotOverflow("non-finite plaintext slot");
            ct.slots_.push_back(Dyadic::from_double(v));
        }
        inject_noise(ct);
        return ct;
    }

    PlainVector decrypt(const SecretKey& sk, const CipherVector& ct) const override {
        check_key(sk, ct);
        PlainVector out;
        out.reserve(ct.slots_.size());
        for (const Dyadic& d : ct.slots_) out.push_back(d.to_double());
        return out;
    }

    std::vector<Dyadic> decrypt_exact(const SecretKey& sk, const CipherVector& ct) const override {
        check_key(sk, ct);
        return ct.slots_;
    }

    CipherVector add_ct(const CipherVector& a, const CipherVector& b) override {
        check_compat(a, b);
        CipherVector out = a.slots_.size() >= b.slots_.size() ? a : b;
        const CipherVector& small = a.slots_.size() >= b.slots_.size() ? b : a;
        out.level_ = std::min(a.level_, b.level_);
        for (std::size_t i = 0; i < small.slots_.size(); ++i) {
            out.slots_[i] += small.slots_[i];
        }
        inject_noise(out);
        return out;
    }

    CipherVector mul_ct(const CipherVector& a, const CipherVector& b) override {
        check_compat(a, b);
        if (a.level_ < 1 || b.level_ < 1) {
            throw DepthExhausted("ciphertext product needs one remaining level");
        }
        CipherVector out;
        out.backend_tag_ = a.backend_tag_;
        out.params_ = a.params_;
        out.key_id_ = a.key_id_;
        out.level_ = std::min(a.level_, b.level_) - 1;
        std::size_t n = std::min(a.slots_.size(), b.slots_.size());
        out.slots_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.slots_.push_back(a.slots_[i] * b.slots_[i]);
        inject_noise(out);
        return out;
    }

    CipherVector mul_scalar(const CipherVector& a, double s) override {
        check_owned(a);
        if (!std::isfinite(s)) throw SlotOverflow("non-finite scalar");
        if (a.level_ < 1) throw DepthExhausted("scalar product needs one remaining level");
        CipherVector out = a;
        out.level_ = a.level_ - 1;
        Dyadic ds = Dyadic::from_double(s);
        for (Dyadic& slot : out.slots_) slot *= ds;
        inject_noise(out);
        return out;
    }

    CipherVector sum_slots(const CipherVector& a) override {
        check_owned(a);
        CipherVector out = a;
        Dyadic total;
        for (const Dyadic& slot : a.slots_) total += slot;
        out.slots_.assign(1, total);
        inject_noise(out);
        return out;
    }

    std::vector<std::uint8_t> serialize(const CipherVector& ct) const override {
        std::vector<std::uint8_t> buf(ciphertext_wire_size(params_), 0);
        std::size_t off = 0;
        put<std::uint32_t>(buf, off, static_cast<std::uint32_t>(buf.size() - 4));
        put<std::uint32_t>(buf, off, ct.backend_tag_);
        put<std::uint32_t>(buf, off, ct.params_.ring_dimension);
        put<std::int32_t>(buf, off, ct.level_);
        put<std::uint64_t>(buf, off, ct.key_id_);
        put<std::uint32_t>(buf, off, static_cast<std::uint32_t>(ct.slots_.size()));
        for (const Dyadic& slot : ct.slots_) {
            encode_slot(buf, off, slot);
        }
        return buf;
    }

    CipherVector deserialize(std::span<const std::uint8_t> bytes) const override {
        std::size_t off = 0;
        auto body_len = get<std::uint32_t>(bytes, off);
        if (body_len + 4 != bytes.size()) throw ParamMismatch("ciphertext length prefix mismatch");
        CipherVector ct;
        ct.backend_tag_ = get<std::uint32_t>(bytes, off);
        if (ct.backend_tag_ != tag()) throw ParamMismatch("ciphertext backend tag mismatch");
        ct.params_ = params_;
        auto ring = get<std::uint32_t>(bytes, off);
        if (ring != params_.ring_dimension) throw ParamMismatch("ciphertext ring dimension mismatch");
        ct.level_ = get<std::int32_t>(bytes, off);
        ct.key_id_ = get<std::uint64_t>(bytes, off);
        auto n_slots = get<std::uint32_t>(bytes, off);
        ct.slots_.reserve(n_slots);
        for (std::uint32_t i = 0; i < n_slots; ++i) {
            ct.slots_.push_back(decode_slot(bytes, off));
        }
        return ct;
    }

private:
    BackendKind kind_;
    HeParams params_;
    std::mt19937_64 noise_rng_;

    void check_key(const SecretKey& sk, const CipherVector& ct) const {
        if (!(sk.params == ct.params_)) throw ParamMismatch("secret key params mismatch");
        if (sk.key_id != ct.key_id_) {
            throw KeyMismatch("ciphertext was not encrypted under this key");
        }
    }

    void check_owned(const CipherVector& a) const {
        if (a.backend_tag_ != tag() || !(a.params_ == params_)) {
            throw ParamMismatch("ciphertext belongs to a different backend");
        }
    }

    void check_compat(const CipherVector& a, const CipherVector& b) const {
        check_owned(a);
        if (a.backend_tag_ != b.backend_tag_ || !(a.params_ == b.params_)) {
            throw ParamMismatch("ciphertext parameter mismatch");
        }
        if (a.key_id_ != b.key_id_) throw ParamMismatch("ciphertexts under different keys");
    }

    void inject_noise(CipherVector& ct) {
        if (params_.noise_std <= 0.0) return;
        std::normal_distribution<double> gauss(0.0, params_.noise_std);
        for (Dyadic& slot : ct.slots_) {
            slot += Dyadic::from_double(gauss(noise_rng_));
        }
    }

    // Slots are stored losslessly; the fixed body leaves ample room for the
    // small magnitudes depth-2 circuits produce.
    static void encode_slot(std::vector<std::uint8_t>& buf, std::size_t& off, const Dyadic& d) {
        double as_double = d.to_double();
        Dyadic roundtrip = Dyadic::from_double(as_double);
        bool exact = roundtrip == d;
        if (off + 10 > buf.size()) throw SlotOverflow("ciphertext body overflow");
        if (exact) {
            put<std::uint8_t>(buf, off, 0);
            if (off + 8 > buf.size()) throw SlotOverflow("ciphertext body overflow");
            put<double>(buf, off, as_double);
            return;
        }
        // wide slot: split into two dyadics that sum exactly
        put<std::uint8_t>(buf, off, 1);
        Dyadic head = roundtrip;
        Dyadic tail = d + (-head);
        if (off + 8 > buf.size()) throw SlotOverflow("ciphertext body overflow");
        put<double>(buf, off, as_double);
        encode_slot(buf, off, tail);
    }

    static Dyadic decode_slot(std::span<const std::uint8_t> buf, std::size_t& off) {
        auto kind = get<std::uint8_t>(buf, off);
        auto head = Dyadic::from_double(get<double>(buf, off));
        if (kind == 0) return head;
        return head + decode_slot(buf, off);
    }
};

BackendKind backend_kind_from_string(const std::string& name) {
    if (name == "exact") return BackendKind::exact;
    if (name == "noise" || name == "noise_model") return BackendKind::noise_model;
    throw InvalidConfig("unknown backend: " + name);
}

std::string to_string(BackendKind kind) {
    return kind == BackendKind::exact ? "exact" : "noise_model";
}

std::unique_ptr<HeBackend> make_backend(BackendKind kind, const HeParams& params,
                                        std::uint64_t seed) {
    return std::make_unique<MockBackend>(kind, params, seed);
}

CipherVector CiphertextMalleability::rotate(const CipherVector& ct, int k, std::uint32_t width) {
    CipherVector out = ct;
    if (width == 0) return out;
    out.slots_.resize(width);
    int shift = ((k % static_cast<int>(width)) + static_cast<int>(width)) % static_cast<int>(width);
    std::rotate(out.slots_.begin(), out.slots_.begin() + shift, out.slots_.end());
    return out;
}

CipherVector CiphertextMalleability::scale(const CipherVector& ct, double factor) {
    CipherVector out = ct;
    Dyadic f = Dyadic::from_double(factor);
    for (Dyadic& slot : out.slots_) slot *= f;
    return out;
}

CipherVector CiphertextMalleability::add_to_slots(const CipherVector& ct,
                                                  std::span<const std::uint32_t> slots,
                                                  double delta) {
    CipherVector out = ct;
    Dyadic d = Dyadic::from_double(delta);
    for (std::uint32_t idx : slots) {
        if (idx >= out.slots_.size()) out.slots_.resize(idx + 1);
        out.slots_[idx] += d;
    }
    return out;
}

CipherVector CiphertextMalleability::scale_slots(const CipherVector& ct,
                                                 std::span<const std::uint32_t> slots,
                                                 double factor) {
    CipherVector out = ct;
    Dyadic f = Dyadic::from_double(factor);
    for (std::uint32_t idx : slots) {
        if (idx >= out.slots_.size()) continue;
        out.slots_[idx] *= f;
    }
    return out;
}

}  // namespace fedauc

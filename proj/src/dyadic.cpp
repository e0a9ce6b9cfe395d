#include "fedauc/dyadic.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fedauc {

namespace {

std::size_t limb_bits(std::uint64_t v) {
    return v == 0 ? 0 : 64u - static_cast<std::size_t>(__builtin_clzll(v));
}

// Rounds an integer quotient/mantissa with a sticky flag to a 53-bit double.
// `top` holds the most significant bits of the value (at least 54 of them when
// the value needs rounding), `exp` is the power of two multiplying `top`.
double round_mantissa(std::uint64_t top, bool sticky, std::int64_t exp, int sign) {
    std::size_t bits = limb_bits(top);
    if (bits > 53) {
        std::size_t drop = bits - 53;
        std::uint64_t kept = top >> drop;
        std::uint64_t guard = (top >> (drop - 1)) & 1u;
        bool lower = sticky || (drop > 1 && (top & ((1ull << (drop - 1)) - 1u)) != 0);
        if (guard && (lower || (kept & 1u))) {
            kept += 1;  // 2^53 is still exactly representable, no special case
        }
        top = kept;
        exp += static_cast<std::int64_t>(drop);
    }
    return std::ldexp(static_cast<double>(sign) * static_cast<double>(top),
                      static_cast<int>(exp));
}

}  // namespace

Dyadic Dyadic::from_double(double value) {
    Dyadic out;
    if (value == 0.0) return out;
    if (!std::isfinite(value)) throw std::domain_error("Dyadic: non-finite input");
    out.sign_ = std::signbit(value) ? -1 : 1;
    int e = 0;
    double f = std::frexp(std::fabs(value), &e);  // f in [0.5, 1)
    auto mant = static_cast<std::uint64_t>(std::ldexp(f, 53));
    out.mag_ = {mant};
    out.exp_ = static_cast<std::int64_t>(e) - 53;
    out.normalize();
    return out;
}

Dyadic Dyadic::from_int64(std::int64_t value) {
    Dyadic out;
    if (value == 0) return out;
    out.sign_ = value < 0 ? -1 : 1;
    out.mag_ = {value < 0 ? 0ull - static_cast<std::uint64_t>(value)
                          : static_cast<std::uint64_t>(value)};
    out.exp_ = 0;
    out.normalize();
    return out;
}

void Dyadic::normalize() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) {
        sign_ = 1;
        exp_ = 0;
        return;
    }
    // strip trailing zero bits into the exponent to keep magnitudes tight
    std::size_t zero_limbs = 0;
    while (mag_[zero_limbs] == 0) ++zero_limbs;
    if (zero_limbs > 0) {
        mag_.erase(mag_.begin(), mag_.begin() + static_cast<std::ptrdiff_t>(zero_limbs));
        exp_ += static_cast<std::int64_t>(zero_limbs) * 64;
    }
    unsigned tz = static_cast<unsigned>(__builtin_ctzll(mag_[0]));
    if (tz > 0) {
        std::uint64_t carry_mask = (1ull << tz) - 1u;
        for (std::size_t i = 0; i + 1 < mag_.size(); ++i) {
            mag_[i] = (mag_[i] >> tz) | ((mag_[i + 1] & carry_mask) << (64 - tz));
        }
        mag_.back() >>= tz;
        exp_ += tz;
        while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    }
}

std::size_t Dyadic::bit_length() const {
    if (mag_.empty()) return 0;
    return (mag_.size() - 1) * 64 + limb_bits(mag_.back());
}

std::vector<std::uint64_t> Dyadic::shifted_left(const std::vector<std::uint64_t>& limbs,
                                                std::uint64_t bits) {
    if (bits > (1ull << 22)) throw std::overflow_error("Dyadic: exponent span too large");
    std::size_t limb_shift = bits / 64;
    unsigned bit_shift = bits % 64;
    std::vector<std::uint64_t> out(limbs.size() + limb_shift + 1, 0);
    for (std::size_t i = 0; i < limbs.size(); ++i) {
        out[i + limb_shift] |= bit_shift ? (limbs[i] << bit_shift) : limbs[i];
        if (bit_shift) out[i + limb_shift + 1] |= limbs[i] >> (64 - bit_shift);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

int Dyadic::compare_mag(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<std::uint64_t> Dyadic::add_mag(const std::vector<std::uint64_t>& a,
                                           const std::vector<std::uint64_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<std::uint64_t> out(big.size() + 1, 0);
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        unsigned __int128 sum = carry + big[i] + (i < small.size() ? small[i] : 0);
        out[i] = static_cast<std::uint64_t>(sum);
        carry = sum >> 64;
    }
    out[big.size()] = static_cast<std::uint64_t>(carry);
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<std::uint64_t> Dyadic::sub_mag(const std::vector<std::uint64_t>& a,
                                           const std::vector<std::uint64_t>& b) {
    // requires |a| >= |b|
    std::vector<std::uint64_t> out(a.size(), 0);
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t bi = i < b.size() ? b[i] : 0;
        std::uint64_t ai = a[i];
        std::uint64_t d = ai - bi - borrow;
        borrow = (ai < bi + borrow || (bi + borrow < bi)) ? 1 : 0;
        out[i] = d;
    }
    assert(borrow == 0);
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

Dyadic Dyadic::operator-() const {
    Dyadic out = *this;
    if (!out.mag_.empty()) out.sign_ = -out.sign_;
    return out;
}

Dyadic Dyadic::operator+(const Dyadic& rhs) const {
    if (is_zero()) return rhs;
    if (rhs.is_zero()) return *this;
    std::int64_t common = exp_ < rhs.exp_ ? exp_ : rhs.exp_;
    auto a = shifted_left(mag_, static_cast<std::uint64_t>(exp_ - common));
    auto b = shifted_left(rhs.mag_, static_cast<std::uint64_t>(rhs.exp_ - common));
    Dyadic out;
    out.exp_ = common;
    if (sign_ == rhs.sign_) {
        out.sign_ = sign_;
        out.mag_ = add_mag(a, b);
    } else {
        int cmp = compare_mag(a, b);
        if (cmp == 0) return Dyadic{};
        if (cmp > 0) {
            out.sign_ = sign_;
            out.mag_ = sub_mag(a, b);
        } else {
            out.sign_ = rhs.sign_;
            out.mag_ = sub_mag(b, a);
        }
    }
    out.normalize();
    return out;
}

Dyadic Dyadic::operator*(const Dyadic& rhs) const {
    if (is_zero() || rhs.is_zero()) return Dyadic{};
    Dyadic out;
    out.sign_ = sign_ * rhs.sign_;
    out.exp_ = exp_ + rhs.exp_;
    out.mag_.assign(mag_.size() + rhs.mag_.size(), 0);
    for (std::size_t i = 0; i < mag_.size(); ++i) {
        unsigned __int128 carry = 0;
        for (std::size_t j = 0; j < rhs.mag_.size(); ++j) {
            unsigned __int128 cur = static_cast<unsigned __int128>(mag_[i]) * rhs.mag_[j] +
                                    out.mag_[i + j] + carry;
            out.mag_[i + j] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        std::size_t k = i + rhs.mag_.size();
        while (carry) {
            unsigned __int128 cur = carry + out.mag_[k];
            out.mag_[k] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
            ++k;
        }
    }
    out.normalize();
    return out;
}

bool Dyadic::operator==(const Dyadic& rhs) const {
    // canonical after normalize(): direct comparison is exact equality
    return sign_ == rhs.sign_ && exp_ == rhs.exp_ && mag_ == rhs.mag_;
}

double Dyadic::to_double() const {
    if (is_zero()) return 0.0;
    std::size_t bits = bit_length();
    if (bits <= 64) {
        return round_mantissa(mag_[0], false, exp_, sign_);
    }
    // pull the top 64 bits plus a sticky flag for everything below
    std::size_t shift = bits - 64;
    std::size_t limb = shift / 64;
    unsigned off = shift % 64;
    std::uint64_t top = mag_[limb] >> off;
    if (off) top |= mag_[limb + 1] << (64 - off);
    bool sticky = false;
    for (std::size_t i = 0; i <= limb && !sticky; ++i) {
        std::uint64_t below = (i == limb && off) ? (mag_[i] & ((1ull << off) - 1u))
                              : (i == limb)     ? 0
                                                : mag_[i];
        sticky = below != 0;
    }
    return round_mantissa(top, sticky, exp_ + static_cast<std::int64_t>(shift), sign_);
}

double Dyadic::div_to_double(const Dyadic& a, const Dyadic& b) {
    if (b.is_zero()) {
        return (a.sign_ * b.sign_ > 0 ? 1.0 : -1.0) * (a.is_zero() ? 0.0 / 0.0 : 1.0 / 0.0);
    }
    if (a.is_zero()) return 0.0;

    // scale the numerator so the integer quotient carries 55+ significant bits
    std::int64_t k = 55 + static_cast<std::int64_t>(b.bit_length()) -
                     static_cast<std::int64_t>(a.bit_length());
    auto num = k > 0 ? shifted_left(a.mag_, static_cast<std::uint64_t>(k)) : a.mag_;
    auto den = k < 0 ? shifted_left(b.mag_, static_cast<std::uint64_t>(-k)) : b.mag_;

    // binary long division; quotient fits in 64 bits by construction
    std::uint64_t quotient = 0;
    std::vector<std::uint64_t> rem;
    std::size_t nbits = (num.size() - 1) * 64 + limb_bits(num.back());
    for (std::size_t i = nbits; i-- > 0;) {
        rem = shifted_left(rem, 1);
        if ((num[i / 64] >> (i % 64)) & 1u) {
            if (rem.empty())
                rem.push_back(1);
            else
                rem = add_mag(rem, {1});
        }
        quotient <<= 1;
        if (compare_mag(rem, den) >= 0) {
            rem = sub_mag(rem, den);
            quotient |= 1;
        }
    }
    bool sticky = !rem.empty();
    return round_mantissa(quotient, sticky, a.exp_ - b.exp_ - k, a.sign_ * b.sign_);
}

}  // namespace fedauc

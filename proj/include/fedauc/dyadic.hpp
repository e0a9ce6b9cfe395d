#pragma once

#include <cstdint>
#include <vector>

namespace fedauc {

/// Exact dyadic rational: sign * magnitude * 2^exponent, with an arbitrary-size
/// magnitude. Closed under addition and multiplication, so depth-limited
/// circuits over doubles can be evaluated without any rounding; the only
/// rounding happens on conversion back to double (round-to-nearest-even).
///
/// Used as the slot representation of the mock HE backends. Magnitudes stay
/// small (a handful of 64-bit limbs) for the circuits this project runs.
class Dyadic {
public:
    Dyadic() = default;

    static Dyadic from_double(double value);
    static Dyadic from_int64(std::int64_t value);

    bool is_zero() const { return mag_.empty(); }
    bool is_negative() const { return sign_ < 0 && !mag_.empty(); }

    Dyadic operator-() const;
    Dyadic operator+(const Dyadic& rhs) const;
    Dyadic operator-(const Dyadic& rhs) const { return *this + (-rhs); }
    Dyadic operator*(const Dyadic& rhs) const;
    Dyadic& operator+=(const Dyadic& rhs) {
        *this = *this + rhs;
        return *this;
    }
    Dyadic& operator*=(const Dyadic& rhs) {
        *this = *this * rhs;
        return *this;
    }

    bool operator==(const Dyadic& rhs) const;

    /// Correctly rounded conversion (nearest, ties to even).
    double to_double() const;

    /// Correctly rounded quotient a/b as a double. b must be nonzero;
    /// a zero divisor yields IEEE inf/nan semantics via plain division.
    static double div_to_double(const Dyadic& a, const Dyadic& b);

    /// Number of significant bits of the magnitude (0 for zero).
    std::size_t bit_length() const;

private:
    int sign_ = 1;
    std::int64_t exp_ = 0;
    std::vector<std::uint64_t> mag_;  // little-endian limbs, no leading zero limb

    void normalize();
    static std::vector<std::uint64_t> shifted_left(const std::vector<std::uint64_t>& limbs,
                                                   std::uint64_t bits);
    static int compare_mag(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);
    static std::vector<std::uint64_t> add_mag(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b);
    static std::vector<std::uint64_t> sub_mag(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b);
};

}  // namespace fedauc

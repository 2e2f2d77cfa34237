#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace ptime {

using Rational = mpq_class;

/// Parses a rational literal: optional sign followed by an integer, "p/q"
/// with q > 0, or a decimal with a finite expansion ("1.25", "-.5").
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// num/den in canonical form; den must be nonzero. Use instead of the
/// two-argument mpq_class constructor, which does not reduce.
Rational ratio(long num, long den);

/// Canonical rendering: integers without denominator, otherwise reduced "p/q".
std::string to_string(const Rational& q);

/// Exact rational extended with -inf and +inf. Scalar of the max-plus
/// semiring; +inf only appears as the result of closures.
class ExtendedRational {
public:
    enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

    ExtendedRational() : kind_(Kind::NegInf) {}
    ExtendedRational(const Rational& q) : kind_(Kind::Finite), value_(q) { value_.canonicalize(); }
    ExtendedRational(long v) : kind_(Kind::Finite), value_(v) {}
    ExtendedRational(int v) : kind_(Kind::Finite), value_(v) {}

    static ExtendedRational neg_inf() { return ExtendedRational(); }
    static ExtendedRational pos_inf() {
        ExtendedRational r;
        r.kind_ = Kind::PosInf;
        return r;
    }
    static ExtendedRational zero() { return ExtendedRational(0); }

    /// Accepts the rational grammar of parse_rational plus "inf", "+inf", "-inf".
    static ExtendedRational parse(std::string_view text);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }

    /// Finite value; throws std::logic_error on an infinity.
    const Rational& value() const;

    std::string str() const;

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
    friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b);

    /// Ordinary negation; swaps the infinities.
    ExtendedRational operator-() const;

private:
    Kind kind_;
    Rational value_;
};

std::ostream& operator<<(std::ostream& os, const ExtendedRational& x);

/// a ⊕ b = max(a, b).
ExtendedRational oplus(const ExtendedRational& a, const ExtendedRational& b);

/// a ⊗ b = a + b, with -inf absorbing (so +inf ⊗ -inf = -inf).
ExtendedRational otimes(const ExtendedRational& a, const ExtendedRational& b);

}  // namespace ptime

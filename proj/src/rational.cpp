#include "ptime/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace ptime {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

[[noreturn]] void bad_literal(std::string_view text) {
    throw std::invalid_argument("invalid rational literal '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational result;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            bad_literal(text);
        }
        mpz_class d(std::string(den), 10);
        if (d == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        result = Rational(mpz_class(std::string(num), 10), d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac))) {
            bad_literal(text);
        }
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        result = Rational(digits, scale);
    } else {
        if (!all_digits(s)) {
            bad_literal(text);
        }
        result = Rational(mpz_class(std::string(s), 10));
    }
    result.canonicalize();
    return negative ? Rational(-result) : result;
}

Rational ratio(long num, long den) {
    if (den == 0) {
        throw std::invalid_argument("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

ExtendedRational ExtendedRational::parse(std::string_view text) {
    if (text == "inf" || text == "+inf") {
        return pos_inf();
    }
    if (text == "-inf") {
        return neg_inf();
    }
    return ExtendedRational(parse_rational(text));
}

const Rational& ExtendedRational::value() const {
    if (kind_ != Kind::Finite) {
        throw std::logic_error("value() on infinite ExtendedRational");
    }
    return value_;
}

std::string ExtendedRational::str() const {
    switch (kind_) {
        case Kind::NegInf:
            return "-inf";
        case Kind::PosInf:
            return "inf";
        case Kind::Finite:
            break;
    }
    return to_string(value_);
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.kind_ != b.kind_) {
        return false;
    }
    return a.kind_ != ExtendedRational::Kind::Finite || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.kind_ != b.kind_) {
        return a.kind_ <=> b.kind_;
    }
    if (a.kind_ != ExtendedRational::Kind::Finite) {
        return std::strong_ordering::equal;
    }
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

ExtendedRational ExtendedRational::operator-() const {
    switch (kind_) {
        case Kind::NegInf:
            return pos_inf();
        case Kind::PosInf:
            return neg_inf();
        case Kind::Finite:
            break;
    }
    return ExtendedRational(Rational(-value_));
}

std::ostream& operator<<(std::ostream& os, const ExtendedRational& x) { return os << x.str(); }

ExtendedRational oplus(const ExtendedRational& a, const ExtendedRational& b) { return a < b ? b : a; }

ExtendedRational otimes(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) {
        return ExtendedRational::neg_inf();
    }
    if (a.is_pos_inf() || b.is_pos_inf()) {
        return ExtendedRational::pos_inf();
    }
    return ExtendedRational(Rational(a.value() + b.value()));
}

}  // namespace ptime

#include "dflow/rational.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace dflow {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Int parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && s.front() == '-') {
        negative = true;
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw ParseError("invalid rational literal: '" + std::string(whole) + "'");
    }
    Int value{std::string(s)};
    return negative ? Int(-value) : value;
}

}  // namespace

Rational::Rational(const Int& num, const Int& den) {
    if (den == 0) {
        throw ValidationError("rational with zero denominator");
    }
    // The backend requires a positive denominator.
    if (den < 0) {
        v_ = detail::Backend(Int(-num), Int(-den));
    } else {
        v_ = detail::Backend(num, den);
    }
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw ValidationError("rational division by zero");
    }
    v_ /= o.v_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text, text));
    }
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    if (!all_digits(den)) {
        throw ParseError("invalid rational literal: '" + std::string(text) +
                         "' (denominator must be a positive integer)");
    }
    Int d{std::string(den)};
    if (d == 0) {
        throw ParseError("invalid rational literal: '" + std::string(text) +
                         "' (zero denominator)");
    }
    return Rational(parse_integer(num, text), d);
}

std::string Rational::str() const {
    std::ostringstream os;
    os << v_;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_; }

Bound Bound::parse(std::string_view text) {
    if (text == "inf") return pos_inf();
    if (text == "-inf") return neg_inf();
    return finite(Rational::parse(text));
}

const Rational& Bound::value() const {
    if (!is_finite()) {
        throw PreconditionError("value() called on an infinite bound");
    }
    return v_;
}

std::string Bound::str() const {
    switch (kind_) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "inf";
        case Kind::Finite: break;
    }
    return v_.str();
}

bool Interval::valid() const {
    if (lo.is_pos_inf() || hi.is_neg_inf()) return false;
    if (lo.is_finite() && hi.is_finite()) return lo.value() <= hi.value();
    return true;
}

bool Interval::contains(const Rational& x) const {
    if (lo.is_finite() && x < lo.value()) return false;
    if (hi.is_finite() && x > hi.value()) return false;
    return true;
}

std::string Interval::str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }

}  // namespace dflow

#ifndef DFLOW_RATIONAL_HPP
#define DFLOW_RATIONAL_HPP

// Exact rational scalar type plus extended bounds (rationals with +/-infinity)
// and closed intervals built from them.
//
// The arithmetic backend is wrapped so the rest of the code base never touches
// it directly; swapping the backend means editing the two aliases below and
// nothing else. Values are kept canonical at all times (reduced fraction,
// positive denominator), which makes operator== a true equality test.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dflow/error.hpp"

namespace dflow {

/// Arbitrary-precision integer used for numerators and denominators.
using Int = boost::multiprecision::cpp_int;

namespace detail {
using Backend = boost::multiprecision::cpp_rational;
}

/// Exact rational number. Immutable canonical form: reduced, denominator > 0.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}                 // NOLINT: implicit by design
    Rational(long long n) : v_(n) {}           // NOLINT: implicit by design
    explicit Rational(const Int& n) : v_(n) {}

    /// num/den with den != 0; throws ValidationError on a zero denominator.
    Rational(const Int& num, const Int& den);
    Rational(long long num, long long den) : Rational(Int(num), Int(den)) {}

    /// Parses "p" or "p/q" with optional leading '-', q > 0 after parsing.
    /// Rejects anything else (whitespace, '+', empty fields, zero q).
    static Rational parse(std::string_view text);

    /// Canonical form: "p" when the value is integral, else "p/q" with q > 1.
    std::string str() const;

    Int numerator() const { return boost::multiprecision::numerator(v_); }
    Int denominator() const { return boost::multiprecision::denominator(v_); }

    int sign() const { return v_.sign(); }
    bool is_zero() const { return v_.is_zero(); }
    bool is_integer() const { return denominator() == 1; }
    Rational abs() const { return sign() < 0 ? Rational(*this).negate() : *this; }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    /// Division by zero throws ValidationError.
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(Rational a) { return a.negate(); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    Rational& negate() { v_ = -v_; return *this; }
    detail::Backend v_;
};

/// One endpoint of a bound interval: a rational or +/-infinity.
class Bound {
public:
    /// Defaults to 0; use the factories for the interesting cases.
    Bound() : kind_(Kind::Finite) {}

    static Bound finite(Rational v) { return Bound(Kind::Finite, std::move(v)); }
    static Bound neg_inf() { return Bound(Kind::NegInf, Rational()); }
    static Bound pos_inf() { return Bound(Kind::PosInf, Rational()); }

    /// Parses "inf", "-inf", or a rational literal.
    static Bound parse(std::string_view text);

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }

    /// Finite value; throws PreconditionError when infinite.
    const Rational& value() const;

    /// "inf", "-inf", or the rational's canonical form.
    std::string str() const;

    friend bool operator==(const Bound& a, const Bound& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.v_ == b.v_);
    }
    friend bool operator!=(const Bound& a, const Bound& b) { return !(a == b); }

private:
    enum class Kind { Finite, NegInf, PosInf };
    Bound(Kind k, Rational v) : kind_(k), v_(std::move(v)) {}
    Kind kind_;
    Rational v_;
};

/// Closed interval [lo, hi] where lo may be -infinity and hi +infinity.
struct Interval {
    Bound lo;
    Bound hi;

    /// Unbounded on both sides.
    static Interval free() { return {Bound::neg_inf(), Bound::pos_inf()}; }
    /// Degenerate interval [v, v].
    static Interval fixed(const Rational& v) { return {Bound::finite(v), Bound::finite(v)}; }
    static Interval closed(const Rational& lo, const Rational& hi) {
        return {Bound::finite(lo), Bound::finite(hi)};
    }

    /// Well-formed: lo != +inf, hi != -inf, and lo <= hi when both finite.
    bool valid() const;

    bool is_free() const { return lo.is_neg_inf() && hi.is_pos_inf(); }
    bool has_finite_side() const { return lo.is_finite() || hi.is_finite(); }

    bool contains(const Rational& x) const;
    /// x sits exactly on a finite lower/upper endpoint.
    bool at_lower(const Rational& x) const { return lo.is_finite() && x == lo.value(); }
    bool at_upper(const Rational& x) const { return hi.is_finite() && x == hi.value(); }

    /// "[lo, hi]" rendering for messages.
    std::string str() const;

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

}  // namespace dflow

#endif  // DFLOW_RATIONAL_HPP

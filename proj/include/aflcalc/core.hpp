#pragma once

// Scalar building blocks shared by every module: exact rationals, half-integer
// valuations, ±1 signs, integers extended by +infinity, and the error types.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace aflc {

using Rational = mpq_class;

/// n/d in lowest terms (the two-argument mpq_class constructor does not reduce).
inline Rational ratio(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

/// Canonical text form: "3", "-1/2".
std::string to_string(const Rational& r);
/// Accepts "3", "-1/2", "+4".
Rational parse_rational(const std::string& text);

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's mathematical domain.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Orbital sum with non-compact support along the orbit.
class DivergenceError : public Error {
  public:
    using Error::Error;
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Deformation query whose class height cannot occur for the given levels.
class AdmissibilityError : public Error {
  public:
    using Error::Error;
};

enum class Sign : int { minus = -1, plus = 1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }
constexpr Sign operator*(Sign a, Sign b) { return a == b ? Sign::plus : Sign::minus; }
constexpr Sign operator-(Sign a) { return a == Sign::plus ? Sign::minus : Sign::plus; }
constexpr Sign parity_sign(std::int64_t n) { return (n % 2 == 0) ? Sign::plus : Sign::minus; }
constexpr Sign pow(Sign s, std::int64_t n) { return s == Sign::plus ? Sign::plus : parity_sign(n); }
Sign sign_from_int(long long v);

/// A member of (1/2)Z, stored doubled.
class HalfInt {
  public:
    constexpr HalfInt() = default;
    constexpr HalfInt(std::int64_t n) : doubled_(2 * n) {}  // NOLINT(google-explicit-constructor)

    static constexpr HalfInt from_doubled(std::int64_t d) {
        HalfInt h;
        h.doubled_ = d;
        return h;
    }

    constexpr std::int64_t doubled() const { return doubled_; }
    constexpr bool is_integer() const { return doubled_ % 2 == 0; }
    /// 0 or 1: twice the fractional part.
    constexpr int frac_doubled() const { return static_cast<int>(((doubled_ % 2) + 2) % 2); }
    std::int64_t floor() const;
    std::int64_t ceil() const;
    /// Throws DomainError unless integral.
    std::int64_t as_integer() const;
    Rational to_rational() const { return ratio(static_cast<long>(doubled_), 2); }
    std::string to_string() const;

    constexpr HalfInt operator-() const { return from_doubled(-doubled_); }
    constexpr HalfInt& operator+=(HalfInt o) {
        doubled_ += o.doubled_;
        return *this;
    }
    constexpr HalfInt& operator-=(HalfInt o) {
        doubled_ -= o.doubled_;
        return *this;
    }
    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
    friend constexpr bool operator==(HalfInt, HalfInt) = default;

  private:
    std::int64_t doubled_ = 0;
};

/// A member of Z ∪ {+∞}; used for conductor levels, heights and lengths.
class ExtInt {
  public:
    constexpr ExtInt() = default;
    constexpr ExtInt(std::int64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
    static constexpr ExtInt infinity() {
        ExtInt e;
        e.value_.reset();
        return e;
    }

    constexpr bool is_finite() const { return value_.has_value(); }
    std::int64_t value() const;
    std::string to_string() const;

    friend constexpr bool operator==(const ExtInt&, const ExtInt&) = default;
    friend constexpr std::strong_ordering operator<=>(const ExtInt& a, const ExtInt& b) {
        if (!a.value_ || !b.value_) {
            return static_cast<bool>(b.value_) <=> static_cast<bool>(a.value_);
        }
        return *a.value_ <=> *b.value_;
    }

  private:
    std::optional<std::int64_t> value_ = 0;
};

constexpr ExtInt min(const ExtInt& a, const ExtInt& b) { return b < a ? b : a; }

/// Overflow-checked 64-bit integer helpers for the deformation formulas.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_pow(std::int64_t base, std::int64_t exp);

}  // namespace aflc

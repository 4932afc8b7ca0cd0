#pragma once

// Exact Laurent polynomials in T = q^{-s} with exponents in (1/2)Z, plus the
// two functionals that turn an orbital integral into its value and its
// s-derivative at s = 0. log q is kept as a formal unit.

#include "aflcalc/core.hpp"

#include <cstddef>
#include <map>
#include <string>

namespace aflc {

/// rational_part + log_q_part * log q
struct LogValue {
    Rational rational_part = 0;
    Rational log_q_part = 0;

    static LogValue log_q(const Rational& c) { return {0, c}; }

    LogValue& operator+=(const LogValue& o);
    LogValue& operator-=(const LogValue& o);
    friend LogValue operator+(LogValue a, const LogValue& b) { return a += b; }
    friend LogValue operator-(LogValue a, const LogValue& b) { return a -= b; }
    friend LogValue operator*(const Rational& c, const LogValue& v) {
        return {c * v.rational_part, c * v.log_q_part};
    }
    friend bool operator==(const LogValue& a, const LogValue& b) {
        return a.rational_part == b.rational_part && a.log_q_part == b.log_q_part;
    }

    /// "0", "3/2*log q", "1 + 2*log q"
    std::string to_string() const;
};

class LaurentPoly {
  public:
    using TermMap = std::map<HalfInt, Rational>;

    LaurentPoly() = default;
    explicit LaurentPoly(const Rational& constant);
    static LaurentPoly monomial(const Rational& coeff, HalfInt exponent);
    /// (sign * T)^n for integer n.
    static LaurentPoly signed_power(Sign sign, std::int64_t n);

    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(HalfInt exponent) const;
    bool has_integer_exponents() const;

    LaurentPoly& add_term(const Rational& coeff, HalfInt exponent);
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const Rational& c);
    LaurentPoly operator-() const;
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const Rational& c, LaurentPoly p) { return p *= c; }
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

    /// Multiply by T^shift.
    LaurentPoly shifted(HalfInt shift) const;

    /// Canonical rendering, exponents ascending: "-T^-1 + 1 - T + T^2".
    std::string to_string() const;

  private:
    TermMap terms_;
};

/// Value at s = 0 (T = 1).
Rational eval_at_s0(const LaurentPoly& p);

/// d/ds at s = 0; d/ds T^m = -m log q T^m.
LogValue d_ds_at_s0(const LaurentPoly& p);

/// The log q coefficient of the formal s-derivative: -Σ m c_m T^m.
LaurentPoly poly_derivative_in_s(const LaurentPoly& p);

/// Exact quotient p / (1 + T) when all exponents share the same class mod Z;
/// throws DomainError if (1 + T) does not divide p.
LaurentPoly divide_by_one_plus_t(const LaurentPoly& p);

}  // namespace aflc

#pragma once

// The quadratic extension E/F seen through the two functionals every formula
// consumes: the valuation v (extended to E, values in (1/2)Z) and the sign of
// the quadratic character η. No p-adic digits are modelled.

#include "aflcalc/core.hpp"
#include "aflcalc/symbolic.hpp"

namespace aflc {

struct FieldSetup {
    std::int64_t q = 3;
    bool ramified = false;
    /// η(π_F); forced to -1 for unramified setups.
    Sign eta_pi_F = Sign::minus;

    static FieldSetup unramified(std::int64_t q);
    static FieldSetup ramified_with(std::int64_t q, Sign eta_pi_F = Sign::plus);

    void validate() const;
    friend bool operator==(const FieldSetup&, const FieldSetup&) = default;
};

/// An element of E^× (or zero) by its valuation and η-sign.
struct ValClass {
    HalfInt val;
    Sign eta = Sign::plus;
    bool is_zero = false;

    static ValClass one() { return {}; }
    static ValClass zero() { return {0, Sign::plus, true}; }
    /// The element π_F^n of F^×.
    static ValClass uniformizer_power(const FieldSetup& setup, std::int64_t n);

    bool in_F() const { return is_zero || val.is_integer(); }
    /// Unramified elements must satisfy η = (-1)^v with v integral.
    bool consistent_with(const FieldSetup& setup) const;
    ValClass inverse() const;

    friend ValClass operator*(const ValClass& a, const ValClass& b);
    friend bool operator==(const ValClass& a, const ValClass& b) {
        if (a.is_zero || b.is_zero) {
            return a.is_zero == b.is_zero;
        }
        return a.val == b.val && a.eta == b.eta;
    }
};

enum class SignConstraint { any, plus, minus };

SignConstraint constraint_for(Sign s);
/// Combine two constraints on the same quantity; nullopt if contradictory.
std::optional<SignConstraint> intersect(SignConstraint a, SignConstraint b);
/// The constraint s·c on the quantity s·x when c constrains x.
SignConstraint scaled(SignConstraint c, Sign s);

/// η_s(x) = η(x) T^{v(x)} with T = q^{-s}.
LaurentPoly eta_s(const ValClass& x, const FieldSetup& setup);

/// N_{E/F}: doubles the valuation, lands in ker η.
ValClass norm_valclass(const ValClass& x);

/// ∫ over {u ∈ O_F^× : η(u) satisfies the constraint} of η(u)^{weighted}, Vol(O_F^×) = 1.
Rational unit_integral(const FieldSetup& setup, SignConstraint constraint, bool weight_eta);

}  // namespace aflc

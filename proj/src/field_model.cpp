#include "aflcalc/field_model.hpp"

namespace aflc {

FieldSetup FieldSetup::unramified(std::int64_t q) { return {q, false, Sign::minus}; }

FieldSetup FieldSetup::ramified_with(std::int64_t q, Sign eta_pi_F) { return {q, true, eta_pi_F}; }

void FieldSetup::validate() const {
    if (q < 2) {
        throw DomainError("residue field size q must be >= 2, got " + std::to_string(q));
    }
    if (!ramified && eta_pi_F != Sign::minus) {
        throw DomainError("unramified setups have eta(pi_F) = -1");
    }
}

ValClass ValClass::uniformizer_power(const FieldSetup& setup, std::int64_t n) {
    return {n, pow(setup.eta_pi_F, n), false};
}

bool ValClass::consistent_with(const FieldSetup& setup) const {
    if (is_zero || setup.ramified) {
        return true;
    }
    return val.is_integer() && eta == parity_sign(val.as_integer());
}

ValClass ValClass::inverse() const {
    if (is_zero) {
        throw DomainError("zero has no inverse");
    }
    return {-val, eta, false};
}

ValClass operator*(const ValClass& a, const ValClass& b) {
    if (a.is_zero || b.is_zero) {
        return ValClass::zero();
    }
    return {a.val + b.val, a.eta * b.eta, false};
}

SignConstraint constraint_for(Sign s) { return s == Sign::plus ? SignConstraint::plus : SignConstraint::minus; }

std::optional<SignConstraint> intersect(SignConstraint a, SignConstraint b) {
    if (a == SignConstraint::any) {
        return b;
    }
    if (b == SignConstraint::any || a == b) {
        return a;
    }
    return std::nullopt;
}

SignConstraint scaled(SignConstraint c, Sign s) {
    if (c == SignConstraint::any || s == Sign::plus) {
        return c;
    }
    return c == SignConstraint::plus ? SignConstraint::minus : SignConstraint::plus;
}

LaurentPoly eta_s(const ValClass& x, const FieldSetup& setup) {
    if (x.is_zero) {
        throw DomainError("eta_s is undefined at zero");
    }
    if (!x.consistent_with(setup)) {
        throw DomainError("valuation/sign data inconsistent with an unramified setup");
    }
    return LaurentPoly::monomial(to_int(x.eta), x.val);
}

ValClass norm_valclass(const ValClass& x) {
    if (x.is_zero) {
        return ValClass::zero();
    }
    return {x.val + x.val, Sign::plus, false};
}

Rational unit_integral(const FieldSetup& setup, SignConstraint constraint, bool weight_eta) {
    if (!setup.ramified) {
        // η is trivial on O_F^×
        return constraint == SignConstraint::minus ? Rational(0) : Rational(1);
    }
    switch (constraint) {
        case SignConstraint::any:
            return weight_eta ? Rational(0) : Rational(1);
        case SignConstraint::plus:
            return Rational(1, 2);
        case SignConstraint::minus:
            return weight_eta ? Rational(-1, 2) : Rational(1, 2);
    }
    return 0;
}

}  // namespace aflc

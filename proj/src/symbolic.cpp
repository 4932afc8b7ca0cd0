#include "aflcalc/symbolic.hpp"

#include <sstream>
#include <vector>

namespace aflc {

LogValue& LogValue::operator+=(const LogValue& o) {
    rational_part += o.rational_part;
    log_q_part += o.log_q_part;
    return *this;
}

LogValue& LogValue::operator-=(const LogValue& o) {
    rational_part -= o.rational_part;
    log_q_part -= o.log_q_part;
    return *this;
}

std::string LogValue::to_string() const {
    if (log_q_part == 0) {
        return aflc::to_string(rational_part);
    }
    std::string log_term = aflc::to_string(log_q_part) + "*log q";
    if (rational_part == 0) {
        return log_term;
    }
    return aflc::to_string(rational_part) + " + " + log_term;
}

LaurentPoly::LaurentPoly(const Rational& constant) { add_term(constant, 0); }

LaurentPoly LaurentPoly::monomial(const Rational& coeff, HalfInt exponent) {
    LaurentPoly p;
    p.add_term(coeff, exponent);
    return p;
}

LaurentPoly LaurentPoly::signed_power(Sign sign, std::int64_t n) {
    return monomial(to_int(pow(sign, n)), n);
}

Rational LaurentPoly::coeff(HalfInt exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

bool LaurentPoly::has_integer_exponents() const {
    for (const auto& [e, c] : terms_) {
        if (!e.is_integer()) {
            return false;
        }
    }
    return true;
}

LaurentPoly& LaurentPoly::add_term(const Rational& coeff, HalfInt exponent) {
    if (coeff == 0) {
        return *this;
    }
    auto [it, inserted] = terms_.try_emplace(exponent, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) {
        add_term(c, e);
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms_) {
        add_term(-c, e);
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, coeff] : terms_) {
        coeff *= c;
    }
    return *this;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    r *= Rational(-1);
    return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            r.add_term(ca * cb, ea + eb);
        }
    }
    return r;
}

LaurentPoly LaurentPoly::shifted(HalfInt shift) const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) {
        r.terms_.emplace(e + shift, c);
    }
    return r;
}

namespace {

std::string exponent_text(HalfInt e) {
    if (e == HalfInt(1)) {
        return "T";
    }
    return "T^" + e.to_string();
}

}  // namespace

std::string LaurentPoly::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool negative = c < 0;
        Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) {
                out << '-';
            }
        } else {
            out << (negative ? " - " : " + ");
        }
        first = false;
        if (e == HalfInt(0)) {
            out << aflc::to_string(mag);
        } else if (mag == 1) {
            out << exponent_text(e);
        } else {
            out << aflc::to_string(mag) << '*' << exponent_text(e);
        }
    }
    return out.str();
}

Rational eval_at_s0(const LaurentPoly& p) {
    Rational sum = 0;
    for (const auto& [e, c] : p.terms()) {
        sum += c;
    }
    return sum;
}

LogValue d_ds_at_s0(const LaurentPoly& p) {
    Rational slope = 0;
    for (const auto& [e, c] : p.terms()) {
        slope -= e.to_rational() * c;
    }
    return LogValue::log_q(slope);
}

LaurentPoly poly_derivative_in_s(const LaurentPoly& p) {
    LaurentPoly r;
    for (const auto& [e, c] : p.terms()) {
        r.add_term(-e.to_rational() * c, e);
    }
    return r;
}

LaurentPoly divide_by_one_plus_t(const LaurentPoly& p) {
    LaurentPoly quotient;
    for (int frac : {0, 1}) {
        std::vector<std::pair<HalfInt, Rational>> cls;
        for (const auto& [e, c] : p.terms()) {
            if (e.frac_doubled() == frac) {
                cls.emplace_back(e, c);
            }
        }
        if (cls.empty()) {
            continue;
        }
        const HalfInt lo = cls.front().first;
        const HalfInt hi = cls.back().first;
        // p = (1 + T) q  =>  q_e = p_e - q_{e-1}, running from the lowest exponent
        Rational carry = 0;
        for (HalfInt e = lo; e < hi; e += 1) {
            Rational qe = p.coeff(e) - carry;
            quotient.add_term(qe, e);
            carry = qe;
        }
        if (p.coeff(hi) != carry) {
            throw DomainError("(1 + T) does not divide " + p.to_string());
        }
    }
    return quotient;
}

}  // namespace aflc

#include "aflcalc/core.hpp"

#include <limits>

namespace aflc {

std::string to_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_str();
}

Rational parse_rational(const std::string& text) {
    std::string s = text;
    if (!s.empty() && s.front() == '+') {
        s.erase(0, 1);
    }
    if (s.empty()) {
        throw DomainError("empty rational literal");
    }
    Rational r;
    if (r.set_str(s, 10) != 0) {
        throw DomainError("malformed rational literal '" + text + "'");
    }
    if (r.get_den() == 0) {
        throw DomainError("zero denominator in '" + text + "'");
    }
    r.canonicalize();
    return r;
}

Sign sign_from_int(long long v) {
    if (v == 1) {
        return Sign::plus;
    }
    if (v == -1) {
        return Sign::minus;
    }
    throw DomainError("sign must be +1 or -1, got " + std::to_string(v));
}

std::int64_t HalfInt::floor() const {
    return doubled_ >= 0 ? doubled_ / 2 : -((-doubled_ + 1) / 2);
}

std::int64_t HalfInt::ceil() const { return -HalfInt::from_doubled(-doubled_).floor(); }

std::int64_t HalfInt::as_integer() const {
    if (!is_integer()) {
        throw DomainError("expected an integer valuation, got " + to_string());
    }
    return doubled_ / 2;
}

std::string HalfInt::to_string() const {
    if (is_integer()) {
        return std::to_string(doubled_ / 2);
    }
    return std::to_string(doubled_) + "/2";
}

std::int64_t ExtInt::value() const {
    if (!value_) {
        throw DomainError("value() on infinite ExtInt");
    }
    return *value_;
}

std::string ExtInt::to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        throw DomainError("integer overflow in addition");
    }
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw DomainError("integer overflow in multiplication");
    }
    return r;
}

std::int64_t checked_pow(std::int64_t base, std::int64_t exp) {
    if (exp < 0) {
        throw DomainError("negative exponent in integer power");
    }
    std::int64_t r = 1;
    for (std::int64_t k = 0; k < exp; ++k) {
        r = checked_mul(r, base);
    }
    return r;
}

}  // namespace aflc

#include "aflcalc/symbolic.hpp"

#include <doctest.h>

#include <random>

using namespace aflc;

namespace {

LaurentPoly poly(std::initializer_list<std::pair<int, Rational>> terms) {
    LaurentPoly p;
    for (const auto& [e, c] : terms) {
        p.add_term(c, e);
    }
    return p;
}

LaurentPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> exponent(-20, 20);
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<int> count(0, 6);
    LaurentPoly p;
    for (int k = count(rng); k > 0; --k) {
        p.add_term(ratio(coeff(rng), 1 + std::abs(coeff(rng))), HalfInt::from_doubled(exponent(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("half-integers") {
    const HalfInt h = HalfInt::from_doubled(5);
    CHECK(h.to_string() == "5/2");
    CHECK(h.floor() == 2);
    CHECK(h.ceil() == 3);
    CHECK(HalfInt::from_doubled(-1).floor() == -1);
    CHECK(HalfInt::from_doubled(-1).ceil() == 0);
    CHECK(HalfInt(3).is_integer());
    CHECK(HalfInt(4).to_rational() == 4);
    CHECK(HalfInt::from_doubled(4).to_rational() == 2);
    CHECK(h.to_rational() == ratio(5, 2));
    CHECK(HalfInt::from_doubled(-3).frac_doubled() == 1);
}

TEST_CASE("extended integers order infinity last") {
    CHECK(ExtInt(5) < ExtInt::infinity());
    CHECK(min(ExtInt::infinity(), ExtInt(3)) == ExtInt(3));
    CHECK(ExtInt::infinity().to_string() == "inf");
    CHECK_THROWS(ExtInt::infinity().value());
}

TEST_CASE("rationals parse and print canonically") {
    CHECK(to_string(parse_rational("4/6")) == "2/3");
    CHECK(to_string(parse_rational("+3")) == "3");
    CHECK(ratio(4, 2) == 2);
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("x"), DomainError);
    CHECK_THROWS_AS(checked_mul(std::int64_t{1} << 40, std::int64_t{1} << 40), DomainError);
}

TEST_CASE("canonical text") {
    CHECK(poly({{-1, -1}, {0, 1}, {1, -1}, {2, 1}}).to_string() == "-T^-1 + 1 - T + T^2");
    CHECK(LaurentPoly().to_string() == "0");
    CHECK(LaurentPoly::monomial(ratio(3, 2), HalfInt::from_doubled(1)).to_string() == "3/2*T^1/2");
    CHECK(LogValue::log_q(ratio(3, 2)).to_string() == "3/2*log q");
}

TEST_CASE("value at s = 0") {
    CHECK(eval_at_s0(poly({{0, 1}, {-1, -1}})) == 0);
    CHECK(eval_at_s0(LaurentPoly()) == 0);
    CHECK(eval_at_s0(poly({{2, 3}, {0, 2}})) == 5);
}

TEST_CASE("derivative at s = 0") {
    CHECK(d_ds_at_s0(poly({{0, 1}, {-1, -1}})) == LogValue::log_q(-1));
    CHECK(d_ds_at_s0(LaurentPoly(Rational(7))) == LogValue{});
    CHECK(d_ds_at_s0(poly({{-1, -1}, {0, 1}, {1, -1}, {2, 1}})) == LogValue::log_q(-2));
}

TEST_CASE("formal s-derivative") {
    CHECK(poly_derivative_in_s(LaurentPoly::monomial(1, 4)) == LaurentPoly::monomial(-4, 4));
    CHECK(poly_derivative_in_s(LaurentPoly(Rational(1))).is_zero());
    CHECK(poly_derivative_in_s(poly({{1, 1}, {-1, 1}})) == poly({{1, -1}, {-1, 1}}));
}

TEST_CASE("zero coefficients are never stored") {
    LaurentPoly p = poly({{1, 2}});
    p -= poly({{1, 2}});
    CHECK(p.is_zero());
    CHECK(p.size() == 0);
}

TEST_CASE("signed powers") {
    CHECK(LaurentPoly::signed_power(Sign::minus, 3) == LaurentPoly::monomial(-1, 3));
    CHECK(LaurentPoly::signed_power(Sign::minus, -2) == LaurentPoly::monomial(1, -2));
    CHECK(LaurentPoly::signed_power(Sign::plus, -1) == LaurentPoly::monomial(1, -1));
}

TEST_CASE("exact division by 1 + T") {
    const LaurentPoly one_plus_t = poly({{0, 1}, {1, 1}});
    std::mt19937 rng(7);
    for (int k = 0; k < 200; ++k) {
        const LaurentPoly p = random_poly(rng);
        CHECK(divide_by_one_plus_t(p * one_plus_t) == p);
    }
    CHECK_THROWS_AS(divide_by_one_plus_t(poly({{0, 1}})), DomainError);
}

TEST_CASE("functionals are linear and obey the product rule") {
    std::mt19937 rng(2024);
    for (int k = 0; k < 500; ++k) {
        const LaurentPoly p = random_poly(rng);
        const LaurentPoly q = random_poly(rng);
        const Rational c = ratio(static_cast<long>(rng() % 17) - 8, 1 + static_cast<long>(rng() % 5));
        CHECK(eval_at_s0(p + c * q) == eval_at_s0(p) + c * eval_at_s0(q));
        CHECK(d_ds_at_s0(p + c * q) == d_ds_at_s0(p) + c * d_ds_at_s0(q));
        CHECK(eval_at_s0(p * q) == eval_at_s0(p) * eval_at_s0(q));
        CHECK(d_ds_at_s0(p * q) == eval_at_s0(q) * d_ds_at_s0(p) + eval_at_s0(p) * d_ds_at_s0(q));
        CHECK(d_ds_at_s0(p) == LogValue::log_q(eval_at_s0(poly_derivative_in_s(p))));
    }
}

#include "battery.hpp"

#include <doctest.h>

#include <random>

using namespace aflc;
using namespace aflc::testing;

namespace {

Interval random_interval(std::mt19937& rng, bool ramified) {
    std::uniform_int_distribution<int> lo(ramified ? -6 : -3, ramified ? 6 : 3);
    std::uniform_int_distribution<int> width(0, 4);
    const int a = lo(rng);
    const HalfInt start = ramified ? HalfInt::from_doubled(a) : HalfInt(a);
    if (rng() % 3 == 0) {
        return Interval::at_least(start);
    }
    return Interval::closed(start, start + HalfInt(width(rng)));
}

/// A random box with compact support along every orbit.
Box random_box(std::mt19937& rng, const FieldSetup& setup) {
    Box box = rng() % 2 ? Box::unit_diagonal() : Box::integral_matrices();
    box.b = random_interval(rng, setup.ramified);
    box.c = random_interval(rng, setup.ramified);
    const SignConstraint signs[] = {SignConstraint::any, SignConstraint::plus, SignConstraint::minus};
    if (!box.b.unbounded_above()) {
        box.sgn_b = signs[rng() % 3];
    }
    if (!box.c.unbounded_above()) {
        box.sgn_c = signs[rng() % 3];
    }
    if (rng() % 4 == 0) {
        box.lvl_a = rng() % 2 ? LevelInterval::exactly(rng() % 3) : LevelInterval::at_least(rng() % 3);
    }
    if (rng() % 5 == 0) {
        box.t = Interval::closed(0, static_cast<std::int64_t>(rng() % 6));
        if (rng() % 2) {
            box.side = rng() % 2 ? Side::U0 : Side::U1;
        }
    }
    return box;
}

InvariantFunction random_function(std::mt19937& rng, const FieldSetup& setup) {
    InvariantFunction f;
    for (int k = 1 + static_cast<int>(rng() % 4); k > 0; --k) {
        f.add(ratio(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 4)), random_box(rng, setup));
    }
    f.validate();
    return f;
}

ValClass random_lambda(std::mt19937& rng, const FieldSetup& setup) {
    const std::int64_t v = static_cast<std::int64_t>(rng() % 7) - 3;
    const Sign s = setup.ramified ? (rng() % 2 ? Sign::plus : Sign::minus) : parity_sign(v);
    return {v, s, false};
}

}  // namespace

TEST_CASE("orbital integrals are linear in f") {
    std::mt19937 rng(11);
    for (const FieldSetup& setup : battery_setups()) {
        const auto grid = orbit_grid(setup, 0, 6, -3, 3, {1, ExtInt::infinity()});
        for (int trial = 0; trial < 40; ++trial) {
            const InvariantFunction f = random_function(rng, setup);
            const InvariantFunction g = random_function(rng, setup);
            const Rational c = ratio(static_cast<long>(rng() % 9) - 4, 3);
            for (const OrbitData& gamma : grid) {
                CHECK(orb_s(gamma, f + c * g) == orb_s(gamma, f) + c * orb_s(gamma, g));
                CHECK(orb_s(gamma, (f + c * g).simplified()) == orb_s(gamma, f + c * g));
            }
        }
    }
}

TEST_CASE("transformation law for random functions and lambda") {
    std::mt19937 rng(12);
    for (const FieldSetup& setup : battery_setups()) {
        const auto grid = orbit_grid(setup, 0, 7, -3, 3);
        for (int trial = 0; trial < 60; ++trial) {
            const InvariantFunction f = random_function(rng, setup);
            const ValClass lambda = random_lambda(rng, setup);
            const InvariantFunction pulled = pullback(f, lambda);
            const LaurentPoly inverse_eta = eta_s(lambda.inverse(), setup);
            const Rational eta = to_int(lambda.eta);
            for (const OrbitData& gamma : grid) {
                CHECK(orb_s(gamma, pulled) == inverse_eta * orb_s(gamma, f));
                CHECK(d_orb(gamma, pulled) ==
                      eta * (d_orb(gamma, f) + LogValue::log_q(lambda.val.to_rational() * orb(gamma, f))));
            }
        }
    }
}

TEST_CASE("germ expansion for random functions vanishing on B0") {
    std::mt19937 rng(13);
    for (const FieldSetup& setup : battery_setups()) {
        for (int trial = 0; trial < 40; ++trial) {
            InvariantFunction f = random_function(rng, setup);
            f = prop34_regularize(f, setup);
            REQUIRE(vanishes_on_b0(f));
            const GermData g = germ_extract(f, setup);
            for (const OrbitData& gamma :
                 orbit_grid(setup, g.validity_threshold, g.validity_threshold + 5, -3, 3, sample_levels())) {
                CHECK(orb_s(gamma, f) == g.expansion_at(gamma));
            }
            CHECK(germ_extract(germ_reconstruct(g, setup), setup).equivalent(g));
        }
    }
}

TEST_CASE("regularization preserves Orb and its derivative for random functions") {
    std::mt19937 rng(14);
    for (const FieldSetup& setup : battery_setups()) {
        const auto grid = orbit_grid(setup, 0, 8, -3, 3, sample_levels());
        for (int trial = 0; trial < 30; ++trial) {
            const InvariantFunction f = random_function(rng, setup);
            const InvariantFunction r = prop34_regularize(f, setup);
            CHECK(vanishes_on_b0(r));
            for (const OrbitData& gamma : grid) {
                CHECK(orb(gamma, r) == orb(gamma, f));
                CHECK(d_orb(gamma, r) == d_orb(gamma, f));
            }
        }
    }
}

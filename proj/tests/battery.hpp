#pragma once

// Shared fixtures: field setups, a battery of test functions vanishing on B0,
// and orbit grids.

#include "aflcalc/germ.hpp"

#include <string>
#include <vector>

namespace aflc::testing {

struct Named {
    std::string name;
    InvariantFunction f;
};

inline std::vector<FieldSetup> battery_setups() {
    return {FieldSetup::unramified(3), FieldSetup::ramified_with(3, Sign::plus),
            FieldSetup::ramified_with(5, Sign::minus)};
}

inline Box unit_box(Interval b, Interval c) {
    Box box = Box::unit_diagonal();
    box.b = b;
    box.c = c;
    return box;
}

/// Functions vanishing on B0, built from every kind of box the germ code
/// distinguishes.
inline std::vector<Named> b0_battery(const FieldSetup& setup) {
    std::vector<Named> out;
    auto add = [&out](std::string name, InvariantFunction f) { out.push_back({std::move(name), std::move(f)}); };
    const ValClass pi = ValClass::uniformizer_power(setup, 1);
    const ValClass pi2 = ValClass::uniformizer_power(setup, 2);

    add("shell b=0", InvariantFunction::of(unit_box(Interval::point(0), Interval::at_least(0))));
    add("shells b in [-1,2]", InvariantFunction::of(unit_box(Interval::closed(-1, 2), Interval::at_least(0)), 3));
    add("shells c in [-2,1]", InvariantFunction::of(unit_box(Interval::at_least(0), Interval::closed(-2, 1)), -2));
    add("bounded b and c", InvariantFunction::of(unit_box(Interval::closed(0, 3), Interval::closed(0, 3))));
    {
        Box box = unit_box(Interval::point(1), Interval::at_least(-1));
        box.sgn_b = SignConstraint::plus;
        add("signed shell b=1", InvariantFunction::of(box, ratio(5, 2)));
    }
    {
        Box box = unit_box(Interval::at_least(0), Interval::closed(0, 2));
        box.sgn_c = SignConstraint::minus;
        add("signed shells c in [0,2]", InvariantFunction::of(box));
    }
    {
        Box box = Box::integral_matrices();
        box.t = Interval::closed(0, 4);
        box.side = Side::U0;
        add("side U0 with t <= 4", InvariantFunction::of(box));
    }
    {
        Box box = Box::integral_matrices();
        box.t = Interval::closed(0, 3);
        add("t <= 3", InvariantFunction::of(box, -1));
    }
    const InvariantFunction one_k = InvariantFunction::of(Box::integral_matrices());
    const InvariantFunction units = InvariantFunction::of(Box::unit_diagonal());
    add("1_K - pi^* 1_K", one_k - pullback(one_k, pi));
    add("1_K - (pi^2)^* 1_K", one_k - pullback(one_k, pi2));
    add("units - pi^* units", units - pullback(units, pi));
    add("units - (pi^3)^* units", units - pullback(units, ValClass::uniformizer_power(setup, 3)));
    add("regularized 1_K", prop34_regularize(one_k, setup));
    add("regularized units", prop34_regularize(units, setup));
    {
        Box box = Box::unit_diagonal(LevelInterval::exactly(0), LevelInterval::at_least(1));
        add("regularized level box", prop34_regularize(InvariantFunction::of(box), setup));
    }
    {
        Box box = Box::unit_diagonal(LevelInterval::at_least(2), std::nullopt);
        box.b = Interval::point(0);
        add("level shell b=0, lvl_a >= 2", InvariantFunction::of(box));
    }
    {
        Box box = Box::unit_diagonal(LevelInterval::exactly(1), LevelInterval::exactly(0));
        box.c = Interval::closed(1, 3);
        add("level shells c in [1,3]", InvariantFunction::of(box, ratio(-3, 4)));
    }
    {
        Box wide = Box::integral_matrices();
        wide.b = Interval::at_least(-2);
        Box narrow = Box::integral_matrices();
        narrow.c = Interval::at_least(-2);
        add("shifted lattices", InvariantFunction::of(wide) - InvariantFunction::of(narrow));
    }
    {
        InvariantFunction mix = InvariantFunction::of(unit_box(Interval::point(2), Interval::at_least(1)), 7);
        mix.add(ratio(1, 3), unit_box(Interval::at_least(3), Interval::point(-1)));
        mix += ratio(-1, 2) * (one_k - pullback(one_k, pi));
        add("mixture", mix);
    }
    {
        Box box = Box::integral_matrices();
        box.a = Interval::point(0);
        box.t = Interval::at_least(2);
        InvariantFunction f = InvariantFunction::of(box) - pullback(InvariantFunction::of(box), pi2);
        add("t >= 2 difference", f);
    }
    if (setup.ramified) {
        add("half shells b in [1/2, 3/2]",
            InvariantFunction::of(unit_box(Interval::closed(HalfInt::from_doubled(1), HalfInt::from_doubled(3)),
                                           Interval::at_least(0))));
        Box box = unit_box(Interval::at_least(0), Interval::point(HalfInt::from_doubled(-1)));
        box.sgn_c = SignConstraint::plus;
        add("signed half shell c=-1/2", InvariantFunction::of(box, 4));
        const ValClass twisted{1, -setup.eta_pi_F, false};
        add("units - twisted pi^* units", units - pullback(units, twisted));
    }
    return out;
}

/// Regular semisimple γ with unit diagonal over t and v_b (both signs and
/// half-integral v_b when ramified).
inline std::vector<OrbitData> orbit_grid(const FieldSetup& setup, std::int64_t t_lo, std::int64_t t_hi,
                                         std::int64_t vb_lo, std::int64_t vb_hi,
                                         std::vector<ExtInt> lvls = {ExtInt::infinity()}) {
    std::vector<OrbitData> out;
    for (std::int64_t t = t_lo; t <= t_hi; ++t) {
        for (std::int64_t vb = vb_lo; vb <= vb_hi; ++vb) {
            for (const ExtInt& la : lvls) {
                for (const ExtInt& ld : lvls) {
                    if (!setup.ramified) {
                        out.push_back(OrbitData::unramified(setup.q, t, vb, la, ld));
                        continue;
                    }
                    for (int frac = 0; frac <= 1; ++frac) {
                        for (Sign s1 : {Sign::plus, Sign::minus}) {
                            for (Sign sb : {Sign::plus, Sign::minus}) {
                                out.push_back(OrbitData::ramified(setup, t, s1, HalfInt::from_doubled(2 * vb + frac),
                                                                  sb, la, ld));
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

inline std::vector<ExtInt> sample_levels() { return {0, 1, 2, ExtInt::infinity()}; }

}  // namespace aflc::testing

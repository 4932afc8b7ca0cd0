#include "aflcalc/germ.hpp"

#include <algorithm>
#include <cstdlib>

namespace aflc {

namespace {

std::int64_t max_abs_endpoint(const Interval& iv) {
    std::int64_t m = 0;
    for (const auto& e : {iv.lo, iv.hi}) {
        if (e) {
            m = std::max(m, std::abs(e->ceil()));
            m = std::max(m, std::abs(e->floor()));
        }
    }
    return m;
}

std::int64_t validity_threshold_of(const InvariantFunction& f) {
    std::int64_t bound = 0;
    for (const auto& term : f.terms()) {
        const Box& box = term.box;
        bound = std::max(bound, max_abs_endpoint(box.b) + max_abs_endpoint(box.c));
        if (box.t) {
            bound = std::max(bound, max_abs_endpoint(*box.t));
        }
    }
    return bound + 1;
}

/// Conditions on a, d and t seen by a box at a point near B0 (a, d units,
/// v(1 - N(a)) arbitrarily large).
bool active_near_b0(const Box& box, const ExtInt& lvl_a, const ExtInt& lvl_d) {
    if (box.side || (box.t && !box.t->unbounded_above())) {
        return false;
    }
    if (!box.a.contains(0) || !box.d.contains(0)) {
        return false;
    }
    if (box.lvl_a && !box.lvl_a->contains(lvl_a)) {
        return false;
    }
    return !box.lvl_d || box.lvl_d->contains(lvl_d);
}

/// η_s(b)^{-1} ∫ η_s(h) 1_box((a, b/h; 0, d)) dh for b with v(b) = v, η(b) = +1.
LaurentPoly upper_triangular_limit(const Box& box, HalfInt v, const FieldSetup& setup) {
    LaurentPoly sum;
    const std::int64_t n_lo = (v - *box.b.hi).ceil();
    const std::int64_t n_hi = (v - *box.b.lo).floor();
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const Sign shift = pow(setup.eta_pi_F, n);
        sum.add_term(unit_integral(setup, scaled(box.sgn_b, shift), true) * to_int(shift), n);
    }
    return sum.shifted(-v);
}

/// η_s(c) ∫ η_s(h) 1_box((a, 0; ch, d)) dh for c with v(c) = v, η(c) = +1.
LaurentPoly lower_triangular_limit(const Box& box, HalfInt v, const FieldSetup& setup) {
    LaurentPoly sum;
    const std::int64_t n_lo = (*box.c.lo - v).ceil();
    const std::int64_t n_hi = (*box.c.hi - v).floor();
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        const Sign shift = pow(setup.eta_pi_F, n);
        sum.add_term(unit_integral(setup, scaled(box.sgn_c, shift), true) * to_int(shift), n);
    }
    return sum.shifted(v);
}

std::optional<LevelInterval> class_constraint(std::int64_t k, std::int64_t cutoff) {
    if (cutoff == 0) {
        return std::nullopt;
    }
    return level_class_interval(k, cutoff);
}

}  // namespace

LaurentPoly GermData::A0(GermKey key) const {
    key.lvl_a_class = std::min(key.lvl_a_class, lvl_cutoff);
    key.lvl_d_class = std::min(key.lvl_d_class, lvl_cutoff);
    auto it = a0.find(key);
    return it == a0.end() ? LaurentPoly() : it->second;
}

LaurentPoly GermData::A1(GermKey key) const {
    key.lvl_a_class = std::min(key.lvl_a_class, lvl_cutoff);
    key.lvl_d_class = std::min(key.lvl_d_class, lvl_cutoff);
    auto it = a1.find(key);
    return it == a1.end() ? LaurentPoly() : it->second;
}

std::vector<GermKey> GermData::keys() const {
    std::vector<GermKey> out;
    for (std::int64_t ka = 0; ka <= lvl_cutoff; ++ka) {
        for (std::int64_t kd = 0; kd <= lvl_cutoff; ++kd) {
            out.push_back({ka, kd, 0});
            if (ramified) {
                out.push_back({ka, kd, 1});
            }
        }
    }
    return out;
}

GermKey GermData::key_of(const OrbitData& gamma) const {
    return {level_class_of(gamma.lvl_a, lvl_cutoff), level_class_of(gamma.lvl_d, lvl_cutoff),
            gamma.v_b.frac_doubled()};
}

bool GermData::is_zero() const {
    auto all_zero = [](const auto& m) {
        return std::all_of(m.begin(), m.end(), [](const auto& kv) { return kv.second.is_zero(); });
    };
    return all_zero(a0) && all_zero(a1);
}

bool GermData::equivalent(const GermData& other) const {
    GermData grid = *this;
    grid.lvl_cutoff = std::max(lvl_cutoff, other.lvl_cutoff);
    grid.ramified = ramified || other.ramified;
    for (const GermKey& key : grid.keys()) {
        if (A0(key) != other.A0(key) || A1(key) != other.A1(key)) {
            return false;
        }
    }
    return true;
}

LaurentPoly GermData::expansion_at(const OrbitData& gamma) const {
    const GermKey key = key_of(gamma);
    LaurentPoly b_part = LaurentPoly::monomial(to_int(gamma.sgn_b), gamma.v_b) * A0(key);
    LaurentPoly c_part = LaurentPoly::monomial(to_int(gamma.sgn_c()), -gamma.v_c()) * A1(key);
    return b_part + c_part;
}

GermData germ_extract(const InvariantFunction& f, const FieldSetup& setup) {
    setup.validate();
    f.validate();
    if (!vanishes_on_b0(f)) {
        throw PreconditionError(
            "f does not vanish on B0: the number of monomials of Orb is unbounded near diag(a, d)");
    }
    GermData g;
    g.ramified = setup.ramified;
    g.lvl_cutoff = f.level_cutoff();
    g.validity_threshold = validity_threshold_of(f);
    // x = η(π_F) T; a box unbounded on both sides sums x^n over
    // n ∈ [ceil(lo_c) - v(c), v(b) - ceil(lo_b)], i.e. (x^{B+1} - x^A)/(x - 1).
    const Sign x_sign = setup.eta_pi_F;
    for (const GermKey& key : g.keys()) {
        const ExtInt lvl_a = level_class_representative(key.lvl_a_class, g.lvl_cutoff);
        const ExtInt lvl_d = level_class_representative(key.lvl_d_class, g.lvl_cutoff);
        const HalfInt v = HalfInt::from_doubled(key.v_frac_doubled);
        LaurentPoly a0;
        LaurentPoly a1;
        LaurentPoly num0;
        LaurentPoly num1;
        for (const auto& term : f.terms()) {
            const Box& box = term.box;
            if (box.b.is_empty() || box.c.is_empty() || !active_near_b0(box, lvl_a, lvl_d)) {
                continue;
            }
            const bool b_open = box.b.unbounded_above();
            const bool c_open = box.c.unbounded_above();
            if (!b_open && c_open) {
                a0 += term.coeff * upper_triangular_limit(box, v, setup);
            } else if (b_open && !c_open) {
                a1 += term.coeff * lower_triangular_limit(box, v, setup);
            } else if (b_open && c_open && !setup.ramified) {
                num0 += term.coeff * LaurentPoly::signed_power(x_sign, 1 - box.b.lo->ceil());
                num1 -= term.coeff * LaurentPoly::signed_power(x_sign, box.c.lo->ceil());
            }
            // ramified boxes open on both sides carry no sign constraint, so η
            // integrates to zero over every unit shell
        }
        // x - 1 = -(1 + T) for x = -T
        a0 -= divide_by_one_plus_t(num0);
        a1 -= divide_by_one_plus_t(num1);
        if (!a0.is_zero()) {
            g.a0.emplace(key, a0);
        }
        if (!a1.is_zero()) {
            g.a1.emplace(key, a1);
        }
    }
    return g;
}

GermData germ_of(const InvariantFunction& f, const FieldSetup& setup) {
    return germ_extract(prop34_regularize(f, setup), setup);
}

InvariantFunction germ_reconstruct(const GermData& g, const FieldSetup& setup) {
    setup.validate();
    InvariantFunction f;
    auto check_class = [](HalfInt m, const GermKey& key) {
        if ((m.doubled() + key.v_frac_doubled) % 2 != 0) {
            throw DomainError("germ monomial T^" + m.to_string() +
                              " is not realizable on this valuation class of E^x/F^x");
        }
    };
    for (const GermKey& key : g.keys()) {
        const auto lvl_a = class_constraint(key.lvl_a_class, g.lvl_cutoff);
        const auto lvl_d = class_constraint(key.lvl_d_class, g.lvl_cutoff);
        const LaurentPoly a0 = g.A0(key);
        const LaurentPoly a1 = g.A1(key);
        for (const auto& [m, c] : a0.terms()) {
            check_class(m, key);
            // one valuation shell v(b) = -m: the orbit meets it once, at h with v(h) = v(b) + m
            Box box = Box::unit_diagonal(lvl_a, lvl_d);
            const HalfInt w = -m;
            box.b = Interval::point(w);
            if (setup.ramified) {
                box.sgn_b = SignConstraint::plus;
                f.add(2 * c, box);
            } else {
                f.add(c * to_int(parity_sign(w.as_integer())), box);
            }
        }
        for (const auto& [m, c] : a1.terms()) {
            check_class(m, key);
            Box box = Box::unit_diagonal(lvl_a, lvl_d);
            box.c = Interval::point(m);
            if (setup.ramified) {
                box.sgn_c = SignConstraint::plus;
                f.add(2 * c, box);
            } else {
                f.add(c * to_int(parity_sign(m.as_integer())), box);
            }
        }
    }
    return f;
}

std::map<GermKey, DerivativeGerm> germ_derivative_form(const GermData& g) {
    std::map<GermKey, DerivativeGerm> out;
    for (const GermKey& key : g.keys()) {
        const LaurentPoly c0 = g.A0(key);
        const LaurentPoly c1 = g.A1(key);
        out[key] = DerivativeGerm{LogValue::log_q(-eval_at_s0(c0)), d_ds_at_s0(c0), LogValue::log_q(eval_at_s0(c1)),
                                  d_ds_at_s0(c1)};
    }
    return out;
}

LogValue derivative_expansion_at(const std::map<GermKey, DerivativeGerm>& form, const GermData& g,
                                 const OrbitData& gamma) {
    GermKey key = g.key_of(gamma);
    auto it = form.find(key);
    if (it == form.end()) {
        return {};
    }
    const DerivativeGerm& dg = it->second;
    LogValue b_part = gamma.v_b.to_rational() * dg.a0 + dg.a0_prime;
    LogValue c_part = gamma.v_c().to_rational() * dg.a1 + dg.a1_prime;
    return Rational(to_int(gamma.sgn_b)) * b_part + Rational(to_int(gamma.sgn_c())) * c_part;
}

GermData transfer_germ_solve(const BaseValues& c0, const BaseValues& c1, Sign side_sign_b0, bool ramified,
                             std::int64_t lvl_cutoff) {
    GermData g;
    g.ramified = ramified;
    g.lvl_cutoff = lvl_cutoff;
    g.validity_threshold = 1;
    auto value = [lvl_cutoff](const BaseValues& m, GermKey key) {
        key.lvl_a_class = std::min(key.lvl_a_class, lvl_cutoff);
        key.lvl_d_class = std::min(key.lvl_d_class, lvl_cutoff);
        key.v_frac_doubled = 0;
        auto it = m.find(key);
        return it == m.end() ? Rational(0) : it->second;
    };
    for (const GermKey& key : g.keys()) {
        const Rational v0 = value(c0, key);
        const Rational v1 = value(c1, key);
        const Rational a0 = Rational(to_int(side_sign_b0)) * (v0 - v1) / 2;
        const Rational a1 = (v0 + v1) / 2;
        // half-integral classes are realized on the shells v = ±1/2; only the
        // values at s = 0 are prescribed
        const HalfInt e0 = key.v_frac_doubled == 1 ? HalfInt::from_doubled(-1) : HalfInt(0);
        const HalfInt e1 = -e0;
        if (a0 != 0) {
            g.a0.emplace(key, LaurentPoly::monomial(a0, e0));
        }
        if (a1 != 0) {
            g.a1.emplace(key, LaurentPoly::monomial(a1, e1));
        }
    }
    return g;
}

Rational transfer_system_lhs(const GermData& g, GermKey key, Side side, Sign side_sign_b0) {
    const Sign sign = side_sign(side) * side_sign_b0;
    return Rational(to_int(sign)) * eval_at_s0(g.A0(key)) + eval_at_s0(g.A1(key));
}

std::optional<bool> corollary310_check(const InvariantFunction& f, const FieldSetup& setup,
                                       const std::vector<OrbitData>& grid) {
    for (const auto& gamma : grid) {
        if (orb(gamma, f) != 0) {
            return std::nullopt;
        }
    }
    const GermData g = germ_of(f, setup);
    for (const GermKey& key : g.keys()) {
        if (eval_at_s0(g.A0(key)) != 0 || eval_at_s0(g.A1(key)) != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace aflc

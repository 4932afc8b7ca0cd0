#include "aflcalc/orbital.hpp"

#include <algorithm>

namespace aflc {

Interval Interval::shifted(HalfInt by) const {
    Interval r = *this;
    if (r.lo) {
        *r.lo += by;
    }
    if (r.hi) {
        *r.hi += by;
    }
    return r;
}

bool LevelInterval::contains(const ExtInt& lvl) const {
    if (!lvl.is_finite()) {
        return !hi.has_value();
    }
    return lvl.value() >= lo && (!hi || lvl.value() <= *hi);
}

Box Box::unit_diagonal(std::optional<LevelInterval> lvl_a, std::optional<LevelInterval> lvl_d) {
    Box box;
    box.a = Interval::point(0);
    box.d = Interval::point(0);
    box.lvl_a = lvl_a;
    box.lvl_d = lvl_d;
    return box;
}

bool Box::admits_b0(const ExtInt& lvl_a_value, const ExtInt& lvl_d_value) const {
    if (!b.unbounded_above() || !c.unbounded_above() || side) {
        return false;
    }
    if (t && !t->unbounded_above()) {
        return false;
    }
    if (!a.contains(0) || !d.contains(0)) {
        return false;
    }
    if (lvl_a && !lvl_a->contains(lvl_a_value)) {
        return false;
    }
    return !lvl_d || lvl_d->contains(lvl_d_value);
}

InvariantFunction::InvariantFunction(std::vector<Term> terms) : terms_(std::move(terms)) {}

InvariantFunction InvariantFunction::of(const Box& box, const Rational& coeff) {
    InvariantFunction f;
    f.add(coeff, box);
    return f;
}

InvariantFunction& InvariantFunction::add(const Rational& coeff, const Box& box) {
    if (coeff != 0) {
        terms_.push_back({coeff, box});
    }
    return *this;
}

InvariantFunction& InvariantFunction::operator+=(const InvariantFunction& o) {
    for (const auto& term : o.terms_) {
        add(term.coeff, term.box);
    }
    return *this;
}

InvariantFunction& InvariantFunction::operator-=(const InvariantFunction& o) {
    for (const auto& term : o.terms_) {
        add(-term.coeff, term.box);
    }
    return *this;
}

InvariantFunction& InvariantFunction::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& term : terms_) {
        term.coeff *= c;
    }
    return *this;
}

InvariantFunction InvariantFunction::simplified() const {
    std::vector<Term> merged;
    for (const auto& term : terms_) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) { return m.box == term.box; });
        if (it == merged.end()) {
            merged.push_back(term);
        } else {
            it->coeff += term.coeff;
        }
    }
    std::erase_if(merged, [](const Term& m) { return m.coeff == 0; });
    return InvariantFunction(std::move(merged));
}

void InvariantFunction::validate() const {
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const Box& box = terms_[k].box;
        const std::string where = "box " + std::to_string(k) + ": ";
        if (!box.a.lo || !box.b.lo || !box.c.lo || !box.d.lo) {
            throw DomainError(where + "every entry needs a finite lower valuation bound (compact support)");
        }
        if (box.sgn_b != SignConstraint::any && box.b.unbounded_above()) {
            throw DomainError(where + "a sign constraint on b needs a bounded v(b) interval");
        }
        if (box.sgn_c != SignConstraint::any && box.c.unbounded_above()) {
            throw DomainError(where + "a sign constraint on c needs a bounded v(c) interval");
        }
        if (box.side) {
            const bool t_bounded = (box.t && !box.t->unbounded_above()) ||
                                   (!box.b.unbounded_above() && !box.c.unbounded_above());
            if (!t_bounded) {
                throw DomainError(where + "a side constraint needs bounded v(1 - N(a))");
            }
        }
        for (const auto& lvl : {box.lvl_a, box.lvl_d}) {
            if (lvl && (lvl->lo < 0 || (lvl->hi && *lvl->hi < lvl->lo))) {
                throw DomainError(where + "malformed level interval");
            }
        }
    }
}

std::int64_t InvariantFunction::level_cutoff() const {
    std::int64_t cutoff = 0;
    for (const auto& term : terms_) {
        for (const auto& lvl : {term.box.lvl_a, term.box.lvl_d}) {
            if (!lvl) {
                continue;
            }
            cutoff = std::max(cutoff, lvl->lo);
            if (lvl->hi) {
                cutoff = std::max(cutoff, *lvl->hi + 1);
            }
        }
    }
    return cutoff;
}

LevelInterval level_class_interval(std::int64_t k, std::int64_t cutoff) {
    return k < cutoff ? LevelInterval::exactly(k) : LevelInterval::at_least(cutoff);
}

ExtInt level_class_representative(std::int64_t k, std::int64_t cutoff) {
    return k < cutoff ? ExtInt(k) : ExtInt::infinity();
}

std::int64_t level_class_of(const ExtInt& lvl, std::int64_t cutoff) {
    return (lvl.is_finite() && lvl.value() < cutoff) ? lvl.value() : cutoff;
}

std::map<std::pair<std::int64_t, std::int64_t>, Rational> b0_restriction(const InvariantFunction& f,
                                                                           std::int64_t cutoff) {
    std::map<std::pair<std::int64_t, std::int64_t>, Rational> table;
    for (std::int64_t ka = 0; ka <= cutoff; ++ka) {
        for (std::int64_t kd = 0; kd <= cutoff; ++kd) {
            Rational r = 0;
            for (const auto& term : f.terms()) {
                if (term.box.admits_b0(level_class_representative(ka, cutoff),
                                       level_class_representative(kd, cutoff))) {
                    r += term.coeff;
                }
            }
            if (r != 0) {
                table.emplace(std::make_pair(ka, kd), r);
            }
        }
    }
    return table;
}

bool vanishes_on_b0(const InvariantFunction& f) { return b0_restriction(f, f.level_cutoff()).empty(); }

OrbitData OrbitData::unramified(std::int64_t q, std::int64_t t, std::int64_t v_b, ExtInt lvl_a, ExtInt lvl_d) {
    OrbitData g;
    g.setup = FieldSetup::unramified(q);
    g.v_a = 0;
    g.lvl_a = lvl_a;
    g.lvl_d = lvl_d;
    g.t = t;
    g.sgn_1mNa = parity_sign(t);
    g.v_b = v_b;
    g.sgn_b = parity_sign(v_b);
    g.validate();
    return g;
}

OrbitData OrbitData::ramified(const FieldSetup& setup, std::int64_t t, Sign sgn_1mNa, HalfInt v_b, Sign sgn_b,
                              ExtInt lvl_a, ExtInt lvl_d) {
    OrbitData g;
    g.setup = setup;
    g.v_a = 0;
    g.lvl_a = lvl_a;
    g.lvl_d = lvl_d;
    g.t = t;
    g.sgn_1mNa = sgn_1mNa;
    g.v_b = v_b;
    g.sgn_b = sgn_b;
    g.validate();
    return g;
}

OrbitData OrbitData::conjugated(const ValClass& h) const {
    if (h.is_zero || !h.in_F()) {
        throw DomainError("conjugation requires h in F^x");
    }
    OrbitData g = *this;
    g.v_b = v_b - h.val;
    g.sgn_b = sgn_b * h.eta;
    return g;
}

void OrbitData::validate() const {
    setup.validate();
    if (v_a < HalfInt(0)) {
        if (HalfInt(t) != v_a + v_a) {
            throw DomainError("v(a) < 0 forces v(1 - N(a)) = 2 v(a)");
        }
    } else if (v_a > HalfInt(0)) {
        if (t != 0 || sgn_1mNa != Sign::plus) {
            throw DomainError("v(a) > 0 forces 1 - N(a) to be a unit norm (t = 0, sign +1)");
        }
    } else if (t < 0) {
        throw DomainError("a unit a has v(1 - N(a)) >= 0");
    }
    if (!setup.ramified) {
        if (!v_a.is_integer() || !v_b.is_integer()) {
            throw DomainError("unramified valuations are integral");
        }
        if (sgn_b != parity_sign(v_b.as_integer())) {
            throw DomainError("unramified: eta(b) must equal (-1)^v(b)");
        }
        if (sgn_1mNa != parity_sign(t)) {
            throw DomainError("unramified: eta(1 - N(a)) must equal (-1)^t");
        }
    }
}

namespace {

bool constant_conditions_hold(const Box& box, const OrbitData& g) {
    if (!box.a.contains(g.v_a) || !box.d.contains(g.v_a)) {
        return false;
    }
    if (box.lvl_a && !box.lvl_a->contains(g.lvl_a)) {
        return false;
    }
    if (box.lvl_d && !box.lvl_d->contains(g.lvl_d)) {
        return false;
    }
    if (box.t && !box.t->contains(HalfInt(g.t))) {
        return false;
    }
    return !box.side || *box.side == side_of(g.sgn_1mNa);
}

LaurentPoly box_orbit_sum(const Box& box, const OrbitData& g) {
    LaurentPoly sum;
    if (box.b.is_empty() || box.c.is_empty() || !constant_conditions_hold(box, g)) {
        return sum;
    }
    const HalfInt v_b = g.v_b;
    const HalfInt v_c = g.v_c();
    // v(b/h) = v_b - n ∈ I_b and v(ch) = v_c + n ∈ I_c
    std::optional<std::int64_t> n_lo;
    std::optional<std::int64_t> n_hi;
    auto raise = [&](std::int64_t x) { n_lo = n_lo ? std::max(*n_lo, x) : x; };
    auto lower = [&](std::int64_t x) { n_hi = n_hi ? std::min(*n_hi, x) : x; };
    if (box.c.lo) {
        raise((*box.c.lo - v_c).ceil());
    }
    if (box.b.hi) {
        raise((v_b - *box.b.hi).ceil());
    }
    if (box.b.lo) {
        lower((v_b - *box.b.lo).floor());
    }
    if (box.c.hi) {
        lower((*box.c.hi - v_c).floor());
    }
    if (!n_lo || !n_hi) {
        throw DivergenceError("support of f is not compact along the orbit");
    }
    const Sign eta_pi = g.setup.eta_pi_F;
    for (std::int64_t n = *n_lo; n <= *n_hi; ++n) {
        const Sign shift = pow(eta_pi, n);
        // η(b/h) = sgn_b η(π)^n η(u), η(ch) = sgn_c η(π)^n η(u) for h = π_F^n u
        auto unit = intersect(scaled(box.sgn_b, g.sgn_b * shift), scaled(box.sgn_c, g.sgn_c() * shift));
        if (!unit) {
            continue;
        }
        Rational w = unit_integral(g.setup, *unit, true) * to_int(shift);
        sum.add_term(w, n);
    }
    return sum;
}

}  // namespace

LaurentPoly orb_s(const OrbitData& gamma, const InvariantFunction& f) {
    gamma.validate();
    LaurentPoly total;
    for (const auto& term : f.terms()) {
        LaurentPoly part = box_orbit_sum(term.box, gamma);
        part *= term.coeff;
        total += part;
    }
    return total;
}

bool box_contains(const Box& box, const OrbitData& g) {
    if (!constant_conditions_hold(box, g) || !box.b.contains(g.v_b) || !box.c.contains(g.v_c())) {
        return false;
    }
    auto sign_ok = [](SignConstraint c, Sign s) { return c == SignConstraint::any || c == constraint_for(s); };
    return sign_ok(box.sgn_b, g.sgn_b) && sign_ok(box.sgn_c, g.sgn_c());
}

Rational evaluate(const InvariantFunction& f, const OrbitData& gamma) {
    Rational total = 0;
    for (const auto& term : f.terms()) {
        if (box_contains(term.box, gamma)) {
            total += term.coeff;
        }
    }
    return total;
}

LaurentPoly orb_s_pointwise(const OrbitData& gamma, const InvariantFunction& f, std::int64_t window) {
    gamma.validate();
    const FieldSetup& setup = gamma.setup;
    // O_F^× splits into η-classes of volume 1/2 when E/F is ramified
    std::vector<std::pair<Sign, Rational>> unit_classes;
    if (setup.ramified) {
        unit_classes = {{Sign::plus, Rational(1, 2)}, {Sign::minus, Rational(1, 2)}};
    } else {
        unit_classes = {{Sign::plus, Rational(1)}};
    }
    LaurentPoly sum;
    for (std::int64_t n = -window; n <= window; ++n) {
        for (const auto& [eps, volume] : unit_classes) {
            const ValClass h{n, pow(setup.eta_pi_F, n) * eps, false};
            const Rational value = evaluate(f, gamma.conjugated(h));
            if (value == 0) {
                continue;
            }
            if (n == -window || n == window) {
                throw DivergenceError("support of f along the orbit reaches the summation window");
            }
            sum.add_term(value * volume * to_int(h.eta), n);
        }
    }
    return sum;
}

Rational orb(const OrbitData& gamma, const InvariantFunction& f) { return eval_at_s0(orb_s(gamma, f)); }

LogValue d_orb(const OrbitData& gamma, const InvariantFunction& f) { return d_ds_at_s0(orb_s(gamma, f)); }

Sign transfer_factor(const OrbitData& gamma) { return gamma.sgn_c(); }

InvariantFunction pullback(const InvariantFunction& f, const ValClass& lambda) {
    if (lambda.is_zero || !lambda.in_F()) {
        throw DomainError("pullback requires lambda in F^x");
    }
    InvariantFunction r;
    for (const auto& term : f.terms()) {
        Box box = term.box;
        box.b = box.b.shifted(lambda.val);
        box.c = box.c.shifted(-lambda.val);
        box.sgn_b = scaled(box.sgn_b, lambda.eta);
        box.sgn_c = scaled(box.sgn_c, lambda.eta);
        r.add(term.coeff, box);
    }
    return r;
}

InvariantFunction lemma33_combination(const InvariantFunction& f, const ValClass& lambda) {
    if (!lambda.is_zero && lambda.val == HalfInt(0)) {
        throw DomainError("the pullback difference needs |lambda| != 1");
    }
    return Rational(to_int(lambda.eta)) * f - pullback(f, lambda);
}

ValClass default_regularizer(const FieldSetup& setup) {
    // unramified: π_F itself; ramified: π_F times a unit non-norm when η(π_F) = +1
    (void)setup;
    return {1, Sign::minus, false};
}

InvariantFunction b0_corrector(const Box& unit_box, const ValClass& lambda0, const ValClass& lambda1) {
    InvariantFunction one = InvariantFunction::of(unit_box);
    InvariantFunction alpha_prime = one + pullback(one, lambda0);
    InvariantFunction alpha = alpha_prime + pullback(alpha_prime, lambda1);
    alpha *= Rational(1, 4);
    return alpha;
}

InvariantFunction prop34_regularize(const InvariantFunction& f, const FieldSetup& setup) {
    const ValClass lambda = default_regularizer(setup);
    return prop34_regularize(f, lambda, lambda);
}

InvariantFunction prop34_regularize(const InvariantFunction& f, const ValClass& lambda0, const ValClass& lambda1) {
    for (const auto& lambda : {lambda0, lambda1}) {
        if (lambda.is_zero || !lambda.in_F() || lambda.eta != Sign::minus || lambda.val < HalfInt(1)) {
            throw DomainError("regularizing elements need eta = -1 and v >= 1 in F^x");
        }
    }
    const std::int64_t cutoff = f.level_cutoff();
    InvariantFunction result = f;
    for (const auto& [key, r] : b0_restriction(f, cutoff)) {
        const Box unit_box = Box::unit_diagonal(level_class_interval(key.first, cutoff),
                                                level_class_interval(key.second, cutoff));
        InvariantFunction correction = b0_corrector(unit_box, lambda0, lambda1);
        correction *= r;
        result -= correction;
    }
    return result.simplified();
}

}  // namespace aflc

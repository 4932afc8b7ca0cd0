#include "aflcalc/matching.hpp"

#include <algorithm>

namespace aflc {

bool MatchContext::first_case() const { return setup.ramified || (i + j) % 2 == 0; }

Side MatchContext::g_side() const { return first_case() ? Side::U1 : Side::U0; }

std::int64_t MatchContext::e_rel(std::int64_t i_prime, std::int64_t j_prime) const {
    const std::int64_t ehat = ram_index(setup, std::max(i_prime, j_prime));
    if (e_F <= 0 || e_F % ehat != 0) {
        throw DomainError("e_F = " + std::to_string(e_F) + " is not a multiple of the ramification index " +
                          std::to_string(ehat) + " at level " + std::to_string(std::max(i_prime, j_prime)));
    }
    return e_F / ehat;
}

void MatchContext::validate() const {
    setup.validate();
    if (i < 0 || j < 0) {
        throw DomainError("levels must be >= 0");
    }
    e_rel(i, j);
    e_rel(i, i);
    e_rel(j, j);
}

MatchContext MatchContext::with_e_rel(const FieldSetup& setup, std::int64_t i, std::int64_t j, std::int64_t e_rel) {
    return {setup, i, j, checked_mul(e_rel, ram_index(setup, std::max(i, j)))};
}

Side match_side(const OrbitData& gamma) { return side_of(gamma.sgn_1mNa); }

bool in_SF_G(const OrbitData& gamma, const MatchContext& ctx) { return match_side(gamma) == ctx.g_side(); }

GInvariants g_invariants(const OrbitData& gamma, const MatchContext& ctx, const DiagonalHeights& supplied) {
    gamma.validate();
    if (!in_SF_G(gamma, ctx)) {
        throw DomainError("orbit does not lie in S(F)_G");
    }
    if (gamma.v_a != HalfInt(0)) {
        throw DomainError("heights are defined for unit diagonal entries");
    }
    auto diagonal = [&](const ExtInt& lvl, std::int64_t level, const std::optional<std::int64_t>& given) -> ExtInt {
        if (!lvl.is_finite() || lvl.value() >= level) {
            return ExtInt::infinity();
        }
        if (given) {
            return *given;
        }
        // a = x + π_F^lvl y with y ∉ O_F + π_F O_E: v_D(π_F^lvl y) over O_level
        return 2 * lvl.value() + (ctx.setup.ramified ? 1 : 0);
    };
    GInvariants gi;
    gi.off_diag_height = gamma.t;
    gi.diag_height_1 = diagonal(gamma.lvl_a, ctx.i, supplied.h1);
    gi.diag_height_4 = diagonal(gamma.lvl_d, ctx.j, supplied.h4);
    return gi;
}

namespace {

ExtInt entry_bound(const MatchContext& ctx, std::int64_t i, std::int64_t j, const ExtInt& height) {
    if (!height.is_finite()) {
        return ExtInt::infinity();
    }
    const std::int64_t l = height.value();
    if (!class_height_attainable(ctx.setup, i, j, l)) {
        throw AdmissibilityError("height " + std::to_string(l) + " is not a class height for levels (" +
                                 std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    return lift_bound_closed({ctx.setup, i, j, ctx.e_rel(i, j), l});
}

}  // namespace

ExtInt int_g(const GInvariants& gi, const MatchContext& ctx) {
    const ExtInt off = entry_bound(ctx, ctx.i, ctx.j, gi.off_diag_height);
    const ExtInt g1 = entry_bound(ctx, ctx.i, ctx.i, gi.diag_height_1);
    const ExtInt g4 = entry_bound(ctx, ctx.j, ctx.j, gi.diag_height_4);
    return min(min(off, off), min(g1, g4));
}

bool afl_transfer_holds(const OrbitData& gamma, Rational* value, Rational* expected) {
    const InvariantFunction one_k = InvariantFunction::of(Box::integral_matrices());
    const Rational v = to_int(transfer_factor(gamma)) * orb(gamma, one_k);
    const Rational e = (gamma.v_a >= HalfInt(0) && gamma.t % 2 == 0) ? 1 : 0;
    if (value) {
        *value = v;
    }
    if (expected) {
        *expected = e;
    }
    return v == e;
}

AflRow afl_verify(std::int64_t q, std::int64_t t, std::int64_t v_b) {
    AflRow row;
    row.q = q;
    row.t = t;
    row.v_b = v_b;
    const OrbitData gamma = OrbitData::unramified(q, t, v_b);
    const bool transfer_ok = afl_transfer_holds(gamma, &row.transfer_value, &row.transfer_expected);
    if (t % 2 == 0) {
        row.pass = transfer_ok;
        return row;
    }
    const MatchContext ctx{FieldSetup::unramified(q), 0, 0, 1};
    const InvariantFunction one_k = InvariantFunction::of(Box::integral_matrices());
    row.lhs = Rational(to_int(transfer_factor(gamma))) * d_orb(gamma, one_k);
    const ExtInt intersection = int_g(g_invariants(gamma, ctx), ctx);
    row.rhs = LogValue::log_q(intersection.value());
    row.closed_form = LogValue::log_q(ratio(1 + t, 2));
    row.pass = transfer_ok && row.lhs == row.rhs && row.lhs == row.closed_form;
    return row;
}

namespace {

/// γ on the G side with unit diagonal, or nullopt when t cannot occur there.
std::optional<OrbitData> g_side_orbit(const MatchContext& ctx, std::int64_t t, HalfInt v_b, Sign sgn_b,
                                      const ExtInt& lvl_a, const ExtInt& lvl_d) {
    const Sign side = side_sign(ctx.g_side());
    if (!ctx.setup.ramified) {
        if (parity_sign(t) != side || !v_b.is_integer()) {
            return std::nullopt;
        }
        return OrbitData::unramified(ctx.setup.q, t, v_b.as_integer(), lvl_a, lvl_d);
    }
    return OrbitData::ramified(ctx.setup, t, side, v_b, sgn_b, lvl_a, lvl_d);
}

}  // namespace

std::int64_t ati_saturation_point(const MatchContext& ctx, const GInvariants& at_large_t) {
    const ExtInt diag = min(entry_bound(ctx, ctx.i, ctx.i, at_large_t.diag_height_1),
                            entry_bound(ctx, ctx.j, ctx.j, at_large_t.diag_height_4));
    if (!diag.is_finite()) {
        return ctx.i + ctx.j;
    }
    // the off-diagonal bound is increasing in t; find where it passes the diagonal one
    for (std::int64_t t = 0;; ++t) {
        if (!class_height_attainable(ctx.setup, ctx.i, ctx.j, t)) {
            continue;
        }
        if (lift_bound_closed({ctx.setup, ctx.i, ctx.j, ctx.e_rel(ctx.i, ctx.j), t}) >= diag.value()) {
            return t;
        }
    }
}

AtiGrowthReport ati_growth_check(const MatchContext& ctx, std::int64_t t_max, ExtInt lvl_a, ExtInt lvl_d) {
    ctx.validate();
    AtiGrowthReport r;
    r.ctx = ctx;
    r.lvl_a = lvl_a;
    r.lvl_d = lvl_d;
    r.t_max = t_max;
    std::optional<GInvariants> sample;
    for (std::int64_t t = 0; t <= t_max; ++t) {
        if (!class_height_attainable(ctx.setup, ctx.i, ctx.j, t)) {
            continue;
        }
        const auto gamma = g_side_orbit(ctx, t, 0, Sign::plus, lvl_a, lvl_d);
        if (!gamma) {
            continue;
        }
        const GInvariants gi = g_invariants(*gamma, ctx);
        sample = gi;
        r.values.emplace_back(t, int_g(gi, ctx));
    }
    if (!sample) {
        r.message = "no admissible t in range";
        return r;
    }
    r.infinite_regime = !sample->diag_height_1.is_finite() && !sample->diag_height_4.is_finite();
    r.t0 = ati_saturation_point(ctx, *sample);
    bool constant = true;
    std::size_t tail = 0;
    for (const auto& [t, value] : r.values) {
        if (t < r.t0) {
            continue;
        }
        ++tail;
        const std::int64_t c = r.infinite_regime ? 2 * value.value() - ctx.e_F * t : value.value();
        const int parity = static_cast<int>(t % 2);
        auto [it, inserted] = r.constants.emplace(parity, c);
        if (!inserted && it->second != c) {
            constant = false;
        }
    }
    if (!r.infinite_regime && constant && !r.constants.empty()) {
        // the saturated value is the smaller diagonal bound
        const ExtInt diag = min(entry_bound(ctx, ctx.i, ctx.i, sample->diag_height_1),
                                entry_bound(ctx, ctx.j, ctx.j, sample->diag_height_4));
        for (const auto& kv : r.constants) {
            constant = constant && kv.second == diag.value();
        }
    }
    r.pass = constant && tail > 0;
    if (tail == 0) {
        r.message = "t_max below the growth start t0 = " + std::to_string(r.t0);
    } else if (!constant) {
        r.message = r.infinite_regime ? "2 Int - e_F t is not constant" : "Int does not saturate";
    }
    return r;
}

namespace {

using OKey = GermKey;

OKey o_key(const GermData& g, const OrbitData& gamma) { return g.key_of(gamma); }

/// Whether values agree per key.
bool constant_per_key(const std::vector<std::pair<OKey, LogValue>>& values, std::map<OKey, LogValue>* out) {
    std::map<OKey, LogValue> seen;
    bool ok = true;
    for (const auto& [key, v] : values) {
        auto [it, inserted] = seen.emplace(key, v);
        if (!inserted && !(it->second == v)) {
            ok = false;
        }
    }
    if (out) {
        *out = std::move(seen);
    }
    return ok;
}

}  // namespace

AtiEndToEndReport ati_end_to_end(const MatchContext& ctx, std::int64_t t_span) {
    ctx.validate();
    AtiEndToEndReport r;
    r.ctx = ctx;
    const FieldSetup& setup = ctx.setup;
    const std::int64_t cutoff = std::max(ctx.i, ctx.j);

    // β = 1 on O_i^× × O_j^×, placed on the side opposite to S(F)_G
    for (std::int64_t ka = 0; ka <= cutoff; ++ka) {
        for (std::int64_t kd = 0; kd <= cutoff; ++kd) {
            if (ka >= ctx.i && kd >= ctx.j) {
                (ctx.first_case() ? r.c0 : r.c1)[GermKey{ka, kd, 0}] = ctx.e_F;
            }
        }
    }
    r.germ = transfer_germ_solve(r.c0, r.c1, Sign::plus, setup.ramified, cutoff);
    r.f = germ_reconstruct(r.germ, setup);
    const GermData extracted = germ_extract(r.f, setup);
    r.round_trip = extracted.equivalent(r.germ);

    std::vector<ExtInt> lvls;
    for (std::int64_t k = 0; k <= cutoff; ++k) {
        lvls.push_back(level_class_representative(k, cutoff));
    }
    std::vector<std::int64_t> fracs{0};
    if (setup.ramified) {
        fracs.push_back(1);
    }
    std::vector<Sign> b_signs{Sign::plus};
    if (setup.ramified) {
        b_signs.push_back(Sign::minus);
    }

    // transfer at s = 0 on both sides, near B0
    r.transfer = true;
    for (std::int64_t t = extracted.validity_threshold; t < extracted.validity_threshold + 4; ++t) {
        for (const ExtInt& la : lvls) {
            for (const ExtInt& ld : lvls) {
                for (std::int64_t frac : fracs) {
                    for (Sign side : {Sign::plus, Sign::minus}) {
                        const HalfInt v_b = HalfInt::from_doubled(frac);
                        OrbitData gamma;
                        if (setup.ramified) {
                            gamma = OrbitData::ramified(setup, t, side, v_b, Sign::plus, la, ld);
                        } else {
                            if (parity_sign(t) != side || frac != 0) {
                                continue;
                            }
                            gamma = OrbitData::unramified(setup.q, t, 0, la, ld);
                        }
                        GermKey key = extracted.key_of(gamma);
                        key.v_frac_doubled = 0;
                        const BaseValues& target = side == Sign::plus ? r.c0 : r.c1;
                        auto it = target.find(key);
                        const Rational want = it == target.end() ? Rational(0) : it->second;
                        if (to_int(transfer_factor(gamma)) * orb(gamma, r.f) != want) {
                            r.transfer = false;
                        }
                    }
                }
            }
        }
    }

    // t range: past the germ threshold, the growth start and every saturation point
    std::int64_t t_start = std::max<std::int64_t>(extracted.validity_threshold, ctx.i + ctx.j);
    for (const ExtInt& la : lvls) {
        for (const ExtInt& ld : lvls) {
            for (std::int64_t t = t_start;; ++t) {
                auto gamma = g_side_orbit(ctx, t, 0, Sign::plus, la, ld);
                if (gamma && class_height_attainable(setup, ctx.i, ctx.j, t)) {
                    t_start = std::max(t_start, ati_saturation_point(ctx, g_invariants(*gamma, ctx)));
                    break;
                }
            }
        }
    }
    std::vector<std::int64_t> ts;
    for (std::int64_t t = t_start; static_cast<std::int64_t>(ts.size()) < t_span; ++t) {
        if (class_height_attainable(setup, ctx.i, ctx.j, t) && g_side_orbit(ctx, t, 0, Sign::plus, 0, 0)) {
            ts.push_back(t);
        }
    }
    r.t_start = ts.front();
    r.t_end = ts.back();

    std::vector<std::pair<OKey, LogValue>> o_values;
    std::vector<std::pair<OKey, LogValue>> control_values;
    for (std::int64_t t : ts) {
        for (const ExtInt& la : lvls) {
            for (const ExtInt& ld : lvls) {
                for (std::int64_t frac : fracs) {
                    for (std::int64_t shift = -2; shift <= 2; ++shift) {
                        for (Sign sgn_b : b_signs) {
                            const HalfInt v_b = HalfInt::from_doubled(frac) + HalfInt(shift);
                            auto gamma = g_side_orbit(ctx, t, v_b, sgn_b, la, ld);
                            if (!gamma) {
                                continue;
                            }
                            AtiPoint p;
                            p.gamma = *gamma;
                            p.int_g = int_g(g_invariants(*gamma, ctx), ctx);
                            const Rational omega = to_int(transfer_factor(*gamma));
                            p.omega_d_orb = omega * d_orb(*gamma, r.f);
                            const LogValue rhs = LogValue::log_q(p.int_g.value());
                            p.o = p.omega_d_orb - rhs;
                            o_values.emplace_back(o_key(r.germ, *gamma), p.o);
                            control_values.emplace_back(o_key(r.germ, *gamma), LogValue{} - rhs);
                            r.points.push_back(std::move(p));
                        }
                    }
                }
            }
        }
    }
    std::map<OKey, LogValue> o_constants;
    r.o_constant = constant_per_key(o_values, &o_constants);
    r.negative_control_rejected = !constant_per_key(control_values, nullptr);

    r.f_corr_germ.ramified = setup.ramified;
    r.f_corr_germ.lvl_cutoff = cutoff;
    bool pure_log = true;
    for (const auto& [key, o] : o_constants) {
        pure_log = pure_log && o.rational_part == 0;
        if (o.log_q_part != 0) {
            const HalfInt e = key.v_frac_doubled == 1 ? HalfInt::from_doubled(1) : HalfInt(0);
            r.f_corr_germ.a1.emplace(key, LaurentPoly::monomial(o.log_q_part, e));
        }
    }
    r.identity = false;
    if (r.o_constant && pure_log) {
        const InvariantFunction f_corr = germ_reconstruct(r.f_corr_germ, setup);
        const std::int64_t corr_threshold = germ_extract(f_corr, setup).validity_threshold;
        r.f_corr_germ.validity_threshold = corr_threshold;
        std::size_t checked = 0;
        bool ok = true;
        for (const AtiPoint& p : r.points) {
            if (p.gamma.t < corr_threshold) {
                continue;
            }
            ++checked;
            const Rational omega = to_int(transfer_factor(p.gamma));
            const LogValue rhs = LogValue::log_q(p.int_g.value()) + LogValue::log_q(omega * orb(p.gamma, f_corr));
            ok = ok && p.omega_d_orb == rhs;
        }
        r.identity = ok && checked > 0;
    }
    r.pass = r.round_trip && r.transfer && r.o_constant && r.identity && r.negative_control_rejected;
    if (!r.round_trip) {
        r.message = "germ round trip failed";
    } else if (!r.transfer) {
        r.message = "reconstructed f does not transfer to (C0, C1)";
    } else if (!r.o_constant) {
        r.message = "o(gamma) is not constant near B0";
    } else if (!r.identity) {
        r.message = "identity with f_corr fails";
    } else if (!r.negative_control_rejected) {
        r.message = "negative control f = 0 was not rejected";
    }
    return r;
}

}  // namespace aflc

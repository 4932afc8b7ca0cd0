// Acceptance run: one PASS/FAIL line per criterion, exact equality throughout.

#include "battery.hpp"

#include "aflcalc/deformation.hpp"
#include "aflcalc/matching.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace aflc;
using namespace aflc::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& what) {
        if (pass) {
            detail << "first failure: " << what << "; ";
        }
        pass = false;
    }
};

const std::vector<ValClass>& lambdas_for(const FieldSetup& setup) {
    static std::map<bool, std::vector<ValClass>> cache;
    auto& out = cache[setup.ramified];
    if (out.empty()) {
        for (std::int64_t v = 1; v <= 3; ++v) {
            if (setup.ramified) {
                out.push_back({v, Sign::plus, false});
                out.push_back({v, Sign::minus, false});
            } else {
                out.push_back({v, parity_sign(v), false});
            }
        }
    }
    return out;
}

void criterion1(Outcome& out) {
    std::size_t rows = 0;
    for (std::int64_t q : {3, 5, 7}) {
        for (std::int64_t t = 1; t <= 21; t += 2) {
            for (std::int64_t vb = -8; vb <= 8; ++vb) {
                const AflRow r = afl_verify(q, t, vb);
                ++rows;
                const LogValue expected = LogValue::log_q(ratio(1 + t, 2));
                if (!r.pass || r.lhs != expected || r.rhs != expected || r.closed_form != expected) {
                    out.fail("q=" + std::to_string(q) + " t=" + std::to_string(t) + " v_b=" + std::to_string(vb));
                }
            }
        }
    }
    out.detail << rows << " orbits";
}

std::int64_t vb_for_negative_a(std::int64_t va, std::int64_t k) { return va + (k % 7) - 3; }

void criterion2(Outcome& out) {
    std::size_t rows = 0;
    const InvariantFunction one_k = InvariantFunction::of(Box::integral_matrices());
    for (std::int64_t q : {3, 5, 7}) {
        for (std::int64_t t = 0; t <= 22; ++t) {
            for (std::int64_t vb = -8; vb <= 8; ++vb) {
                const OrbitData gamma = OrbitData::unramified(q, t, vb);
                const Rational value = to_int(transfer_factor(gamma)) * orb(gamma, one_k);
                const Rational expected = t % 2 == 0 ? Rational(1) : Rational(0);
                ++rows;
                if (value != expected) {
                    out.fail("q=" + std::to_string(q) + " t=" + std::to_string(t) + " v_b=" + std::to_string(vb));
                }
            }
            // a of negative valuation: no conjugate is integral
            for (std::int64_t va = -3; va <= -1; ++va) {
                OrbitData gamma;
                gamma.setup = FieldSetup::unramified(q);
                gamma.v_a = va;
                gamma.t = 2 * va;
                gamma.sgn_1mNa = Sign::plus;
                gamma.v_b = vb_for_negative_a(va, t);
                gamma.sgn_b = parity_sign(gamma.v_b.as_integer());
                gamma.validate();
                Rational value;
                Rational expected;
                const bool ok = afl_transfer_holds(gamma, &value, &expected);
                ++rows;
                if (!ok || value != 0 || expected != 0) {
                    out.fail("support test v_a=" + std::to_string(va));
                }
            }
        }
    }
    out.detail << rows << " orbits";
}

void criterion3(Outcome& out) {
    std::size_t rows = 0;
    std::size_t skipped = 0;
    for (bool ram : {false, true}) {
        for (std::int64_t q = 2; q <= 5; ++q) {
            const FieldSetup setup = ram ? FieldSetup::ramified_with(q, Sign::plus) : FieldSetup::unramified(q);
            for (std::int64_t i = 0; i <= 5; ++i) {
                for (std::int64_t j = 0; j <= 5; ++j) {
                    for (std::int64_t e = 1; e <= 3; ++e) {
                        for (std::int64_t l = 0; l <= 25; ++l) {
                            if (!class_height_attainable(setup, i, j, l)) {
                                ++skipped;
                                continue;
                            }
                            const DeformQuery dq{setup, i, j, e, l};
                            const DeformQuery swapped{setup, j, i, e, l};
                            const std::int64_t closed = lift_bound_closed(dq);
                            const std::int64_t oracle = lift_bound_oracle(dq);
                            ++rows;
                            if (closed != oracle || closed != lift_bound_closed(swapped) ||
                                oracle != lift_bound_oracle(swapped)) {
                                out.fail("ram=" + std::to_string(ram) + " q=" + std::to_string(q) +
                                         " i=" + std::to_string(i) + " j=" + std::to_string(j) +
                                         " e=" + std::to_string(e) + " l=" + std::to_string(l));
                            }
                        }
                    }
                }
            }
        }
    }
    out.detail << rows << " heights, " << skipped << " inadmissible skipped";
}

void criterion4(Outcome& out) {
    std::size_t functions = 0;
    std::size_t orbits = 0;
    for (const FieldSetup& setup : battery_setups()) {
        for (const auto& [name, f] : b0_battery(setup)) {
            ++functions;
            const GermData g = germ_extract(f, setup);
            const GermData again = germ_extract(germ_reconstruct(g, setup), setup);
            if (!again.equivalent(g)) {
                out.fail("round trip " + name);
            }
            const auto grid = orbit_grid(setup, g.validity_threshold, g.validity_threshold + 10, -5, 5, sample_levels());
            for (const OrbitData& gamma : grid) {
                ++orbits;
                if (orb_s(gamma, f) != g.expansion_at(gamma)) {
                    out.fail("expansion " + name + " t=" + std::to_string(gamma.t));
                    break;
                }
            }
        }
    }
    out.detail << functions << " functions, " << orbits << " orbits";
}

void criterion5(Outcome& out) {
    std::size_t checks = 0;
    for (const FieldSetup& setup : battery_setups()) {
        const auto grid = orbit_grid(setup, 0, 8, -4, 4, sample_levels());
        auto battery = b0_battery(setup);
        battery.push_back({"1_K", InvariantFunction::of(Box::integral_matrices())});
        for (const auto& [name, f] : battery) {
            for (const ValClass& lambda : lambdas_for(setup)) {
                const InvariantFunction pulled = pullback(f, lambda);
                const InvariantFunction comb = lemma33_combination(f, lambda);
                const LaurentPoly inverse_eta = eta_s(lambda.inverse(), setup);
                const Rational eta = to_int(lambda.eta);
                // log|λ| = -v(λ) log q
                const Rational log_abs = -lambda.val.to_rational();
                for (const OrbitData& gamma : grid) {
                    ++checks;
                    const LogValue d = d_orb(gamma, f);
                    const Rational o = orb(gamma, f);
                    if (orb_s(gamma, pulled) != inverse_eta * orb_s(gamma, f) ||
                        d_orb(gamma, pulled) != eta * (d - LogValue::log_q(log_abs * o)) ||
                        d_orb(gamma, comb) != LogValue::log_q(eta * log_abs * o)) {
                        out.fail(name);
                        break;
                    }
                }
            }
        }
    }
    out.detail << checks << " identities";
}

void criterion6(Outcome& out) {
    std::size_t checks = 0;
    for (const FieldSetup& setup : battery_setups()) {
        const auto grid = orbit_grid(setup, 0, 10, -5, 5, sample_levels());
        std::vector<Named> inputs = {
            {"1_K", InvariantFunction::of(Box::integral_matrices())},
            {"units", InvariantFunction::of(Box::unit_diagonal())},
            {"level box", InvariantFunction::of(Box::unit_diagonal(LevelInterval::at_least(1), LevelInterval::exactly(0)))},
        };
        for (const auto& n : b0_battery(setup)) {
            inputs.push_back(n);
        }
        for (const auto& [name, f] : inputs) {
            const InvariantFunction r = prop34_regularize(f, setup);
            if (!vanishes_on_b0(r)) {
                out.fail("not vanishing on B0: " + name);
            }
            for (const OrbitData& gamma : grid) {
                ++checks;
                if (orb(gamma, r) != orb(gamma, f) || d_orb(gamma, r) != d_orb(gamma, f)) {
                    out.fail(name);
                    break;
                }
            }
        }
    }
    out.detail << checks << " orbits";
}

void criterion7(Outcome& out) {
    std::size_t zero_orb = 0;
    std::size_t examined = 0;
    for (const FieldSetup& setup : battery_setups()) {
        const auto grid = orbit_grid(setup, 0, 8, -3, 3, sample_levels());
        const ValClass lambda = default_regularizer(setup);
        const InvariantFunction units = InvariantFunction::of(Box::unit_diagonal());
        const InvariantFunction one_k = InvariantFunction::of(Box::integral_matrices());
        std::vector<Named> inputs = b0_battery(setup);
        inputs.push_back({"alpha", b0_corrector(Box::unit_diagonal(), lambda, lambda)});
        inputs.push_back({"alpha'", units + pullback(units, lambda)});
        inputs.push_back({"1_K - regularized", one_k - prop34_regularize(one_k, setup)});
        inputs.push_back({"units - regularized", units - prop34_regularize(units, setup)});
        for (const auto& [name, f] : inputs) {
            ++examined;
            const auto verdict = corollary310_check(f, setup, grid);
            if (!verdict) {
                continue;
            }
            ++zero_orb;
            if (!*verdict) {
                out.fail(name);
            }
        }
    }
    if (zero_orb == 0) {
        out.fail("no function with vanishing Orb");
    }
    out.detail << zero_orb << " of " << examined << " functions have vanishing Orb";
}

void criterion8(Outcome& out) {
    const InvariantFunction units = InvariantFunction::of(Box::unit_diagonal());
    for (std::int64_t t = 0; t <= 30; ++t) {
        const LaurentPoly p = orb_s(OrbitData::unramified(3, t, 0), units);
        if (p.terms().size() != static_cast<std::size_t>(t + 1)) {
            out.fail("t=" + std::to_string(t) + " has " + std::to_string(p.terms().size()) + " monomials");
        }
    }
    out.detail << "t in [0, 30]";
}

void criterion9(Outcome& out) {
    std::size_t reports = 0;
    for (bool ram : {false, true}) {
        for (std::int64_t q : {2, 3}) {
            const FieldSetup setup = ram ? FieldSetup::ramified_with(q, Sign::plus) : FieldSetup::unramified(q);
            for (std::int64_t i = 0; i <= 4; ++i) {
                for (std::int64_t j = 0; j <= 4; ++j) {
                    for (std::int64_t e = 1; e <= 2; ++e) {
                        const MatchContext ctx = MatchContext::with_e_rel(setup, i, j, e);
                        std::vector<ExtInt> la{ExtInt::infinity()};
                        std::vector<ExtInt> ld{ExtInt::infinity()};
                        for (std::int64_t k = 0; k < i; ++k) {
                            la.push_back(k);
                        }
                        for (std::int64_t k = 0; k < j; ++k) {
                            ld.push_back(k);
                        }
                        for (const ExtInt& a : la) {
                            for (const ExtInt& d : ld) {
                                ++reports;
                                const AtiGrowthReport r = ati_growth_check(ctx, i + j + 12, a, d);
                                if (!r.pass) {
                                    out.fail("growth ram=" + std::to_string(ram) + " q=" + std::to_string(q) +
                                             " i=" + std::to_string(i) + " j=" + std::to_string(j) + ": " +
                                             r.message);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for (auto [i, j] : {std::pair<std::int64_t, std::int64_t>{0, 0}, {0, 1}, {1, 1}}) {
        const AtiEndToEndReport r = ati_end_to_end(MatchContext::with_e_rel(FieldSetup::unramified(3), i, j, 1));
        if (!r.pass || !r.o_constant || !r.identity || !r.negative_control_rejected || r.f_corr_germ.a1.empty()) {
            out.fail("end to end i=" + std::to_string(i) + " j=" + std::to_string(j) + ": " + r.message);
        }
    }
    out.detail << reports << " growth reports, 3 end-to-end witnesses";
}

}  // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<void(Outcome&)> run;
        /// wall-clock budget in ms, 0 for none
        double budget_ms = 0;
    };
    const std::vector<Criterion> criteria = {
        {"AFL derivative identity at level zero", criterion1, 1000},
        {"AFL transfer statement", criterion2},
        {"deformation closed form vs recursion, integral and symmetric", criterion3, 5000},
        {"germ round trip and expansion", criterion4},
        {"transformation law and pullback difference", criterion5},
        {"B0 regularization", criterion6},
        {"vanishing Orb gives vanishing germ constants", criterion7},
        {"unit box monomial count", criterion8},
        {"intersection growth and end-to-end witnesses", criterion9},
    };
    int failures = 0;
    int n = 0;
    for (const auto& [name, run, budget_ms] : criteria) {
        ++n;
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try {
            run(out);
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (budget_ms > 0 && ms > budget_ms) {
            out.fail("over the " + std::to_string(static_cast<long>(budget_ms)) + " ms budget");
        }
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << name << " (" << out.detail.str()
                  << ", " << static_cast<long>(ms) << " ms)\n";
        failures += out.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

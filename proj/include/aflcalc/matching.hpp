#pragma once

// Orbit matching between S(F) and the two unitary groups, the intersection
// number Int(g) assembled from entry-wise lift bounds, and the verifiers for
// the level-zero identity and the growth/germ skeleton at higher level.

#include "aflcalc/deformation.hpp"
#include "aflcalc/germ.hpp"

#include <map>
#include <vector>

namespace aflc {

struct MatchContext {
    FieldSetup setup;
    std::int64_t i = 0;
    std::int64_t j = 0;
    /// Ramification index of the deformation base over the completed maximal
    /// unramified extension of O_F.
    std::int64_t e_F = 1;

    /// Ramified, or i + j even.
    bool first_case() const;
    /// The side S(F)_G matches into: U1 in the first case, U0 otherwise.
    Side g_side() const;
    /// e_F / ê_max{i', j'}; DomainError unless a positive integer.
    std::int64_t e_rel(std::int64_t i_prime, std::int64_t j_prime) const;
    void validate() const;

    /// The context with e_F = e_rel · ê_max{i, j}.
    static MatchContext with_e_rel(const FieldSetup& setup, std::int64_t i, std::int64_t j, std::int64_t e_rel);
};

Side match_side(const OrbitData& gamma);
bool in_SF_G(const OrbitData& gamma, const MatchContext& ctx);

struct GInvariants {
    std::int64_t off_diag_height = 0;
    ExtInt diag_height_1 = ExtInt::infinity();
    ExtInt diag_height_4 = ExtInt::infinity();
    friend bool operator==(const GInvariants&, const GInvariants&) = default;
};

/// Class heights of g1, g4 for diagonal entries below the level; when absent
/// they are 2·lvl (unramified) and 2·lvl + 1 (ramified).
struct DiagonalHeights {
    std::optional<std::int64_t> h1;
    std::optional<std::int64_t> h4;
};

GInvariants g_invariants(const OrbitData& gamma, const MatchContext& ctx, const DiagonalHeights& supplied = {});

/// Minimum of the four entry-wise lift bounds.
ExtInt int_g(const GInvariants& gi, const MatchContext& ctx);

struct AflRow {
    std::int64_t q = 0;
    std::int64_t t = 0;
    std::int64_t v_b = 0;
    /// ω ∂Orb(1_K) for odd t.
    LogValue lhs;
    /// Int(g) log q for odd t.
    LogValue rhs;
    /// (1 + t)/2 log q for odd t.
    LogValue closed_form;
    /// ω Orb(1_K), and what it must be.
    Rational transfer_value;
    Rational transfer_expected;
    bool pass = false;
};

/// Level zero, unramified. Odd t: the derivative identity plus Orb = 0;
/// even t: ω Orb(1_K) = 1.
AflRow afl_verify(std::int64_t q, std::int64_t t, std::int64_t v_b);

/// The transfer statement at an arbitrary γ: ω Orb(1_K) is 1 for integral a
/// with t even, 0 otherwise.
bool afl_transfer_holds(const OrbitData& gamma, Rational* value = nullptr, Rational* expected = nullptr);

struct AtiGrowthReport {
    MatchContext ctx;
    ExtInt lvl_a = ExtInt::infinity();
    ExtInt lvl_d = ExtInt::infinity();
    bool infinite_regime = true;
    /// First t of the checked tail.
    std::int64_t t0 = 0;
    std::int64_t t_max = 0;
    /// (t, Int(g(t))) over the attainable t in S(F)_G.
    std::vector<std::pair<std::int64_t, ExtInt>> values;
    /// Per t parity: 2 Int - e_F t (infinite regime) or the saturated Int.
    std::map<int, std::int64_t> constants;
    bool pass = false;
    std::string message;
};

/// The theoretical first t from which Int(g(t)) no longer depends on t.
std::int64_t ati_saturation_point(const MatchContext& ctx, const GInvariants& at_large_t);

AtiGrowthReport ati_growth_check(const MatchContext& ctx, std::int64_t t_max, ExtInt lvl_a = ExtInt::infinity(),
                                 ExtInt lvl_d = ExtInt::infinity());

struct AtiPoint {
    OrbitData gamma;
    ExtInt int_g;
    LogValue omega_d_orb;
    /// ω ∂Orb(f) - Int(g) log q
    LogValue o;
};

struct AtiEndToEndReport {
    MatchContext ctx;
    BaseValues c0;
    BaseValues c1;
    GermData germ;
    InvariantFunction f;
    GermData f_corr_germ;
    std::int64_t t_start = 0;
    std::int64_t t_end = 0;
    std::vector<AtiPoint> points;
    bool round_trip = false;
    bool transfer = false;
    bool o_constant = false;
    bool identity = false;
    bool negative_control_rejected = false;
    bool pass = false;
    std::string message;
};

/// Builds f from the prescribed (C0, C1) through its germ, measures o(γ) on
/// S(F)_G near B0 over t_span consecutive admissible t, and checks the
/// identity ω ∂Orb(f) = Int(g) log q + ω Orb(f_corr) log q with f_corr
/// reconstructed from the constants of o.
AtiEndToEndReport ati_end_to_end(const MatchContext& ctx, std::int64_t t_span = 10);

}  // namespace aflc

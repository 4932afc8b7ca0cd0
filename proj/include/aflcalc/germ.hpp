#pragma once

// Germ expansions near B0:
//
//   Orb_γ(f, s) = η_s(b) A0(s; a, d, b) + η_s(c)^{-1} A1(s; a, d, c)
//
// for f vanishing on B0 and γ close to diag(a, d). Base points are keyed on
// what box functions can see: the conductor-level classes of a and d and the
// class of v(b) (resp. v(c)) modulo v(F^×) = Z.

#include "aflcalc/orbital.hpp"

#include <compare>
#include <functional>
#include <map>
#include <vector>

namespace aflc {

struct GermKey {
    std::int64_t lvl_a_class = 0;
    std::int64_t lvl_d_class = 0;
    /// 2·(v mod 1): 0, or 1 for half-integral valuations (ramified only).
    int v_frac_doubled = 0;

    friend auto operator<=>(const GermKey&, const GermKey&) = default;
};

struct GermData {
    bool ramified = false;
    std::int64_t lvl_cutoff = 0;
    /// The expansion is exact for every γ with v(1 - N(a)) >= this.
    std::int64_t validity_threshold = 1;
    std::map<GermKey, LaurentPoly> a0;
    std::map<GermKey, LaurentPoly> a1;

    /// Values at an arbitrary (unclamped) key; classes above the cutoff fold
    /// into the top class.
    LaurentPoly A0(GermKey key) const;
    LaurentPoly A1(GermKey key) const;
    /// Every key of the class grid (v_frac 1 only for ramified data).
    std::vector<GermKey> keys() const;
    GermKey key_of(const OrbitData& gamma) const;

    bool is_zero() const;
    /// Equality as functions on base data, independent of cutoffs.
    bool equivalent(const GermData& other) const;
    /// η_s(b) A0 + η_s(c)^{-1} A1 at γ.
    LaurentPoly expansion_at(const OrbitData& gamma) const;
};

/// Germ of f; f must vanish on B0 (PreconditionError otherwise).
GermData germ_extract(const InvariantFunction& f, const FieldSetup& setup);

/// Germ of an arbitrary f via its B0-regularization.
GermData germ_of(const InvariantFunction& f, const FieldSetup& setup);

/// An f vanishing on B0 whose germ is g. Each monomial c·T^m at a key with
/// v_frac must satisfy m + v_frac ∈ Z.
InvariantFunction germ_reconstruct(const GermData& g, const FieldSetup& setup);

/// The value/derivative form of the germ of ∂Orb:
///   ∂Orb_γ = η(b)[v(b) A0 + A0'] + η(c)^{-1}[v(c) A1 + A1'].
struct DerivativeGerm {
    LogValue a0;
    LogValue a0_prime;
    LogValue a1;
    LogValue a1_prime;
};

std::map<GermKey, DerivativeGerm> germ_derivative_form(const GermData& g);
LogValue derivative_expansion_at(const std::map<GermKey, DerivativeGerm>& form, const GermData& g,
                                 const OrbitData& gamma);

/// Constant germ values per base point (a, d): keys with v_frac = 0.
using BaseValues = std::map<GermKey, Rational>;

/// Solves η(1-N(a)) η(b0/b̄0) A0 + A1 = C0 (U0 side) / C1 (U1 side) by
/// A0 = η(b̄0/b0)(C0 - C1)/2, A1 = (C0 + C1)/2.
GermData transfer_germ_solve(const BaseValues& c0, const BaseValues& c1, Sign side_sign_b0, bool ramified,
                             std::int64_t lvl_cutoff);

/// The left side of the matching system for one key and side.
Rational transfer_system_lhs(const GermData& g, GermKey key, Side side, Sign side_sign_b0);

/// Germ-level check that an f with identically vanishing Orb has C0(0) =
/// C1(0) = 0. nullopt when Orb(γ, f) != 0 somewhere on the grid.
std::optional<bool> corollary310_check(const InvariantFunction& f, const FieldSetup& setup,
                                       const std::vector<OrbitData>& grid);

}  // namespace aflc

#pragma once

// Regular semisimple orbits on S(F) = {γ ∈ GL2(E) : γγ̄ = 1} represented by
// their invariants, test functions represented as finite rational
// combinations of valuation/sign boxes, and the orbital integrals
//
//   Orb_γ(f, s) = ∫_{F^×} f(h^{-1}γh) η(h) |h|^s dh
//
// computed exactly as Laurent polynomials in T = q^{-s}. Conjugation by
// h = diag(h, 1) with v(h) = n sends (b, c) to (b/h, ch), so the integral is
// a finite sum over n of η(π_F)^n T^n times a unit-shell measure.

#include "aflcalc/field_model.hpp"
#include "aflcalc/symbolic.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace aflc {

/// Valuation interval over (1/2)Z; a missing endpoint is ∓∞.
struct Interval {
    std::optional<HalfInt> lo;
    std::optional<HalfInt> hi;

    static Interval closed(HalfInt lo, HalfInt hi) { return {lo, hi}; }
    static Interval point(HalfInt x) { return {x, x}; }
    static Interval at_least(HalfInt lo) { return {lo, std::nullopt}; }
    static Interval everything() { return {}; }

    bool contains(HalfInt x) const { return (!lo || *lo <= x) && (!hi || x <= *hi); }
    bool unbounded_above() const { return !hi.has_value(); }
    bool is_empty() const { return lo && hi && *hi < *lo; }
    Interval shifted(HalfInt by) const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Conductor-level interval over Z≥0 ∪ {∞}; hi = nullopt admits ∞.
struct LevelInterval {
    std::int64_t lo = 0;
    std::optional<std::int64_t> hi;

    static LevelInterval exactly(std::int64_t k) { return {k, k}; }
    static LevelInterval at_least(std::int64_t k) { return {k, std::nullopt}; }

    bool contains(const ExtInt& lvl) const;
    friend bool operator==(const LevelInterval&, const LevelInterval&) = default;
};

/// The unitary group an orbit matches into: U0 iff η(1 - N(a)) = +1.
enum class Side { U0, U1 };

constexpr Sign side_sign(Side s) { return s == Side::U0 ? Sign::plus : Sign::minus; }
constexpr Side side_of(Sign s) { return s == Sign::plus ? Side::U0 : Side::U1; }

/// One characteristic function: every listed constraint must hold.
struct Box {
    Interval a = Interval::at_least(0);
    Interval b = Interval::at_least(0);
    Interval c = Interval::at_least(0);
    Interval d = Interval::at_least(0);
    SignConstraint sgn_b = SignConstraint::any;
    SignConstraint sgn_c = SignConstraint::any;
    std::optional<LevelInterval> lvl_a;
    std::optional<LevelInterval> lvl_d;
    std::optional<Interval> t;
    std::optional<Side> side;

    /// K = GL2(O_E) ∩ S(F).
    static Box integral_matrices() { return {}; }
    /// K(V_a, V_d) with V_a, V_d unit sets cut out by conductor levels.
    static Box unit_diagonal(std::optional<LevelInterval> lvl_a = std::nullopt,
                             std::optional<LevelInterval> lvl_d = std::nullopt);

    /// Whether some point of B0 (diagonal, norm-one a and d) lies in the box
    /// when a and d have the given conductor levels.
    bool admits_b0(const ExtInt& lvl_a_value, const ExtInt& lvl_d_value) const;

    friend bool operator==(const Box&, const Box&) = default;
};

struct Term {
    Rational coeff;
    Box box;
    friend bool operator==(const Term&, const Term&) = default;
};

/// A locally constant, compactly supported function on S(F) from the
/// invariant-box class.
class InvariantFunction {
  public:
    InvariantFunction() = default;
    explicit InvariantFunction(std::vector<Term> terms);
    static InvariantFunction of(const Box& box, const Rational& coeff = 1);

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    InvariantFunction& add(const Rational& coeff, const Box& box);
    InvariantFunction& operator+=(const InvariantFunction& o);
    InvariantFunction& operator-=(const InvariantFunction& o);
    InvariantFunction& operator*=(const Rational& c);
    friend InvariantFunction operator+(InvariantFunction a, const InvariantFunction& b) { return a += b; }
    friend InvariantFunction operator-(InvariantFunction a, const InvariantFunction& b) { return a -= b; }
    friend InvariantFunction operator*(const Rational& c, InvariantFunction f) { return f *= c; }

    /// Merge identical boxes and drop zero coefficients.
    InvariantFunction simplified() const;

    /// Throws DomainError when a box is not locally constant with compact
    /// support (sign constraints on an entry allowed to reach 0, side
    /// constraints with unbounded t, missing lower valuation bounds).
    void validate() const;

    /// Smallest L such that all level classes >= L behave alike.
    std::int64_t level_cutoff() const;

  private:
    std::vector<Term> terms_;
};

/// Level class k in [0, cutoff]; the top class means ">= cutoff".
LevelInterval level_class_interval(std::int64_t k, std::int64_t cutoff);
ExtInt level_class_representative(std::int64_t k, std::int64_t cutoff);
std::int64_t level_class_of(const ExtInt& lvl, std::int64_t cutoff);

/// f restricted to B0 as a function of the (lvl_a, lvl_d) classes; only
/// nonzero entries are stored.
std::map<std::pair<std::int64_t, std::int64_t>, Rational> b0_restriction(const InvariantFunction& f,
                                                                           std::int64_t cutoff);
bool vanishes_on_b0(const InvariantFunction& f);

/// A regular semisimple γ ∈ S(F) by invariants; c = (1 - N(a))/b̄ and
/// d = -āb/b̄ are derived.
struct OrbitData {
    FieldSetup setup;
    HalfInt v_a = 0;
    ExtInt lvl_a = ExtInt::infinity();
    ExtInt lvl_d = ExtInt::infinity();
    /// v(1 - N(a))
    std::int64_t t = 1;
    /// η(1 - N(a))
    Sign sgn_1mNa = Sign::minus;
    HalfInt v_b = 0;
    Sign sgn_b = Sign::plus;

    /// Unit a, d; signs forced by the unramified convention.
    static OrbitData unramified(std::int64_t q, std::int64_t t, std::int64_t v_b,
                                ExtInt lvl_a = ExtInt::infinity(), ExtInt lvl_d = ExtInt::infinity());
    static OrbitData ramified(const FieldSetup& setup, std::int64_t t, Sign sgn_1mNa, HalfInt v_b, Sign sgn_b,
                              ExtInt lvl_a = ExtInt::infinity(), ExtInt lvl_d = ExtInt::infinity());

    HalfInt v_c() const { return HalfInt(t) - v_b; }
    Sign sgn_c() const { return sgn_1mNa * sgn_b; }

    /// h^{-1}γh for h ∈ F^×.
    OrbitData conjugated(const ValClass& h) const;

    void validate() const;
    friend bool operator==(const OrbitData&, const OrbitData&) = default;
};

LaurentPoly orb_s(const OrbitData& gamma, const InvariantFunction& f);

/// Whether γ itself lies in the box, and f(γ).
bool box_contains(const Box& box, const OrbitData& gamma);
Rational evaluate(const InvariantFunction& f, const OrbitData& gamma);

/// Orb_γ(f, s) by evaluating f at h^{-1}γh for every class of h (valuation
/// in [-window, window], unit η-class) and summing η_s(h) against the class
/// volumes. DivergenceError if the support reaches the window edge.
LaurentPoly orb_s_pointwise(const OrbitData& gamma, const InvariantFunction& f, std::int64_t window);
Rational orb(const OrbitData& gamma, const InvariantFunction& f);
LogValue d_orb(const OrbitData& gamma, const InvariantFunction& f);

/// ω(γ) = η(c(γ)).
Sign transfer_factor(const OrbitData& gamma);

/// λ^*f(γ) = f(λ^{-1}γλ) for λ ∈ F^×.
InvariantFunction pullback(const InvariantFunction& f, const ValClass& lambda);

/// η(λ)f - λ^*f, whose ∂Orb is η(λ) log|λ| Orb(f).
InvariantFunction lemma33_combination(const InvariantFunction& f, const ValClass& lambda);

/// The default λ0 = λ1: an element of F^× with η = -1 and valuation 1.
ValClass default_regularizer(const FieldSetup& setup);

/// α(V_a, V_d) = ¼(α' + λ1^*α') with α' = 1(V_a, V_d) + λ0^*1(V_a, V_d).
InvariantFunction b0_corrector(const Box& unit_box, const ValClass& lambda0, const ValClass& lambda1);

/// f' with f'|B0 = 0 and the same Orb and ∂Orb as f.
InvariantFunction prop34_regularize(const InvariantFunction& f, const FieldSetup& setup);
InvariantFunction prop34_regularize(const InvariantFunction& f, const ValClass& lambda0, const ValClass& lambda1);

}  // namespace aflc

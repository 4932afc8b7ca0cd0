#pragma once

// Deformation lengths of homomorphisms between quasi-canonical lifts X_i, Y_j
// of the height-2 formal O_F-module, via the unit indices e_s.

#include "aflcalc/field_model.hpp"

namespace aflc {

/// e_s = [O_E^× : O_s^×], O_s = O_F + π_F^s O_E.
std::int64_t e_s(const FieldSetup& setup, std::int64_t s);

/// Ramification index of W_s over F̌: e_s for s >= 1; W_0 = Ě, so 2 when
/// E/F is ramified.
std::int64_t ram_index(const FieldSetup& setup, std::int64_t s);

/// a(n) = 1 + q + ... + q^n, a(-1) = 0.
std::int64_t geometric_a(std::int64_t n, std::int64_t q);

struct DeformQuery {
    FieldSetup setup;
    std::int64_t i = 0;
    std::int64_t j = 0;
    /// Ramification index of the base over W_max{i,j}.
    std::int64_t e_rel = 1;
    /// Class height of f0.
    std::int64_t l = 0;

    void validate() const;
};

/// α + 1, the first length to which f0 does not lift.
std::int64_t lift_bound_closed(const DeformQuery& dq);

/// The same number by walking the level-raising recursion
/// n_{k+1}(Π f) = n_k(f) + e/e_{k+1} up from its base values.
std::int64_t lift_bound_oracle(const DeformQuery& dq);

/// Whether Hom(X_i, Y_j) = Π^{|i-j|} O_min{i,j} has an element of v_D-height l.
bool hom_height_attainable(const FieldSetup& setup, std::int64_t i, std::int64_t j, std::int64_t l);

/// Whether l can occur as a class height, i.e. the last case of the closed
/// form is parity admissible. Unramified class heights at or above i + j have
/// l - (i + j - 1) even.
bool class_height_attainable(const FieldSetup& setup, std::int64_t i, std::int64_t j, std::int64_t l);

/// Whether reduction of homomorphisms commutes with the Galois action.
bool reduction_commutes(const FieldSetup& setup, std::int64_t i, std::int64_t j);

}  // namespace aflc

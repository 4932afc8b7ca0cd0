#include "aflcalc/deformation.hpp"

#include <algorithm>
#include <utility>

namespace aflc {

std::int64_t e_s(const FieldSetup& setup, std::int64_t s) {
    if (s < 0) {
        throw DomainError("e_s needs s >= 0");
    }
    if (s == 0) {
        return 1;
    }
    const std::int64_t qs = checked_pow(setup.q, s);
    return setup.ramified ? checked_mul(2, qs) : checked_add(qs, checked_pow(setup.q, s - 1));
}

std::int64_t ram_index(const FieldSetup& setup, std::int64_t s) {
    if (s == 0) {
        return setup.ramified ? 2 : 1;
    }
    return e_s(setup, s);
}

std::int64_t geometric_a(std::int64_t n, std::int64_t q) {
    if (n < -1) {
        throw DomainError("a(n) needs n >= -1, got " + std::to_string(n));
    }
    std::int64_t sum = 0;
    std::int64_t power = 1;
    for (std::int64_t k = 0; k <= n; ++k) {
        sum = checked_add(sum, power);
        if (k < n) {
            power = checked_mul(power, q);
        }
    }
    return sum;
}

void DeformQuery::validate() const {
    setup.validate();
    if (i < 0 || j < 0) {
        throw DomainError("levels must be >= 0");
    }
    if (e_rel < 1) {
        throw DomainError("e_rel must be >= 1");
    }
    if (l < 0) {
        throw DomainError("class height must be >= 0");
    }
}

std::int64_t lift_bound_closed(const DeformQuery& dq) {
    dq.validate();
    const std::int64_t i = std::min(dq.i, dq.j);
    const std::int64_t j = std::max(dq.i, dq.j);
    const std::int64_t d = j - i;
    const std::int64_t l = dq.l;
    const std::int64_t q = dq.setup.q;
    const std::int64_t n = (l + d) / 2;
    auto a = [q](std::int64_t k) { return geometric_a(k, q); };
    std::int64_t value = 0;
    if (l < d) {
        value = a(l);
    } else if (l <= i + j - 1) {
        value = (l + d) % 2 == 0 ? a(n) + a(n - 1) - a(d - 1) : 2 * a(n) - a(d - 1);
    } else {
        const std::int64_t numerator = checked_mul(l - (i + j - 1), ram_index(dq.setup, j));
        if (numerator % 2 != 0) {
            throw AdmissibilityError("class height " + std::to_string(l) + " is parity inadmissible for (i, j) = (" +
                                     std::to_string(i) + ", " + std::to_string(j) + ")");
        }
        value = checked_add(checked_add(checked_mul(2, a(j - 1)), -a(d - 1)), numerator / 2);
    }
    return checked_mul(dq.e_rel, value);
}

std::int64_t lift_bound_oracle(const DeformQuery& dq) {
    dq.validate();
    const std::int64_t i = std::min(dq.i, dq.j);
    const std::int64_t j = std::max(dq.i, dq.j);
    const std::int64_t d = j - i;
    const std::int64_t l = dq.l;
    const Rational q(dq.setup.q);
    auto ehat = [&](std::int64_t s) { return Rational(ram_index(dq.setup, s)); };
    auto a = [&](std::int64_t k) {
        Rational sum = 0;
        Rational power = 1;
        for (std::int64_t m = 0; m <= k; ++m) {
            sum += power;
            power *= q;
        }
        return sum;
    };
    const Rational e_abs = Rational(dq.e_rel) * ehat(j);

    // base value n_k(g0) at the level k where g0 lives, then raise to level j
    std::int64_t k = 0;
    Rational n_k;
    if (l < d) {
        k = j - l;
        n_k = e_abs / ehat(k);
    } else {
        k = i;
        const std::int64_t r = l - d;
        Rational inner;
        if (r < 2 * i && r % 2 == 0) {
            inner = a(r / 2) + a(r / 2 - 1);
        } else if (r < 2 * i) {
            inner = 2 * a(r / 2);
        } else {
            inner = 2 * a(i - 1) + ratio(r - (2 * i - 1), 2) * ehat(i);
        }
        n_k = e_abs / ehat(i) * inner;
    }
    for (; k < j; ++k) {
        n_k += e_abs / ehat(k + 1);
    }
    n_k.canonicalize();
    if (n_k.get_den() != 1) {
        throw AdmissibilityError("class height " + std::to_string(l) + " gives a non-integral lift bound");
    }
    if (!n_k.get_num().fits_slong_p()) {
        throw DomainError("lift bound overflows 64 bits");
    }
    return n_k.get_num().get_si();
}

bool hom_height_attainable(const FieldSetup& setup, std::int64_t i, std::int64_t j, std::int64_t l) {
    const std::int64_t d = i > j ? i - j : j - i;
    const std::int64_t s = std::min(i, j);
    const std::int64_t h = l - d;
    if (h < 0) {
        return false;
    }
    if (!setup.ramified) {
        return h % 2 == 0;
    }
    // O_s = O_F + π_F^s O_E: valuations 0..s-1 are integral, from s on everything occurs
    return h >= 2 * s || h % 2 == 0;
}

bool class_height_attainable(const FieldSetup& setup, std::int64_t i, std::int64_t j, std::int64_t l) {
    if (l < 0) {
        return false;
    }
    return l < i + j || setup.ramified || (l - (i + j - 1)) % 2 == 0;
}

bool reduction_commutes(const FieldSetup& setup, std::int64_t i, std::int64_t j) {
    return setup.ramified || (i + j) % 2 == 0;
}

}  // namespace aflc

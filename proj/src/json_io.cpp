#include "aflcalc/json_io.hpp"

#include <cmath>

namespace aflc {

namespace {

Json sign_json(Sign s) { return to_int(s); }

Sign sign_of_json(const Json& j) { return sign_from_int(j.get<long long>()); }

Json constraint_json(SignConstraint c) {
    switch (c) {
        case SignConstraint::plus:
            return 1;
        case SignConstraint::minus:
            return -1;
        case SignConstraint::any:
            break;
    }
    return "any";
}

SignConstraint constraint_of_json(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "any") {
        return SignConstraint::any;
    }
    if (j.is_number_integer()) {
        return constraint_for(sign_from_int(j.get<long long>()));
    }
    throw DomainError("sign requirement must be \"any\", 1 or -1");
}

}  // namespace

Json to_json_value(HalfInt x) {
    if (x.is_integer()) {
        return x.as_integer();
    }
    return static_cast<double>(x.doubled()) / 2.0;
}

HalfInt half_int_from_json(const Json& j) {
    if (j.is_number_integer()) {
        return HalfInt(j.get<std::int64_t>());
    }
    if (j.is_number_float()) {
        const double doubled = j.get<double>() * 2.0;
        if (doubled != std::floor(doubled) || std::fabs(doubled) > 9.0e15) {
            throw DomainError("valuations must be half-integers");
        }
        return HalfInt::from_doubled(static_cast<std::int64_t>(doubled));
    }
    if (j.is_string()) {
        const Rational r = parse_rational(j.get<std::string>());
        const Rational doubled = 2 * r;
        if (doubled.get_den() != 1 || !doubled.get_num().fits_slong_p()) {
            throw DomainError("valuations must be half-integers");
        }
        return HalfInt::from_doubled(doubled.get_num().get_si());
    }
    throw DomainError("expected a half-integer");
}

Json to_json_value(const ExtInt& x) {
    if (!x.is_finite()) {
        return nullptr;
    }
    return x.value();
}

ExtInt ext_int_from_json(const Json& j) {
    if (j.is_null() || (j.is_string() && j.get<std::string>() == "inf")) {
        return ExtInt::infinity();
    }
    return j.get<std::int64_t>();
}

Json to_json_value(const Rational& x) { return to_string(x); }

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    return parse_rational(j.get<std::string>());
}

void to_json(Json& j, const FieldSetup& s) {
    j = Json{{"q", s.q}, {"ramified", s.ramified}, {"eta_pi_F", sign_json(s.eta_pi_F)}};
}

void from_json(const Json& j, FieldSetup& s) {
    s.q = j.at("q").get<std::int64_t>();
    s.ramified = j.value("ramified", false);
    s.eta_pi_F = j.contains("eta_pi_F") ? sign_of_json(j.at("eta_pi_F"))
                                        : (s.ramified ? Sign::plus : Sign::minus);
    s.validate();
}

void to_json(Json& j, const Interval& iv) {
    j = Json::array({iv.lo ? to_json_value(*iv.lo) : Json(nullptr), iv.hi ? to_json_value(*iv.hi) : Json(nullptr)});
}

void from_json(const Json& j, Interval& iv) {
    if (!j.is_array() || j.size() != 2) {
        throw DomainError("interval must be [lo, hi]");
    }
    iv.lo = j[0].is_null() ? std::nullopt : std::optional<HalfInt>(half_int_from_json(j[0]));
    iv.hi = j[1].is_null() ? std::nullopt : std::optional<HalfInt>(half_int_from_json(j[1]));
}

void to_json(Json& j, const LevelInterval& iv) {
    j = Json::array({iv.lo, iv.hi ? Json(*iv.hi) : Json(nullptr)});
}

void from_json(const Json& j, LevelInterval& iv) {
    if (!j.is_array() || j.size() != 2) {
        throw DomainError("level interval must be [lo, hi]");
    }
    iv.lo = j[0].get<std::int64_t>();
    iv.hi = j[1].is_null() ? std::nullopt : std::optional<std::int64_t>(j[1].get<std::int64_t>());
}

void to_json(Json& j, const Box& box) {
    j = Json{{"a", box.a}, {"b", box.b}, {"c", box.c}, {"d", box.d}};
    if (box.sgn_b != SignConstraint::any) {
        j["sgn_b"] = constraint_json(box.sgn_b);
    }
    if (box.sgn_c != SignConstraint::any) {
        j["sgn_c"] = constraint_json(box.sgn_c);
    }
    if (box.lvl_a) {
        j["lvl_a"] = *box.lvl_a;
    }
    if (box.lvl_d) {
        j["lvl_d"] = *box.lvl_d;
    }
    if (box.t) {
        j["t"] = *box.t;
    }
    if (box.side) {
        j["side"] = *box.side == Side::U0 ? "U0" : "U1";
    }
}

void from_json(const Json& j, Box& box) {
    box = Box{};
    for (const auto& [key, value] : j.items()) {
        if (key == "a") {
            box.a = value.get<Interval>();
        } else if (key == "b") {
            box.b = value.get<Interval>();
        } else if (key == "c") {
            box.c = value.get<Interval>();
        } else if (key == "d") {
            box.d = value.get<Interval>();
        } else if (key == "sgn_b") {
            box.sgn_b = constraint_of_json(value);
        } else if (key == "sgn_c") {
            box.sgn_c = constraint_of_json(value);
        } else if (key == "lvl_a") {
            box.lvl_a = value.get<LevelInterval>();
        } else if (key == "lvl_d") {
            box.lvl_d = value.get<LevelInterval>();
        } else if (key == "t") {
            box.t = value.get<Interval>();
        } else if (key == "side") {
            const auto s = value.get<std::string>();
            if (s != "U0" && s != "U1") {
                throw DomainError("side must be \"U0\" or \"U1\"");
            }
            box.side = s == "U0" ? Side::U0 : Side::U1;
        } else {
            throw DomainError("unknown box field \"" + key + "\"");
        }
    }
}

void to_json(Json& j, const InvariantFunction& f) {
    Json terms = Json::array();
    for (const auto& term : f.terms()) {
        terms.push_back(Json{{"coeff", to_json_value(term.coeff)}, {"box", term.box}});
    }
    j = Json{{"terms", terms}};
}

void from_json(const Json& j, InvariantFunction& f) {
    f = InvariantFunction{};
    for (const auto& term : j.at("terms")) {
        f.add(term.contains("coeff") ? rational_from_json(term.at("coeff")) : Rational(1), term.at("box").get<Box>());
    }
    f.validate();
}

void to_json(Json& j, const OrbitData& g) {
    j = Json{{"setup", g.setup},
             {"v_a", to_json_value(g.v_a)},
             {"lvl_a", to_json_value(g.lvl_a)},
             {"lvl_d", to_json_value(g.lvl_d)},
             {"t", g.t},
             {"sgn_1mNa", sign_json(g.sgn_1mNa)},
             {"v_b", to_json_value(g.v_b)},
             {"sgn_b", sign_json(g.sgn_b)}};
}

void from_json(const Json& j, OrbitData& g) {
    g.setup = j.at("setup").get<FieldSetup>();
    g.v_a = j.contains("v_a") ? half_int_from_json(j.at("v_a")) : HalfInt(0);
    g.lvl_a = j.contains("lvl_a") ? ext_int_from_json(j.at("lvl_a")) : ExtInt::infinity();
    g.lvl_d = j.contains("lvl_d") ? ext_int_from_json(j.at("lvl_d")) : ExtInt::infinity();
    g.t = j.at("t").get<std::int64_t>();
    g.v_b = half_int_from_json(j.at("v_b"));
    if (g.setup.ramified) {
        g.sgn_1mNa = sign_of_json(j.at("sgn_1mNa"));
        g.sgn_b = sign_of_json(j.at("sgn_b"));
    } else {
        g.sgn_1mNa = parity_sign(g.t);
        g.sgn_b = g.v_b.is_integer() ? parity_sign(g.v_b.as_integer()) : Sign::plus;
    }
    g.validate();
}

void to_json(Json& j, const LaurentPoly& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) {
        terms.push_back(Json::array({to_json_value(e), to_json_value(c)}));
    }
    j = Json{{"text", p.to_string()}, {"terms", terms}};
}

void from_json(const Json& j, LaurentPoly& p) {
    p = LaurentPoly{};
    for (const auto& term : j.at("terms")) {
        p.add_term(rational_from_json(term.at(1)), half_int_from_json(term.at(0)));
    }
}

void to_json(Json& j, const GermKey& k) {
    j = Json{{"lvl_a", k.lvl_a_class}, {"lvl_d", k.lvl_d_class}, {"v_frac", k.v_frac_doubled}};
}

void from_json(const Json& j, GermKey& k) {
    k.lvl_a_class = j.at("lvl_a").get<std::int64_t>();
    k.lvl_d_class = j.at("lvl_d").get<std::int64_t>();
    k.v_frac_doubled = j.value("v_frac", 0);
    if (k.v_frac_doubled != 0 && k.v_frac_doubled != 1) {
        throw DomainError("v_frac must be 0 or 1");
    }
}

namespace {

Json germ_map_json(const std::map<GermKey, LaurentPoly>& m) {
    Json out = Json::array();
    for (const auto& [key, poly] : m) {
        out.push_back(Json{{"key", key}, {"poly", poly}});
    }
    return out;
}

std::map<GermKey, LaurentPoly> germ_map_of(const Json& j) {
    std::map<GermKey, LaurentPoly> out;
    for (const auto& entry : j) {
        out[entry.at("key").get<GermKey>()] += entry.at("poly").get<LaurentPoly>();
    }
    return out;
}

}  // namespace

void to_json(Json& j, const GermData& g) {
    j = Json{{"ramified", g.ramified},
             {"lvl_cutoff", g.lvl_cutoff},
             {"validity_threshold", g.validity_threshold},
             {"A0", germ_map_json(g.a0)},
             {"A1", germ_map_json(g.a1)}};
}

void from_json(const Json& j, GermData& g) {
    g.ramified = j.value("ramified", false);
    g.lvl_cutoff = j.value("lvl_cutoff", std::int64_t{0});
    g.validity_threshold = j.value("validity_threshold", std::int64_t{1});
    g.a0 = germ_map_of(j.value("A0", Json::array()));
    g.a1 = germ_map_of(j.value("A1", Json::array()));
}

void to_json(Json& j, const MatchContext& c) {
    j = Json{{"setup", c.setup}, {"i", c.i}, {"j", c.j}, {"e_F", c.e_F}};
}

}  // namespace aflc

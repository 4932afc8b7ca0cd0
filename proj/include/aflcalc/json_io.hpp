#pragma once

// JSON encodings shared by the CLI and the reports. Half-integers are JSON
// numbers (strings such as "5/2" are also read), rationals are strings
// "p/q", intervals are [lo, hi] with null for an infinite end.

#include "aflcalc/matching.hpp"

#include <json.hpp>

namespace aflc {

using Json = nlohmann::json;

Json to_json_value(HalfInt x);
HalfInt half_int_from_json(const Json& j);
Json to_json_value(const ExtInt& x);
ExtInt ext_int_from_json(const Json& j);
Json to_json_value(const Rational& x);
Rational rational_from_json(const Json& j);

void to_json(Json& j, const FieldSetup& s);
void from_json(const Json& j, FieldSetup& s);
void to_json(Json& j, const Interval& iv);
void from_json(const Json& j, Interval& iv);
void to_json(Json& j, const LevelInterval& iv);
void from_json(const Json& j, LevelInterval& iv);
void to_json(Json& j, const Box& box);
void from_json(const Json& j, Box& box);
void to_json(Json& j, const InvariantFunction& f);
void from_json(const Json& j, InvariantFunction& f);
void to_json(Json& j, const OrbitData& g);
void from_json(const Json& j, OrbitData& g);
void to_json(Json& j, const LaurentPoly& p);
void from_json(const Json& j, LaurentPoly& p);
void to_json(Json& j, const GermKey& k);
void from_json(const Json& j, GermKey& k);
void to_json(Json& j, const GermData& g);
void from_json(const Json& j, GermData& g);
void to_json(Json& j, const MatchContext& c);

}  // namespace aflc

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace triharm {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "a/b", integers and finite decimals ("0.25"). Throws UsageError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

// Reciprocal exponents t_i = 1/p_i; t_i = 0 encodes p_i = infinity.
struct ExponentPoint {
  std::array<Rational, 3> t;
  int n = 1;

  Rational inverse_p() const { return t[0] + t[1] + t[2]; }
  bool operator==(const ExponentPoint& o) const { return t == o.t && n == o.n; }
};

ExponentPoint parse_exponent_point(std::string_view csv, int n = 1);
std::string to_string(const ExponentPoint& e);

// R0..R7 as in the region list; PInf is the (p, inf, inf) endpoint pattern
// (one positive coordinate, two zeros) used by the p = 1 plan.
enum class Region { R0, R1, R2, R3, R4, R5, R6, R7, PInf, None };
const char* to_string(Region r) noexcept;

Region classify(const ExponentPoint& e);

// Strict lower bound on s/n from the per-region formulas.
Rational required_regularity(const ExponentPoint& e);
// max(3/2, max over subsets J of the general condition), independent of regions.
Rational general_regularity_threshold(const ExponentPoint& e);

struct PlanEndpoint {
  ExponentPoint point;
  Region region = Region::None;
  Rational weight;
};

enum class PlanKind { base_region, interpolation };

struct InterpPlan {
  PlanKind kind = PlanKind::interpolation;
  ExponentPoint target;
  Region target_region = Region::None;
  Rational s;
  std::vector<PlanEndpoint> endpoints;
  std::vector<std::pair<std::string, Rational>> auxiliary;

  std::string to_json() const;
  std::string to_table() const;
};

InterpPlan plan_interpolation(const ExponentPoint& e, const Rational& s);

struct PlanVerdict {
  bool ok = true;
  std::string violation;
};
PlanVerdict verify_plan(const InterpPlan& plan);

}  // namespace triharm

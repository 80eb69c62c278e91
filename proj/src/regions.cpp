#include "triharm/regions.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"
#include "triharm/error.hpp"

namespace triharm {

namespace {

using Int = boost::multiprecision::cpp_int;

const Rational kHalf(1, 2);
const Rational kThreeHalves(3, 2);

Int parse_integer(std::string_view s) {
  require(!s.empty(), "");
  bool neg = false;
  if (s.front() == '-' || s.front() == '+') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw UsageError("");
  Int v{std::string(s)};
  if (neg) v = -v;
  return v;
}

Rational min3(const std::array<Rational, 3>& t) { return std::min({t[0], t[1], t[2]}); }

// Largest power of two 2^-k with k >= k_min that does not exceed bound.
Rational dyadic_below(const Rational& bound, int k_min) {
  Rational eta(1);
  for (int k = 0; k < k_min; ++k) eta /= 2;
  while (eta > bound) eta /= 2;
  return eta;
}

// Largest power of two (positive or negative exponent) not exceeding bound.
Rational power_of_two_below(const Rational& bound) {
  Rational d(1);
  while (d > bound) d /= 2;
  while (d * 2 <= bound) d *= 2;
  return d;
}

ExponentPoint make_point(const Rational& a, const Rational& b, const Rational& c, int n) {
  ExponentPoint e;
  e.t = {a, b, c};
  e.n = n;
  return e;
}

Region single_index_region(int i) { return i == 0 ? Region::R1 : (i == 1 ? Region::R2 : Region::R3); }

// Barycentric coordinates of p in triangle (a, b, c) using the first two
// coordinates; all three points share the coordinate sum, so this is exact.
bool barycentric(const ExponentPoint& p, const ExponentPoint& a, const ExponentPoint& b, const ExponentPoint& c,
                 std::array<Rational, 3>& w) {
  Rational det = (b.t[0] - a.t[0]) * (c.t[1] - a.t[1]) - (c.t[0] - a.t[0]) * (b.t[1] - a.t[1]);
  if (det == 0) return false;
  Rational wb = ((p.t[0] - a.t[0]) * (c.t[1] - a.t[1]) - (c.t[0] - a.t[0]) * (p.t[1] - a.t[1])) / det;
  Rational wc = ((b.t[0] - a.t[0]) * (p.t[1] - a.t[1]) - (p.t[0] - a.t[0]) * (b.t[1] - a.t[1])) / det;
  Rational wa = 1 - wb - wc;
  if (wa < 0 || wb < 0 || wc < 0) return false;
  w = {wa, wb, wc};
  return true;
}

void add_aux(InterpPlan& plan, std::string name, Rational value) { plan.auxiliary.emplace_back(std::move(name), std::move(value)); }

void plan_pair(InterpPlan& plan, int a, int b, int c, const Rational& slack) {
  const auto& t = plan.target.t;
  const int n = plan.target.n;
  const Rational u = t[a] + t[b] - kHalf;  // 1/p~_a = 1/p~_b
  const Rational eta = dyadic_below(slack / 2, 2);
  const Rational big = u + eta;
  const Rational small = kHalf - eta;
  std::array<Rational, 3> c1, c2;
  c1[a] = big;
  c1[b] = small;
  c1[c] = t[c];
  c2[a] = small;
  c2[b] = big;
  c2[c] = t[c];
  const Rational theta = (big - t[a]) / (big + big - t[a] - t[b]);
  plan.endpoints.push_back({make_point(c1[0], c1[1], c1[2], n), single_index_region(a), 1 - theta});
  plan.endpoints.push_back({make_point(c2[0], c2[1], c2[2], n), single_index_region(b), theta});
  const std::string sa = std::to_string(a + 1), sb = std::to_string(b + 1);
  add_aux(plan, "p_tilde" + sa, 1 / u);
  add_aux(plan, "p_tilde" + sb, 1 / u);
  add_aux(plan, "epsilon" + sa, 1 / u - 1 / big);
  add_aux(plan, "epsilon" + sb, 1 / u - 1 / big);
  add_aux(plan, "q" + sa, 1 / small);
  add_aux(plan, "q" + sb, 1 / small);
  add_aux(plan, "theta", theta);
}

void plan_hexagon(InterpPlan& plan) {
  const auto& t = plan.target.t;
  const int n = plan.target.n;
  const Rational r = plan.target.inverse_p() - 1;
  const Rational cap = std::min(min3(t), kHalf);
  // Vertices are the permutations of (1, a, b) with a + b = r, a = 1/(2 + eps).
  // Containment of t needs b < min t; membership in R_i needs a, b < 1/2.
  Rational eps_lo = std::max(Rational(0), Rational(1 / r - 2));
  bool bounded = r > cap;
  Rational eps_hi = bounded ? 1 / (r - cap) - 2 : Rational(0);
  Rational delta = bounded ? power_of_two_below((eps_hi - eps_lo) / 2) : Rational(1);
  const Rational eps = eps_lo + delta;
  const Rational A = 1 / (2 + eps);
  const Rational B = r - A;
  const Rational one(1);
  std::array<ExponentPoint, 6> d = {make_point(one, B, A, n), make_point(one, A, B, n), make_point(A, one, B, n),
                                    make_point(B, one, A, n), make_point(B, A, one, n), make_point(A, B, one, n)};
  const Region regs[6] = {Region::R1, Region::R1, Region::R2, Region::R2, Region::R3, Region::R3};
  ExponentPoint centre = make_point(0, 0, 0, n);
  for (const auto& v : d)
    for (int i = 0; i < 3; ++i) centre.t[i] += v.t[i] / 6;
  // Mix a small uniform share kappa into a fan triangulation of the pushed
  // point t' = (t - kappa centre) / (1 - kappa), so every weight is positive.
  Rational kappa(1, 2);
  std::array<Rational, 6> weights;
  bool found = false;
  for (int attempt = 0; attempt < 200 && !found; ++attempt, kappa /= 2) {
    ExponentPoint pushed = make_point(0, 0, 0, n);
    for (int i = 0; i < 3; ++i) pushed.t[i] = (t[i] - kappa * centre.t[i]) / (1 - kappa);
    for (int k = 1; k + 1 < 6 && !found; ++k) {
      std::array<Rational, 3> w;
      if (!barycentric(pushed, d[0], d[k], d[k + 1], w)) continue;
      weights.fill(kappa / 6);
      weights[0] += (1 - kappa) * w[0];
      weights[k] += (1 - kappa) * w[1];
      weights[k + 1] += (1 - kappa) * w[2];
      found = true;
    }
    if (found) break;
  }
  require(found, "internal: hexagon weights not found");
  for (int i = 0; i < 6; ++i) plan.endpoints.push_back({d[i], regs[i], weights[i]});
  if (r > kHalf) add_aux(plan, "p0", 1 / (r - kHalf));
  add_aux(plan, "epsilon", eps);
  add_aux(plan, "p_tilde0", 1 / B);
  add_aux(plan, "kappa", kappa);
}

void plan_simplex(InterpPlan& plan, const Rational& slack) {
  const auto& t = plan.target.t;
  const int n = plan.target.n;
  const Rational inv_p0 = plan.target.inverse_p() - 1;
  const Rational eta = dyadic_below(slack / 2, 1);
  const Rational v = inv_p0 + eta;  // 1/(p0 - eps)
  const Rational w = (1 - eta) / 2;  // 1/q
  for (int i = 0; i < 3; ++i) {
    std::array<Rational, 3> e = {w, w, w};
    e[i] = v;
    plan.endpoints.push_back({make_point(e[0], e[1], e[2], n), single_index_region(i), (t[i] - w) / (v - w)});
  }
  add_aux(plan, "p0", 1 / inv_p0);
  add_aux(plan, "epsilon", 1 / inv_p0 - 1 / v);
  add_aux(plan, "q", 1 / w);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
          s.end());
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      Int num = parse_integer(std::string_view(s).substr(0, slash));
      Int den = parse_integer(std::string_view(s).substr(slash + 1));
      if (den == 0) throw UsageError("");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string frac = s.substr(dot + 1);
      std::string whole = s.substr(0, dot);
      bool neg = !whole.empty() && whole.front() == '-';
      if (whole.empty() || whole == "-" || whole == "+") whole += "0";
      if (frac.empty()) frac = "0";
      Int w = parse_integer(whole);
      Int f = parse_integer(frac);
      Int scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Rational mag = Rational(neg ? Int(-w) : w) + Rational(f, scale);
      return neg ? Rational(-mag) : mag;
    }
    return Rational(parse_integer(s));
  } catch (const UsageError&) {
    throw UsageError("malformed rational '" + std::string(text) + "'");
  } catch (const DomainError&) {
    throw UsageError("malformed rational '" + std::string(text) + "'");
  }
}

std::string to_string(const Rational& r) {
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

ExponentPoint parse_exponent_point(std::string_view csv, int n) {
  ExponentPoint e;
  e.n = n;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t comma = csv.find(',', start);
    if ((i < 2) != (comma != std::string_view::npos)) throw UsageError("expected three comma separated rationals");
    std::string_view part = csv.substr(start, i < 2 ? comma - start : std::string_view::npos);
    e.t[i] = parse_rational(part);
    start = comma + 1;
  }
  return e;
}

std::string to_string(const ExponentPoint& e) {
  return "(" + to_string(e.t[0]) + ", " + to_string(e.t[1]) + ", " + to_string(e.t[2]) + ")";
}

const char* to_string(Region r) noexcept {
  switch (r) {
    case Region::R0: return "R0";
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R4: return "R4";
    case Region::R5: return "R5";
    case Region::R6: return "R6";
    case Region::R7: return "R7";
    case Region::PInf: return "Pinf";
    case Region::None: return "none";
  }
  return "none";
}

Region classify(const ExponentPoint& e) {
  const auto& t = e.t;
  int zeros = 0, negatives = 0;
  for (const auto& v : t) {
    zeros += v == 0;
    negatives += v < 0;
  }
  if (negatives > 0) return Region::None;
  if (zeros == 2) return Region::PInf;
  if (zeros > 0) return Region::None;
  const Rational sum = t[0] + t[1] + t[2];
  if (t[0] < 1 && t[1] < 1 && t[2] < 1 && t[0] + t[1] < kThreeHalves && t[1] + t[2] < kThreeHalves &&
      t[2] + t[0] < kThreeHalves && sum >= 1 && sum < 2)
    return Region::R0;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    if (t[i] >= 1 && t[j] < kHalf && t[k] < kHalf) return single_index_region(i);
  }
  // R4, R5, R6: the small coordinate is 3, 1, 2 respectively.
  const int small_of[3] = {2, 0, 1};
  const Region pair_regions[3] = {Region::R4, Region::R5, Region::R6};
  for (int r = 0; r < 3; ++r) {
    int c = small_of[r];
    int a = (c + 1) % 3, b = (c + 2) % 3;
    if (t[c] < kHalf && t[a] >= kHalf && t[b] >= kHalf && t[a] + t[b] >= kThreeHalves) return pair_regions[r];
  }
  if (t[0] >= kHalf && t[1] >= kHalf && t[2] >= kHalf && sum >= 2) return Region::R7;
  return Region::None;
}

Rational required_regularity(const ExponentPoint& e) {
  const auto& t = e.t;
  switch (classify(e)) {
    case Region::R0: return kThreeHalves;
    case Region::R1: return t[0] + kHalf;
    case Region::R2: return t[1] + kHalf;
    case Region::R3: return t[2] + kHalf;
    case Region::R4: return t[0] + t[1];
    case Region::R5: return t[1] + t[2];
    case Region::R6: return t[2] + t[0];
    case Region::R7: return t[0] + t[1] + t[2] - kHalf;
    case Region::PInf: return e.inverse_p() + kHalf;
    case Region::None: break;
  }
  throw DomainError("unclassifiable exponent point " + to_string(e));
}

Rational general_regularity_threshold(const ExponentPoint& e) {
  // s/n > 1/p - 1/2 - sum_{j in J} (t_j - 1/2) for every J, and s/n > 3/2.
  Rational best = kThreeHalves;
  const Rational base = e.inverse_p() - kHalf;
  for (int mask = 0; mask < 8; ++mask) {
    Rational v = base;
    for (int j = 0; j < 3; ++j)
      if (mask & (1 << j)) v -= e.t[j] - kHalf;
    best = std::max(best, v);
  }
  return best;
}

InterpPlan plan_interpolation(const ExponentPoint& e, const Rational& s) {
  InterpPlan plan;
  plan.target = e;
  plan.s = s;
  plan.target_region = classify(e);
  if (plan.target_region == Region::None || plan.target_region == Region::PInf)
    throw DomainError("exponent point " + to_string(e) + " lies in no region with an interpolation plan");
  const Rational threshold = required_regularity(e);
  const Rational s_over_n = s / e.n;
  if (!(s_over_n > threshold))
    throw ThresholdError("s/n = " + to_string(s_over_n) + " does not exceed the " +
                         std::string(to_string(plan.target_region)) + " threshold " + to_string(threshold));
  const Rational slack = s_over_n - threshold;
  switch (plan.target_region) {
    case Region::R1:
    case Region::R2:
    case Region::R3: plan.kind = PlanKind::base_region; break;
    case Region::R4: plan_pair(plan, 0, 1, 2, slack); break;
    case Region::R5: plan_pair(plan, 1, 2, 0, slack); break;
    case Region::R6: plan_pair(plan, 2, 0, 1, slack); break;
    case Region::R7: plan_simplex(plan, slack); break;
    case Region::R0:
      if (e.inverse_p() == 1) {
        const Rational one(1), zero(0);
        plan.endpoints.push_back({make_point(one, zero, zero, e.n), Region::PInf, e.t[0]});
        plan.endpoints.push_back({make_point(zero, one, zero, e.n), Region::PInf, e.t[1]});
        plan.endpoints.push_back({make_point(zero, zero, one, e.n), Region::PInf, e.t[2]});
      } else {
        plan_hexagon(plan);
      }
      break;
    default: break;
  }
  return plan;
}

PlanVerdict verify_plan(const InterpPlan& plan) {
  auto fail = [](std::string why) { return PlanVerdict{false, std::move(why)}; };
  const Region target_region = classify(plan.target);
  if (target_region != plan.target_region) return fail("target region mismatch");
  if (plan.kind == PlanKind::base_region) {
    if (target_region != Region::R1 && target_region != Region::R2 && target_region != Region::R3)
      return fail("base region claimed outside R1-R3");
    if (!(plan.s / plan.target.n > required_regularity(plan.target))) return fail("target threshold violated");
    return {};
  }
  if (plan.endpoints.empty()) return fail("plan has no endpoints");
  for (const auto& ep : plan.endpoints) {
    if (!(ep.weight > 0 && ep.weight < 1)) return fail("weight outside (0,1)");
    if (ep.point.n != plan.target.n) return fail("dimension mismatch");
  }
  for (const auto& ep : plan.endpoints)
    if (classify(ep.point) != ep.region) return fail("endpoint region mismatch");
  for (const auto& ep : plan.endpoints)
    if (!(plan.s / plan.target.n > required_regularity(ep.point))) return fail("endpoint threshold violated");
  for (const auto& ep : plan.endpoints)
    if (ep.point.inverse_p() != plan.target.inverse_p()) return fail("1/p not preserved");
  Rational total = 0;
  std::array<Rational, 3> combo = {0, 0, 0};
  for (const auto& ep : plan.endpoints) {
    total += ep.weight;
    for (int i = 0; i < 3; ++i) combo[i] += ep.weight * ep.point.t[i];
  }
  if (total != 1 || combo != plan.target.t) return fail("convexity identity violated");
  return {};
}

std::string InterpPlan::to_json() const {
  nlohmann::json j;
  auto triple = [](const ExponentPoint& e) {
    return nlohmann::json::array({to_string(e.t[0]), to_string(e.t[1]), to_string(e.t[2])});
  };
  j["target"] = triple(target);
  j["n"] = target.n;
  j["region"] = to_string(target_region);
  j["s"] = to_string(s);
  j["kind"] = kind == PlanKind::base_region ? "base_region" : "interpolation";
  j["endpoints"] = nlohmann::json::array();
  for (const auto& ep : endpoints)
    j["endpoints"].push_back({{"t", triple(ep.point)}, {"region", to_string(ep.region)}, {"weight", to_string(ep.weight)}});
  nlohmann::json aux = nlohmann::json::object();
  for (const auto& [name, value] : auxiliary) aux[name] = to_string(value);
  j["auxiliary"] = aux;
  return j.dump(2);
}

std::string InterpPlan::to_table() const {
  std::ostringstream os;
  os << "target " << to_string(target) << " in " << to_string(target_region) << ", s = " << to_string(s)
     << ", n = " << target.n << "\n";
  if (kind == PlanKind::base_region) {
    os << "base region: no interpolation needed\n";
    return os.str();
  }
  os << "endpoint                                  region  weight\n";
  for (const auto& ep : endpoints) {
    std::string pt = to_string(ep.point);
    if (pt.size() < 40) pt.resize(40, ' ');
    std::string reg = to_string(ep.region);
    reg.resize(6, ' ');
    os << pt << "  " << reg << "  " << to_string(ep.weight) << "\n";
  }
  for (const auto& [name, value] : auxiliary) os << name << " = " << to_string(value) << "\n";
  return os.str();
}

}  // namespace triharm

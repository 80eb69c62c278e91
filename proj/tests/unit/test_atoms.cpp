#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "../support.hpp"
#include "triharm/atoms.hpp"

using namespace triharm;
using namespace triharm::testing;

namespace {

const GridSpec kSpec = GridSpec::make(1, 256, 16);

}  // namespace

TEST_CASE("moment orders") {
  CHECK(minimal_moment_order(1, 1.0) == 0);
  CHECK(minimal_moment_order(1, 0.5) == 1);
  CHECK(minimal_moment_order(1, 0.3) == 2);
  CHECK(minimal_moment_order(2, 0.5) == 2);
  CHECK(default_moment_order(1, 1.0) == 2);
}

TEST_CASE("p = 1, order 0, unit cube") {
  DyadicCube q{1, 0, {2, 0}};
  Atom a = make_atom(kSpec, q, 1.0, 0, 7);
  AtomCertificate c = certify(a);
  CHECK(c.passed());
  const int zero[1] = {0};
  double l1 = lp_norm(a.f, 1.0);
  CHECK(std::abs(moment(a.f, zero)) <= 1e-12 * l1);
  CHECK(max_abs(a.f.values()) <= 1.0);
  CHECK(max_abs(a.f.values()) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("p = 1/2 enforces and removes first moments") {
  DyadicCube q{1, 0, {-3, 0}};
  CHECK_THROWS_AS(make_atom(kSpec, q, 0.5, 0, 1), DomainError);
  Atom a = make_atom(kSpec, q, 0.5, 1, 1);
  AtomCertificate c = certify(a);
  CHECK(c.passed());
  CHECK(c.max_moment_residual <= kAtomMomentTolerance);
}

TEST_CASE("every generated atom is certified") {
  int made = 0;
  for (int level : {0, -1, -2})
    for (std::int64_t pos : {-2, 0, 1})
      for (double p : {1.0, 0.75, 0.5, 0.4})
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
          DyadicCube q{1, level, {pos, 0}};
          Atom a = make_atom(kSpec, q, p, default_moment_order(1, p), seed);
          AtomCertificate c = certify(a);
          CHECK(c.support_ok);
          CHECK(c.size_ok);
          CHECK(c.moments_ok);
          CHECK(c.order_ok);
          ++made;
        }
  CHECK(made == 108);
  GridSpec s2 = GridSpec::make(2, 64, 4);
  Atom a2 = make_atom(s2, DyadicCube{2, 0, {0, -1}}, 1.0, 2, 5);
  CHECK(certify(a2).passed());
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(make_atom(kSpec, DyadicCube{1, 3, {0, 0}}, 1.0, 0, 1), DomainError);   // 2 samples
  CHECK_THROWS_AS(make_atom(kSpec, DyadicCube{1, 0, {9, 0}}, 1.0, 0, 1), DomainError);   // outside the box
  CHECK_THROWS_AS(make_atom(kSpec, DyadicCube{1, 0, {0, 0}}, 1.5, 0, 1), DomainError);
  CHECK_THROWS_AS(make_atom(kSpec, DyadicCube{1, 0, {0, 0}}, 1.0, 7, 1), DomainError);
}

TEST_CASE("distinct seeds give independent atoms") {
  DyadicCube q{1, 0, {0, 0}};
  Atom a = make_atom(kSpec, q, 1.0, 2, 1), b = make_atom(kSpec, q, 1.0, 2, 2);
  double cosine = std::abs(inner_product(a.f, b.f)) / (lp_norm(a.f, 2) * lp_norm(b.f, 2));
  CHECK(cosine < 0.99);
  // and the same seed reproduces the atom
  CHECK(make_atom(kSpec, q, 1.0, 2, 1).f.values() == a.f.values());
}

TEST_CASE("sidecar and dilates") {
  Atom a = make_atom(kSpec, DyadicCube{1, 0, {1, 0}}, 1.0, 0, 3);
  CHECK(a.dilate_side(0) == 1.0);
  CHECK(a.dilate_side(1) == doctest::Approx(10.0));
  const double centre[1] = {1.5}, far[1] = {7.5};
  CHECK(a.in_dilate(0, centre));
  CHECK(!a.in_dilate(0, far));
  std::string js = a.sidecar_json(certify(a));
  CHECK(js.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("decay profile of atoms") {
  LPFamily fam = LPFamily::build(kSpec);
  double worst_spread = 0;
  for (int level : {0, -1, -2})
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Atom a = make_atom(kSpec, DyadicCube{1, level, {0, 0}}, 1.0, 1, seed);
      DecayReport rep = decay_profile_check(fam, a, 4.0);
      CHECK(int(rep.rows.size()) == fam.shell_count());
      for (const auto& r : rep.rows) {
        CHECK(std::isfinite(r.lambda_ratio));
        CHECK(std::isfinite(r.gamma_ratio));
        for (double v : r.lr_ratio) CHECK(std::isfinite(v));
      }
      worst_spread = std::max({worst_spread, rep.lambda_spread(), rep.gamma_spread()});
    }
  CHECK(worst_spread > 0);
  CHECK(worst_spread <= 100);
  Atom a = make_atom(kSpec, DyadicCube{1, 0, {0, 0}}, 1.0, 1, 1);
  CHECK_THROWS_AS(decay_profile_check(fam, a, 1.0), DomainError);
  std::ostringstream os;
  decay_profile_check(fam, a, 4.0).write_csv(os);
  CHECK(os.str().rfind("# schema=1\n", 0) == 0);
}

TEST_CASE("moment cancellation bound") {
  HardyProfile prof = HardyProfile::build(kSpec);
  for (double eps : {0.0, 0.5, 1.0}) {
    Atom a = make_atom(kSpec, DyadicCube{1, 0, {0, 0}}, 0.5, 1, 4);
    CancellationReport rep = moment_cancellation_check(prof, a, eps);
    CHECK(!rep.rows.empty());
    CHECK(std::isfinite(rep.fitted_constant));
    CHECK(rep.fitted_constant > 0);
  }
}

TEST_CASE("H1 norm of atoms is stable across cube sides") {
  LPFamily fam = LPFamily::build(kSpec);
  HardyProfile prof = HardyProfile::build(kSpec);
  double lo = INFINITY, hi = 0;
  for (int level : {0, -1, -2}) {
    Atom a = make_atom(kSpec, DyadicCube{1, level, {0, 0}}, 1.0, 2, 2);
    double v = hardy_norm(a.f, 1.0, HardyMethod::square, fam, prof) / std::pow(a.cube.volume(), 0.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo <= 10);
}

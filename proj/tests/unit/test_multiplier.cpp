#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "../support.hpp"

using namespace triharm;
using namespace triharm::testing;

namespace {

const GridSpec kSmall = GridSpec::make(1, 32, 8);

std::vector<GridFunction> triple(const GridSpec& s, std::uint64_t seed) {
  return {random_grid(s, 3 * seed), random_grid(s, 3 * seed + 1), random_grid(s, 3 * seed + 2)};
}

GridFunction product(const std::vector<GridFunction>& f) {
  std::vector<cplx> v(f[0].values());
  for (std::size_t k = 1; k < f.size(); ++k)
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= f[k][i];
  return GridFunction(f[0].spec(), v);
}

}  // namespace

TEST_CASE("constant symbol gives the pointwise product") {
  auto f = triple(kSmall, 1);
  MultiplierTensor one = make_one(3, kSmall);
  CHECK(one.materialized());
  CHECK(rel(apply_direct(one, f), product(f)) < 1e-10);
  CHECK(rel(apply_separable(one, f), product(f)) < 1e-10);
  CHECK(rel(output_spectrum(one, f).to_grid(), product(f)) < 1e-10);
}

TEST_CASE("exponential symbol translates") {
  GridFunction f = random_grid(kSmall, 4);
  const int shift = 3;
  const double a = shift * kSmall.spacing();
  MultiplierTensor sigma(1, kSmall, [a](std::span<const double> xi) {
    return std::polar(1.0, 2.0 * std::numbers::pi * xi[0] * a);
  });
  std::vector<cplx> expect(f.size());
  for (int i = 0; i < 32; ++i) expect[std::size_t(i)] = f[std::size_t((i + shift) % 32)];
  CHECK(rel(apply_direct(sigma, {f}), GridFunction(kSmall, expect)) < 1e-10);
}

TEST_CASE("single-slot filter equals convolution with its kernel") {
  GridSpec s = GridSpec::make(1, 64, 8);
  LPFamily fam = LPFamily::build(s);
  GridFunction f = random_smooth(s, 5);
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    MultiplierTensor sigma = make_separable(s, {"psi:" + std::to_string(j)});
    GridFunction kernel = inverse_transform(fam.multiplier(FilterKind::lambda, j));
    GridFunction direct = apply_direct(sigma, {f});
    CHECK(rel(direct, convolve(kernel, f)) < 1e-10);
    CHECK(rel(direct, fam.lambda(f, j)) < 1e-10);
  }
}

TEST_CASE("separable and accumulation paths match the direct oracle") {
  int instances = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    auto f = triple(kSmall, seed);
    MultiplierTensor band = make_random_band(3, kSmall, seed);
    GridFunction d = apply_direct(band, f);
    CHECK(rel(apply_separable(band, f), d) < 1e-10);
    CHECK(rel(output_spectrum(band, f).to_grid(), d) < 1e-10);
    MultiplierTensor mih = make_mihlin(3, kSmall, 1.0 + 0.25 * double(seed));
    CHECK(rel(output_spectrum(mih, f).to_grid(), apply_direct(mih, f)) < 1e-10);
    instances += 2;
  }
  CHECK(instances >= 20);
  auto f = triple(kSmall, 99);
  for (auto names : {std::vector<std::string>{"psi:0", "theta:-10", "theta:-10"},
                     std::vector<std::string>{"psi:0", "theta:-1", "theta:-2"}}) {
    MultiplierTensor sep = make_separable(kSmall, names);
    CHECK(rel(apply_separable(sep, f), apply_direct(sep, f)) < 1e-10);
  }
}

TEST_CASE("a zero factor gives zero output") {
  Factorization fac;
  FactorFn one = [](std::span<const double>) -> cplx { return 1.0; };
  FactorFn zero = [](std::span<const double>) -> cplx { return 0.0; };
  fac.terms.push_back({1.0, {one, zero, one}});
  MultiplierTensor sigma(3, kSmall, [](std::span<const double>) -> cplx { return 0.0; }, fac);
  auto f = triple(kSmall, 2);
  CHECK(apply_separable(sigma, f).is_zero());
  CHECK(max_abs(apply_direct(sigma, f).values()) == 0.0);
}

TEST_CASE("multilinearity") {
  MultiplierTensor sigma = make_random_band(3, kSmall, 7);
  auto f = triple(kSmall, 3);
  GridFunction g = random_grid(kSmall, 77);
  const cplx a(0.7, -1.3);
  GridFunction base = apply_direct(sigma, f);
  for (int slot = 0; slot < 3; ++slot) {
    auto mixed = f, other = f;
    mixed[std::size_t(slot)] = f[std::size_t(slot)].scaled(a) + g;
    other[std::size_t(slot)] = g;
    GridFunction lhs = apply_direct(sigma, mixed);
    GridFunction rhs = base.scaled(a) + apply_direct(sigma, other);
    CHECK(rel(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("budget and argument checks") {
  GridSpec big = GridSpec::make(1, 128, 16);
  CHECK(!within_direct_budget(3, big));
  CHECK(within_direct_budget(3, GridSpec::make(1, 64, 8)));
  CHECK_THROWS_AS(apply_direct(make_one(3, big), triple(big, 1)), DomainError);
  CHECK_THROWS_AS(apply_direct(make_one(3, kSmall), {random_grid(kSmall, 1)}), DomainError);
  CHECK_THROWS_AS(apply_separable(make_mihlin(3, kSmall, 1.0), triple(kSmall, 1)), DomainError);
  CHECK_THROWS_AS(make_named("mihlin:x", 3, kSmall), UsageError);
  CHECK_THROWS_AS(make_named("gauss", 3, kSmall), UsageError);
  CHECK_THROWS_AS(make_named("separable:one,one", 3, kSmall), UsageError);
  CHECK(make_named("separable:one,psi:0,theta:-1", 3, kSmall).factorization().has_value());
  std::ostringstream os;
  make_one(3, kSmall).write_binary(os);
  CHECK(os.str().size() > 32768 * 16);
}

TEST_CASE("localization") {
  GridSpec s = GridSpec::make(1, 16, 4);
  AnnularPartition part = AnnularPartition::build(s, 3);
  MultiplierTensor one = make_one(3, s);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 15);
  for (int j = part.shell_min(); j <= part.shell_max(); ++j) {
    MultiplierTensor loc = localize(one, part, j, LocalizeMode::theta);
    for (int t = 0; t < 400; ++t) {
      double xi[3] = {s.frequency(pick(rng)), s.frequency(pick(rng)), s.frequency(pick(rng))};
      double r = AnnularPartition::radius(xi);
      if (loc(xi) != cplx{}) {
        CHECK(r >= std::ldexp(1.0, j - 3));
        CHECK(r <= std::ldexp(1.0, j + 3));
      }
      // sigma_j(2^j xi) = sigma(2^j xi) Theta(xi)
      double up[3] = {std::ldexp(xi[0], j), std::ldexp(xi[1], j), std::ldexp(xi[2], j)};
      CHECK(loc(up) == one(up) * AnnularPartition::Theta(r));
    }
  }
  // Psi localizations sum back to sigma away from the origin
  MultiplierTensor sigma = make_random_band(3, s, 4);
  for (int t = 0; t < 200; ++t) {
    double xi[3] = {s.frequency(pick(rng)), s.frequency(pick(rng)), s.frequency(pick(rng))};
    if (AnnularPartition::radius(xi) == 0) continue;
    cplx acc = 0;
    for (int j = part.shell_min(); j <= part.shell_max(); ++j) acc += localize(sigma, part, j, LocalizeMode::psi)(xi);
    CHECK(std::abs(acc - sigma(xi)) <= 1e-12 * std::max(1.0, std::abs(sigma(xi))));
  }
  CHECK_THROWS_AS(localize(one, part, part.shell_max() + 1, LocalizeMode::theta), DomainError);
}

TEST_CASE("Sobolev multiplier norm") {
  GridSpec s = GridSpec::make(1, 64, 8);
  AnnularPartition part = AnnularPartition::build(s, 3);
  MultiplierTensor zero(3, s, [](std::span<const double>) -> cplx { return 0.0; });
  CHECK(ls2_norm(zero, part, 1.0) == 0.0);
  CHECK_THROWS_AS(ls2_norm(zero, part, -1.0), DomainError);

  Ls2Options opt;
  Ls2Result one = ls2_norm(make_one(3, s), part, opt);
  CHECK(one.shells.size() >= 3);
  double lo = *std::min_element(one.per_shell.begin(), one.per_shell.end());
  double hi = *std::max_element(one.per_shell.begin(), one.per_shell.end());
  CHECK(hi - lo <= 1e-10 * hi);
  // s = 0 gives the L2 norm of the window, a Riemann sum on the same grid
  const int P = ls2_samples(3);
  const double A = 2.5, step = 2 * A / P;
  double l2 = 0;
  for (int a = 0; a < P; ++a)
    for (int b = 0; b < P; ++b)
      for (int c = 0; c < P; ++c) {
        double eta[3] = {-A + a * step, -A + b * step, -A + c * step};
        l2 += std::pow(AnnularPartition::Psi(AnnularPartition::radius(eta)), 2);
      }
  CHECK(one.value == doctest::Approx(std::sqrt(l2 * step * step * step)).epsilon(1e-10));

  opt.s = 2;
  Ls2Result mih = ls2_norm(make_mihlin(3, s, 2.0), part, opt);
  CHECK(std::isfinite(mih.value));
  lo = *std::min_element(mih.per_shell.begin(), mih.per_shell.end());
  hi = *std::max_element(mih.per_shell.begin(), mih.per_shell.end());
  CHECK(hi - lo <= 1e-6 * hi);

  MultiplierTensor a = make_random_band(3, s, 1), b = make_random_band(3, s, 2);
  MultiplierTensor sum(3, s, [a, b](std::span<const double> xi) { return a(xi) + b(xi); });
  double prev = 0;
  for (double sv : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    double va = ls2_norm(a, part, sv);
    CHECK(va >= prev);
    prev = va;
    CHECK(ls2_norm(sum, part, sv) <= (va + ls2_norm(b, part, sv)) * (1 + 1e-10));
  }
  const double full = ls2_norm(a, part, 2.0);
  for (int j = part.shell_min(); j <= part.shell_max(); ++j)
    CHECK(ls2_norm(localize(a, part, j, LocalizeMode::theta), part, 2.0) <= 5 * full);

  opt.product_s = {1.0, 1.0, 1.0};
  CHECK(std::isfinite(ls2_norm(a, part, opt).value));
  opt.product_s = {1.0};
  CHECK_THROWS_AS(ls2_norm(a, part, opt), DomainError);
}

TEST_CASE("vanishing cutoff") {
  for (auto prof : {VanishingProfile::gaussian_flat, VanishingProfile::compact}) {
    CHECK(vanishing_cutoff(0.0, prof) == 0.0);
    for (double r = 2.0; r < 6.0; r += 0.25) CHECK(std::abs(vanishing_cutoff(r, prof) - 1.0) <= 1e-17);
    for (double r = 0.0; r < 2.0; r += 0.01) {
      double v = vanishing_cutoff(r, prof);
      CHECK((v >= 0.0 && v <= 1.0));
    }
  }
  for (double r = 0.0; r <= 1.0; r += 0.05) CHECK(vanishing_cutoff(r, VanishingProfile::compact) == 0.0);
  // order 6 zero at the origin
  CHECK(vanishing_cutoff(1e-3, VanishingProfile::gaussian_flat) < 1e-15);
}

TEST_CASE("vanishing modification") {
  GridSpec s = GridSpec::make(1, 512, 32);
  CHECK_THROWS_AS(make_vanishing_multiplier(make_one(3, s), 0.1), DomainError);
  MultiplierTensor zero(3, s, [](std::span<const double>) -> cplx { return 0.0; });
  std::vector<GridFunction> f;
  for (std::uint64_t k = 1; k <= 3; ++k) f.push_back(band_limited(s, 1.0, 3.0, k));
  CHECK(triharm::apply(make_vanishing_multiplier(zero, 0.5), f).is_zero());

  // outputs pass the moment check at p = 1/2 (orders 0 and 1)
  MultiplierTensor sigma = make_vanishing_multiplier(make_one(3, s), 0.5);
  CHECK(sigma.factorization().has_value());
  GridFunction g = triharm::apply(sigma, f);
  MomentReport rep = moment_check(g, 0.5);
  CHECK(rep.moments.size() == 2);
  CHECK(rep.pass);

  // inputs with positive frequencies only: every output frequency is >= 3,
  // above 2 delta, so the cutoff is invisible
  std::vector<SpectralFunction> pos;
  for (std::uint64_t k = 1; k <= 3; ++k) {
    SpectralFunction F = forward_transform(band_limited(s, 1.0, 3.0, k));
    std::vector<cplx> v(F.values());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (s.signed_index(int(i)) < 0) v[i] = 0.0;
    pos.emplace_back(s, v);
  }
  GridFunction plain = triharm::apply(make_one(3, s), pos), cut = triharm::apply(make_vanishing_multiplier(make_one(3, s), 1.0), pos);
  CHECK(rel(cut, plain) < 1e-12);
}

TEST_CASE("moment check") {
  GridSpec s = GridSpec::make(1, 256, 16);
  CHECK(vanishing_order(1, 1.0) == 0);
  CHECK(vanishing_order(1, 0.5) == 1);
  CHECK(vanishing_order(2, 0.5) == 2);
  GridFunction gauss = gaussian(s, 1.0);
  MomentReport r1 = moment_check(gauss, 1.0);
  CHECK(r1.moments.size() == 1);
  CHECK(!r1.pass);
  // derivative of a Gaussian has a vanishing integral
  GridFunction dg = sample_function(s, [](std::span<const double> x) {
    return cplx(-2 * std::numbers::pi * x[0] * std::exp(-std::numbers::pi * x[0] * x[0]));
  });
  CHECK(moment_check(dg, 1.0).pass);
  CHECK(moment_check(GridFunction::zeros(s), 0.5).pass);
  CHECK_THROWS_AS(moment_check(gauss, 2.0), DomainError);
  GridFunction flat = sample_function(s, [](std::span<const double>) { return cplx(1.0); });
  CHECK_THROWS_AS(moment_check(flat, 1.0), DomainError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "../support.hpp"

using namespace triharm;
using namespace triharm::testing;

TEST_CASE("gaussian transforms to itself") {
  GridSpec s = GridSpec::make(1, 256, 32);
  SpectralFunction F = forward_transform(gaussian(s));
  double worst = 0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    double xi = s.frequency(int(k));
    worst = std::max(worst, std::abs(F[k] - std::exp(-std::numbers::pi * xi * xi)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("transform pair round trip and zero") {
  for (int dim : {1, 2}) {
    GridSpec s = GridSpec::make(dim, dim == 1 ? 256 : 64, 16);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      GridFunction f = random_smooth(s, seed);
      CHECK(rel(inverse_transform(forward_transform(f)), f) < 1e-12);
    }
    CHECK(forward_transform(GridFunction::zeros(s)).is_zero());
    CHECK(inverse_transform(SpectralFunction::zeros(s)).is_zero());
  }
}

TEST_CASE("single zero frequency synthesizes the constant 1/L^dim") {
  for (int dim : {1, 2}) {
    GridSpec s = GridSpec::make(dim, 32, 8);
    std::vector<cplx> v(s.size());
    v[0] = 1.0;
    GridFunction g = inverse_transform(SpectralFunction(s, v));
    // direct summation oracle: only the k = 0 term survives
    const double c = std::pow(8.0, -dim);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g[i] - c) < 1e-15);
  }
}

TEST_CASE("inverse transform against direct summation") {
  GridSpec s = GridSpec::make(1, 32, 4);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<cplx> v(s.size());
  for (auto& x : v) x = {n(rng), n(rng)};
  GridFunction g = inverse_transform(SpectralFunction(s, v));
  double worst = 0;
  for (int i = 0; i < 32; ++i) {
    cplx acc = 0;
    for (int k = 0; k < 32; ++k) acc += v[std::size_t(k)] * std::polar(1.0, 2 * std::numbers::pi * s.frequency(k) * s.coord(i));
    worst = std::max(worst, std::abs(acc / 4.0 - g[std::size_t(i)]));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("Parseval") {
  GridSpec s = GridSpec::make(2, 64, 16);
  GridFunction f = random_smooth(s, 11);
  double a = lp_norm(f, 2), b = spectral_l2_norm(forward_transform(f));
  CHECK(std::abs(a - b) / a < 1e-10);
}

TEST_CASE("non-finite input is rejected") {
  GridSpec s = GridSpec::make(1, 16, 4);
  std::vector<cplx> v(s.size());
  v[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(GridFunction(s, v), DomainError);
}

TEST_CASE("grid spec invariants") {
  CHECK_THROWS_AS(GridSpec::make(3, 16, 4), DomainError);
  CHECK_THROWS_AS(GridSpec::make(1, 24, 4), DomainError);
  CHECK_THROWS_AS(GridSpec::make(1, 8, 4), DomainError);
  CHECK_THROWS_AS(GridSpec::make(1, 16, 3), DomainError);
  GridSpec s = GridSpec::make(1, 64, 0.5);
  CHECK(s.spacing() * s.samples() == s.length());
}

TEST_CASE("lp norms") {
  GridSpec s = GridSpec::make(1, 256, 16);
  // height-1 plateau on [-2, 2): volume 4
  GridFunction box = sample_function(s, [](std::span<const double> x) -> cplx { return x[0] >= -2 && x[0] < 2 ? 1.0 : 0.0; });
  for (double p : {0.5, 1.0, 2.0, 4.0}) CHECK(lp_norm(box, p) == doctest::Approx(std::pow(4.0, 1 / p)).epsilon(1e-12));
  CHECK(lp_norm(box, INFINITY) == 1.0);
  CHECK(lp_norm(GridFunction::zeros(s), 2) == 0.0);
  GridFunction f = random_smooth(s, 2);
  for (double p : {0.5, 1.0, 3.0}) CHECK(lp_norm(f.scaled(3.5), p) == doctest::Approx(3.5 * lp_norm(f, p)).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(f, 0.0), DomainError);
}

TEST_CASE("moments") {
  GridSpec s = GridSpec::make(1, 256, 32);
  GridFunction odd = sample_function(s, [](std::span<const double> x) -> cplx { return x[0] * std::exp(-x[0] * x[0]); });
  int a0[1] = {0};
  CHECK(std::abs(moment(odd, a0)) < 1e-12);
  // int x^2 e^{-pi x^2} dx = 1 / (2 pi)
  int a2[1] = {2};
  CHECK(std::abs(moment(gaussian(s), a2) - 1 / (2 * std::numbers::pi)) < 1e-6);
  // spectrum vanishing on |xi| <= 1/2: moments up to order 2 vanish
  GridFunction hp = band_limited(s, 0.5, 3.0, 4);
  for (int k = 0; k <= 2; ++k) {
    int a[1] = {k};
    CHECK(std::abs(moment(hp, a)) < 1e-8);
  }
  // linearity
  GridFunction f = random_smooth(s, 5), g = random_smooth(s, 6);
  int a1[1] = {1};
  CHECK(std::abs(moment(f + g.scaled(2.0), a1) - moment(f, a1) - 2.0 * moment(g, a1)) < 1e-12);
}

TEST_CASE("convolution") {
  GridSpec s = GridSpec::make(1, 64, 16);
  GridFunction f = random_smooth(s, 7), g = random_smooth(s, 8);
  // discrete delta of unit mass at the origin (index N/2)
  std::vector<cplx> d(s.size());
  d[32] = 1.0 / s.spacing();
  CHECK(rel(convolve(f, GridFunction(s, d)), f) < 1e-12);
  CHECK(rel(convolve(f, g), convolve(g, f)) < 1e-12);
  // brute-force periodic sum
  GridFunction c = convolve(f, g);
  std::vector<cplx> direct(s.size());
  for (int i = 0; i < 64; ++i)
    for (int k = 0; k < 64; ++k) direct[std::size_t(i)] += f[std::size_t(k)] * g[std::size_t((i - k + 32 + 64) % 64)] * s.spacing();
  CHECK(relative_error(c.values(), direct) < 1e-10);
  // widths a, b combine to sqrt(a^2 + b^2), with amplitude a b / sqrt(a^2 + b^2)
  GridSpec t = GridSpec::make(1, 256, 32);
  GridFunction ga = gaussian(t, 1.0), gb = gaussian(t, 1.5);
  const double w = std::sqrt(1.0 + 2.25);
  GridFunction expect = gaussian(t, w).scaled(1.5 / w);
  CHECK(max_abs((convolve(ga, gb) - expect).values()) < 1e-6);
  CHECK_THROWS_AS(convolve(f, gaussian(t)), DomainError);
}

TEST_CASE("binary round trip") {
  GridSpec s = GridSpec::make(2, 16, 4);
  GridFunction f = random_smooth(s, 9);
  std::stringstream ss;
  write_binary(ss, s, f.values());
  CHECK(ss.str().size() == 24 + 16 * s.size());
  GridFunction g = read_grid_function(ss);
  CHECK(g.spec() == s);
  CHECK(g.values() == f.values());
}

TEST_CASE("margin guard") {
  GridSpec s = GridSpec::make(1, 256, 32);
  CHECK_NOTHROW(require_margin_decay(gaussian(s), 1e-12));
  CHECK_THROWS_AS(require_margin_decay(gaussian(s, 10.0), 1e-12), DomainError);
}

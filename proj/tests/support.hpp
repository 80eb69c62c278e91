#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "triharm/experiments.hpp"

namespace triharm::testing {

inline GridFunction gaussian(const GridSpec& spec, double width = 1.0, double x0 = 0.0) {
  return sample_function(spec, [=](std::span<const double> x) -> cplx {
    double r2 = 0;
    for (std::size_t c = 0; c < x.size(); ++c) r2 += (x[c] - (c == 0 ? x0 : 0.0)) * (x[c] - (c == 0 ? x0 : 0.0));
    return std::exp(-std::numbers::pi * r2 / (width * width));
  });
}

// Smooth random function: a few Gaussians with random centres, widths and phases.
inline GridFunction random_smooth(const GridSpec& spec, std::uint64_t seed, bool complex_valued = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-0.15 * spec.length(), 0.15 * spec.length());
  std::uniform_real_distribution<double> w(0.04 * spec.length(), 0.08 * spec.length()), u(-1, 1);
  struct B {
    double c0, c1, w, k;
    cplx a;
  };
  std::vector<B> bs;
  for (int i = 0; i < 4; ++i) bs.push_back({c(rng), c(rng), w(rng), u(rng), {u(rng), complex_valued ? u(rng) : 0.0}});
  return sample_function(spec, [&](std::span<const double> x) -> cplx {
    cplx acc = 0;
    for (const auto& b : bs) {
      double r2 = (x[0] - b.c0) * (x[0] - b.c0);
      if (x.size() == 2) r2 += (x[1] - b.c1) * (x[1] - b.c1);
      acc += b.a * std::exp(-std::numbers::pi * r2 / (b.w * b.w)) * std::cos(b.k * x[0]);
    }
    return acc;
  });
}

// Band-limited input whose spectrum lies exactly in [lo, hi].
inline GridFunction band_limited(const GridSpec& spec, double lo, double hi, std::uint64_t seed) {
  return make_surrogate(spec, {lo, hi}, seed, 1.0, 0.0, 3).f;
}

// Arbitrary lattice data, for identities that are algebraic.
inline GridFunction random_grid(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(spec.size());
  for (auto& x : v) x = {g(rng), g(rng)};
  return GridFunction(spec, v);
}

inline double rel(const GridFunction& a, const GridFunction& b) { return relative_error(a.values(), b.values()); }

}  // namespace triharm::testing

#pragma once

#include <span>

#include "triharm/grid.hpp"

namespace triharm {

// Radial low-pass profile: 1 on [0, 1], 0 on [2, inf), C-infinity in between.
double theta_hat(double r) noexcept;
// Annular profile theta_hat(r) - theta_hat(2r), supported in [1/2, 2].
double psi_hat(double r) noexcept;

enum class FilterKind { lambda, gamma, tilde_lambda, tilde_gamma };

const char* to_string(FilterKind k) noexcept;

// Littlewood-Paley family on a grid. Shells j_min..j_max are the ones the
// lattice resolves; the unchecked filter variants accept any j and are used
// where a formula legitimately reaches outside that range.
class LPFamily {
 public:
  static LPFamily build(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_max_; }
  bool contains(int j) const noexcept { return j >= j_min_ && j <= j_max_; }
  int shell_count() const noexcept { return j_max_ - j_min_ + 1; }

  // Multiplier value of the given filter at shell j and radius |xi|.
  static double profile(FilterKind kind, int j, double radius) noexcept;

  SpectralFunction multiplier(FilterKind kind, int j) const;

  GridFunction apply(FilterKind kind, const GridFunction& f, int j) const;
  GridFunction lambda(const GridFunction& f, int j) const { return apply(FilterKind::lambda, f, j); }
  GridFunction gamma(const GridFunction& f, int j) const { return apply(FilterKind::gamma, f, j); }
  GridFunction tilde_lambda(const GridFunction& f, int j) const { return apply(FilterKind::tilde_lambda, f, j); }
  GridFunction tilde_gamma(const GridFunction& f, int j) const { return apply(FilterKind::tilde_gamma, f, j); }

  SpectralFunction apply_spectral(FilterKind kind, const SpectralFunction& F, int j) const;
  SpectralFunction apply_spectral_unchecked(FilterKind kind, const SpectralFunction& F, int j) const;

 private:
  void check(int j) const;
  GridSpec spec_;
  int j_min_ = 0;
  int j_max_ = 0;
};

// Radial annular partition on (R^dim)^m, |xi| being the full Euclidean norm.
class AnnularPartition {
 public:
  static AnnularPartition build(const GridSpec& spec, int m);

  const GridSpec& spec() const noexcept { return spec_; }
  int arity() const noexcept { return m_; }
  // Shells whose support meets the radii the m-fold lattice can carry.
  int shell_min() const noexcept { return shell_min_; }
  int shell_max() const noexcept { return shell_max_; }
  bool resolvable(int j) const noexcept { return j >= shell_min_ && j <= shell_max_; }

  static double Psi(double radius) noexcept { return psi_hat(radius); }
  // Sum over k = -2..2 of Psi(2^k r); equals 1 on [1/4, 4].
  static double Theta(double radius) noexcept;
  static double radius(std::span<const double> xi) noexcept;

 private:
  GridSpec spec_;
  int m_ = 1;
  int shell_min_ = 0;
  int shell_max_ = 0;
};

}  // namespace triharm

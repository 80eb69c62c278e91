#include "triharm/lp_frame.hpp"

#include <cmath>
#include <string>

namespace triharm {

namespace {
inline double bump_tail(double t) noexcept { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double theta_hat(double r) noexcept {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  double a = bump_tail(2.0 - r);
  double b = bump_tail(r - 1.0);
  return a / (a + b);
}

double psi_hat(double r) noexcept { return theta_hat(r) - theta_hat(2.0 * r); }

const char* to_string(FilterKind k) noexcept {
  switch (k) {
    case FilterKind::lambda: return "lambda";
    case FilterKind::gamma: return "gamma";
    case FilterKind::tilde_lambda: return "tilde_lambda";
    case FilterKind::tilde_gamma: return "tilde_gamma";
  }
  return "?";
}

LPFamily LPFamily::build(const GridSpec& spec) {
  LPFamily fam;
  fam.spec_ = spec;
  fam.j_min_ = int(std::ceil(std::log2(1.0 / spec.length()))) + 1;
  fam.j_max_ = int(std::floor(std::log2(spec.samples() / (2.0 * spec.length())))) - 1;
  require(fam.shell_count() >= 3, "grid too coarse: fewer than 3 resolvable dyadic shells");
  return fam;
}

double LPFamily::profile(FilterKind kind, int j, double r) noexcept {
  const double s = std::ldexp(r, -j);
  switch (kind) {
    case FilterKind::lambda: return psi_hat(s);
    case FilterKind::gamma: return theta_hat(s);
    // psi_{j-1} + psi_j + psi_{j+1} telescopes to this difference, which is
    // exactly 1 on the support of psi_j.
    case FilterKind::tilde_lambda: return theta_hat(0.5 * s) - theta_hat(4.0 * s);
    case FilterKind::tilde_gamma: return theta_hat(0.5 * s);
  }
  return 0.0;
}

void LPFamily::check(int j) const {
  if (!contains(j))
    throw DomainError("shell " + std::to_string(j) + " outside the resolvable range [" + std::to_string(j_min_) +
                      ", " + std::to_string(j_max_) + "]");
}

SpectralFunction LPFamily::multiplier(FilterKind kind, int j) const {
  check(j);
  std::vector<cplx> v(spec_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile(kind, j, spec_.frequency_radius(i));
  return SpectralFunction(spec_, std::move(v));
}

SpectralFunction LPFamily::apply_spectral_unchecked(FilterKind kind, const SpectralFunction& F, int j) const {
  require(F.spec() == spec_, "function and family live on different grids");
  return multiply_radial(F, [kind, j](double r) { return profile(kind, j, r); });
}

SpectralFunction LPFamily::apply_spectral(FilterKind kind, const SpectralFunction& F, int j) const {
  check(j);
  return apply_spectral_unchecked(kind, F, j);
}

GridFunction LPFamily::apply(FilterKind kind, const GridFunction& f, int j) const {
  return inverse_transform(apply_spectral(kind, forward_transform(f), j));
}

AnnularPartition AnnularPartition::build(const GridSpec& spec, int m) {
  require(m >= 1 && m <= 3, "multilinear arity must be 1, 2 or 3");
  AnnularPartition p;
  p.spec_ = spec;
  p.m_ = m;
  const double r_lo = 1.0 / spec.length();
  const double r_hi = std::sqrt(double(m * spec.dim())) * spec.nyquist();
  // Shell j covers [2^{j-1}, 2^{j+1}].
  p.shell_min_ = int(std::floor(std::log2(r_lo))) - 1;
  p.shell_max_ = int(std::ceil(std::log2(r_hi))) + 1;
  return p;
}

// The five-term sum telescopes to theta(r/4) - theta(8r).
double AnnularPartition::Theta(double r) noexcept { return theta_hat(0.25 * r) - theta_hat(8.0 * r); }

double AnnularPartition::radius(std::span<const double> xi) noexcept {
  double acc = 0;
  for (double x : xi) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace triharm

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "triharm/function_spaces.hpp"
#include "triharm/lp_frame.hpp"
#include "triharm/maximal.hpp"

namespace triharm {

struct AtomCertificate {
  bool support_ok = false;
  bool size_ok = false;
  bool moments_ok = false;
  bool order_ok = false;
  double sup_norm = 0;
  double size_bound = 0;            // |Q|^{-1/p}
  double max_moment_residual = 0;   // relative to the absolute moment
  bool passed() const noexcept { return support_ok && size_ok && moments_ok && order_ok; }
};

struct Atom {
  GridFunction f;
  DyadicCube cube;
  double p = 1;
  int moment_order = 0;
  std::uint64_t seed = 0;  // the seed that produced the accepted draw

  // Side of the concentric dilate Q^(k*) with factor (10 sqrt n)^k.
  double dilate_side(int k) const noexcept;
  bool in_dilate(int k, std::span<const double> x) const noexcept;
  std::string sidecar_json(const AtomCertificate& cert) const;
};

int minimal_moment_order(int n, double p) noexcept;  // [n/p - n]_+
int default_moment_order(int n, double p) noexcept;  // minimal + 2

// Relative tolerance for vanishing moments of a generated atom.
inline constexpr double kAtomMomentTolerance = 1e-10;

Atom make_atom(const GridSpec& spec, const DyadicCube& q, double p, int moment_order, std::uint64_t seed);
AtomCertificate certify(const Atom& a);

struct DecayRow {
  int j = 0;
  double scale = 0;          // 2^j side(Q)
  double lambda_ratio = 0;   // sup |Lambda_j a| / bound
  double gamma_ratio = 0;    // sup |Gamma_j a| / bound
  double lr_ratio[3] = {0, 0, 0};  // r = 1, 2, inf
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double lambda_max = 0, lambda_min = 0;
  double gamma_max = 0, gamma_min = 0;
  double lambda_spread() const noexcept { return lambda_min > 0 ? lambda_max / lambda_min : 0.0; }
  double gamma_spread() const noexcept { return gamma_min > 0 ? gamma_max / gamma_min : 0.0; }
  void write_csv(std::ostream& os) const;
};

// Points where |Lambda_j a| is below this fraction of sup |a| are treated as
// rounding noise when forming pointwise ratios.
inline constexpr double kDecayNoiseFloor = 1e-13;

DecayReport decay_profile_check(const LPFamily& fam, const Atom& a, double decay_exponent);

struct CancellationRow {
  int l = 0;
  double ratio = 0;
};

struct CancellationReport {
  double epsilon = 0;
  std::vector<CancellationRow> rows;
  double fitted_constant = 0;
};

// sup |phi_l * a| against 2^{l(M+n+eps)} times the integral of |y - x_Q|^{M+eps} |a(y)|.
CancellationReport moment_cancellation_check(const HardyProfile& profile, const Atom& a, double epsilon);

}  // namespace triharm

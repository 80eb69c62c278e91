#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "triharm/lp_frame.hpp"

namespace triharm {

// Compactly supported smooth bump phi (support |x| <= 1) and its dilates
// phi_l = 2^{l n} phi(2^l .), each normalized so its Riemann sum is 1.
class HardyProfile {
 public:
  static HardyProfile build(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  int l_min() const noexcept { return l_min_; }
  int l_max() const noexcept { return l_max_; }
  static double bump(double r) noexcept;

  GridFunction phi(int l) const;
  const SpectralFunction& phi_hat(int l) const;
  GridFunction smooth(const GridFunction& f, int l) const;  // phi_l * f

 private:
  GridSpec spec_;
  int l_min_ = 0;
  int l_max_ = 0;
  std::vector<SpectralFunction> spectra_;
};

enum class HardyMethod { maximal, square, gamma_sup };
const char* to_string(HardyMethod m) noexcept;

// Margin tolerance for Hardy norm inputs. Littlewood-Paley pieces carry
// tails from the C-infinity cutoffs near 1e-8 of their peak, so the guard
// is looser than the one used for moment checks.
inline constexpr double kHardyMarginTolerance = 1e-6;

double hardy_norm(const GridFunction& f, double p, HardyMethod method, const LPFamily& fam,
                  const HardyProfile& profile, double margin_tolerance = kHardyMarginTolerance);

// Pointwise sup over l of |phi_l * f|.
GridFunction hardy_maximal_function(const GridFunction& f, const HardyProfile& profile);

struct HardyRow {
  std::size_t function_id = 0;
  double p = 0;
  HardyMethod method = HardyMethod::maximal;
  double value = 0;
};

struct HardyEquivalenceReport {
  std::vector<HardyRow> rows;
  std::vector<double> ps;
  std::vector<double> spread;  // per p: max over corpus of max/min across methods
  double max_spread() const;
  void write_csv(std::ostream& os) const;
};

HardyEquivalenceReport hardy_equivalence_report(const std::vector<GridFunction>& corpus, const std::vector<double>& ps,
                                                const LPFamily& fam, const HardyProfile& profile);

}  // namespace triharm

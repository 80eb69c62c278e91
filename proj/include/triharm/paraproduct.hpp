#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "triharm/multiplier.hpp"

namespace triharm {

inline constexpr int kDefaultParaproductShift = 10;

// Slot orderings by decreasing shell index. Ties go to the ordering that
// lists the lower slot first, so the six sets partition Z^3.
inline constexpr std::array<std::array<int, 3>, 6> kOrderings = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

struct ParaproductPieces {
  int shift = kDefaultParaproductShift;
  GridFunction t1;                      // sum_j T_{sigma_j}(Lambda_j f1, Gamma_{j-S} f2, Gamma_{j-S} f3)
  std::vector<GridFunction> t2k;        // k = 0..S-1: T_{sigma_j}(Lambda_j f1, Lambda_{j-k} f2, Gamma_{j-k} f3)
  std::array<GridFunction, 5> residual; // orderings 2..6 of kOrderings
  std::size_t terms_evaluated = 0;

  GridFunction primary() const;  // t1 + sum_k t2k
  GridFunction total() const;
};

// Spectrum of f must vanish at 0 and outside [2^{j_min}, 2^{j_max}].
void require_band(const LPFamily& fam, const GridFunction& f, double relative_tolerance = 1e-12);

ParaproductPieces paraproduct_decompose(const MultiplierTensor& sigma, const AnnularPartition& part,
                                        const LPFamily& fam, const std::vector<GridFunction>& f,
                                        int shift = kDefaultParaproductShift, int threads = 1);

using ShellPredicate = std::function<bool(const std::array<int, 3>&)>;

// Shell triples covered by t1 + sum_k t2k.
ShellPredicate primary_index_set(int shift);
// Strict-order set of ordering o (0..5) with the tie rule above.
ShellPredicate ordering_index_set(int o);

// Brute-force oracle: sum over shell triples in the predicate of
// T_sigma(Lambda_{j1} f1, Lambda_{j2} f2, Lambda_{j3} f3) via apply_direct.
GridFunction lattice_triple_sum(const MultiplierTensor& sigma, const LPFamily& fam, const std::vector<GridFunction>& f,
                                const ShellPredicate& in_set);

// Largest |output spectrum| of T_{sigma_k}(Lambda_k f1, Gamma_{k-S} f2, Gamma_{k-S} f3)
// outside 2^{k-2} <= |xi| <= 2^{k+2}, and the largest value overall.
struct LocalizationCheck {
  int k = 0;
  double outside = 0;
  double peak = 0;
};
LocalizationCheck localization_check(const MultiplierTensor& sigma, const AnnularPartition& part, const LPFamily& fam,
                                     const std::vector<GridFunction>& f, int k, int shift = kDefaultParaproductShift);

}  // namespace triharm

#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triharm/lp_frame.hpp"

namespace triharm {

// Symbol of an m-linear operator. The argument holds m frequency vectors in
// slot order, each with dim components.
using SymbolFn = std::function<cplx(std::span<const double>)>;
// One-variable factor of a separable symbol, evaluated at a dim-vector.
using FactorFn = std::function<cplx(std::span<const double>)>;

struct SeparableTerm {
  cplx weight = 1.0;
  std::vector<FactorFn> factors;  // one per slot
};

// sigma(xi) = sum_factor(xi_1 + ... + xi_m) * sum_r weight_r prod_i factor_{r,i}(xi_i).
struct Factorization {
  std::vector<SeparableTerm> terms;
  FactorFn sum_factor;  // empty means 1
};

// Largest m * dim * log2(N) for which the full tensor is stored and the
// direct oracle may run.
inline constexpr int kDirectBudget = 18;

class MultiplierTensor {
 public:
  MultiplierTensor() = default;
  MultiplierTensor(int m, GridSpec spec, SymbolFn symbol, std::optional<Factorization> factorization = std::nullopt,
                   std::string name = "custom");

  int arity() const noexcept { return m_; }
  const GridSpec& spec() const noexcept { return spec_; }
  const std::string& name() const noexcept { return name_; }
  const SymbolFn& symbol() const noexcept { return symbol_; }
  const std::optional<Factorization>& factorization() const noexcept { return factorization_; }
  bool materialized() const noexcept { return !values_.empty(); }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::size_t lattice_size() const noexcept;

  cplx operator()(std::span<const double> xi) const { return symbol_(xi); }
  // Value at a lattice tuple given as flat spectral indices per slot.
  cplx at(std::span<const std::size_t> slots) const;

  void write_binary(std::ostream& os) const;
  void write_binary(const std::string& path) const;

 private:
  int m_ = 1;
  GridSpec spec_;
  SymbolFn symbol_;
  std::optional<Factorization> factorization_;
  std::vector<cplx> values_;
  std::string name_;
};

bool within_direct_budget(int m, const GridSpec& spec) noexcept;

// Named families. Separable factor names: "one", "psi:J", "theta:J".
MultiplierTensor make_one(int m, const GridSpec& spec);
MultiplierTensor make_mihlin(int m, const GridSpec& spec, double tau);
MultiplierTensor make_random_band(int m, const GridSpec& spec, std::uint64_t seed, int rank = 3);
MultiplierTensor make_separable(const GridSpec& spec, const std::vector<std::string>& factors);
FactorFn parse_factor(const std::string& name);
// "one", "mihlin:TAU", "random_band:SEED", "separable:F1,F2,..."; throws UsageError.
MultiplierTensor make_named(const std::string& text, int m, const GridSpec& spec);

// Output spectrum on an enlarged lattice with M = 2^k >= m N points per
// axis and the same box length, so that no output frequency aliases.
struct ExtendedSpectrum {
  GridSpec spec;  // the input grid
  int m = 1;
  GridSpec fine;  // M samples per axis, same length
  std::vector<cplx> values;

  SpectralFunction fold() const;  // alias onto the input lattice
  GridFunction to_grid() const { return inverse_transform(fold()); }
  // Largest |value| at extended frequencies outside [lo, hi] in |eta|.
  double max_outside(double lo, double hi) const;
};

GridSpec extended_spec(const GridSpec& spec, int m);

// Oracle: full lattice sum for every grid point, without FFTs.
GridFunction apply_direct(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs);
// Zero-padded product of factor-filtered inputs, then the sum factor.
GridFunction apply_separable(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs);
GridFunction apply_separable(const MultiplierTensor& sigma, const std::vector<SpectralFunction>& inputs);
// Exact accumulation over the nonzero spectral entries of the inputs. Refuses
// more than kAccumulationBudget entry tuples.
inline constexpr double kAccumulationBudget = 2e9;
ExtendedSpectrum output_spectrum(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs);
ExtendedSpectrum output_spectrum(const MultiplierTensor& sigma, const std::vector<SpectralFunction>& inputs);
// Separable fast path when a factorization exists, else the accumulation.
GridFunction apply(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs);
GridFunction apply(const MultiplierTensor& sigma, const std::vector<SpectralFunction>& inputs);

enum class LocalizeMode { theta, psi };
// sigma(xi) Theta(xi / 2^j) or sigma(xi) Psi(xi / 2^j).
MultiplierTensor localize(const MultiplierTensor& sigma, const AnnularPartition& part, int j, LocalizeMode mode);

struct Ls2Options {
  double s = 0;
  std::vector<double> product_s;  // per-slot exponents; nonempty selects the product weight
};

struct Ls2Result {
  double value = 0;            // max over shells
  std::vector<int> shells;
  std::vector<double> per_shell;
};

// Samples per axis of the rescaled window in ls2_norm.
int ls2_samples(int total_dim) noexcept;
Ls2Result ls2_norm(const MultiplierTensor& sigma, const AnnularPartition& part, const Ls2Options& opt);
double ls2_norm(const MultiplierTensor& sigma, const AnnularPartition& part, double s);

struct MomentEntry {
  std::array<int, 2> alpha{0, 0};
  cplx value;
};

struct MomentReport {
  std::vector<MomentEntry> moments;
  double l1_norm = 0;
  double max_relative = 0;
  bool pass = true;
};

inline constexpr double kMomentTolerance = 1e-7;
// Margin tolerance applied before moment checks.
inline constexpr double kMomentMarginTolerance = 1e-9;

// Highest order forced by (n / p - n), floored.
int vanishing_order(int n, double p);
MomentReport moment_check(const GridFunction& g, double p, double tolerance = kMomentTolerance,
                          double margin_tolerance = kMomentMarginTolerance);

enum class VanishingProfile { gaussian_flat, compact };
// Cutoff C(s) with a zero of order 6 at s = 0 (gaussian_flat) or exactly 0
// on |s| <= delta (compact), equal to 1 for |s| >= 2 delta up to 1e-17.
double vanishing_cutoff(double radius_over_delta, VanishingProfile profile) noexcept;
MultiplierTensor make_vanishing_multiplier(const MultiplierTensor& sigma, double delta,
                                           VanishingProfile profile = VanishingProfile::gaussian_flat);

}  // namespace triharm

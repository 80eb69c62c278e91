#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "triharm/function_spaces.hpp"
#include "triharm/multiplier.hpp"
#include "triharm/regions.hpp"

namespace triharm {

struct ExperimentConfig {
  struct Grid {
    int dim = 1;
    int N = 8192;
    double L = 256;
  } grid;
  std::array<std::string, 3> p{"1", "4", "4"};  // rationals, "inf" allowed
  std::string s = "2";
  struct Symbol {
    std::string family = "one";
    bool vanishing = true;
    double delta = 0.25;
    std::string profile = "gaussian_flat";
  } symbol;
  struct Inputs {
    std::string family = "wave_packet";
    std::uint64_t seed = 1;
    int count = 16;
    std::vector<double> band;  // [lo, hi]; empty means [2^{j_min+1}, 2^{j_max-1}]
    int packets = 3;
    int zero_slot = -1;  // slot forced to zero, -1 for none
  } inputs;
  std::vector<std::string> dilations{"1/2", "1", "2"};
  std::string moment_p = "1/2";
  int threads = 0;
  std::string output;

  std::string to_json() const;  // pretty-printed; from_json(to_json()) == *this
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  bool operator==(const ExperimentConfig&) const;

  GridSpec grid_spec() const;
  std::array<double, 3> exponents() const;  // p_i as doubles (inf for "inf")
  double output_p() const;
  MultiplierTensor build_symbol() const;    // family, then the vanishing cutoff if enabled
  std::array<double, 2> band_for(const LPFamily& fam) const;
};

// Band-limited input with an exact spectral zero near the origin: real
// Gaussian wave packets dilated by t with the H^p normalization t^{n/p},
// then masked to the dilated band.
struct Surrogate {
  GridFunction f;
  SpectralFunction F;
};
Surrogate make_surrogate(const GridSpec& spec, std::array<double, 2> band, std::uint64_t seed, double dilation,
                         double n_over_p, int packets = 3);

struct RatioRow {
  double dilation = 1;
  std::uint64_t seed = 0;
  double numerator = 0;
  double ls2 = 0;
  std::array<double, 3> norms{0, 0, 0};
  double ratio = 0;
  std::string note;
  bool skipped() const noexcept { return !note.empty(); }
};

struct DilationSummary {
  double dilation = 1;
  double max = 0;
  double median = 0;
};

struct RatioReport {
  std::vector<RatioRow> rows;
  std::vector<DilationSummary> summary;
  double max = 0, median = 0;
  double dilation_variation = 1;  // largest per-dilation max over the smallest
  bool all_finite = true;
  void write_csv(std::ostream& os, bool timestamp = true) const;
};

RatioReport run_ratio_experiment(const ExperimentConfig& cfg);

struct MomentRow {
  std::uint64_t seed = 0;
  std::string piece;  // "T" or "T_j=<j>"
  int order = 0;
  double max_relative = 0;
  bool pass = true;
};

struct MomentExperimentReport {
  std::vector<MomentRow> rows;
  int order = 0;
  double worst = 0;
  bool all_pass = true;
  void write_csv(std::ostream& os, bool timestamp = true) const;
};

MomentExperimentReport run_moment_experiment(const ExperimentConfig& cfg);

std::string format_double(double v);  // %.17g

}  // namespace triharm

#pragma once

#include <string>
#include <vector>

#include "triharm/lp_frame.hpp"
#include "triharm/maximal.hpp"

namespace triharm {

enum class FrameKind { psi, theta };

// Cubes attached to frequency shell j have side 2^{-(j + offset)}. With
// offset 3 the sampling rate 8 * 2^j exceeds the combined band of the
// analysis and synthesis windows (6 * 2^j), so synthesis after analysis
// reproduces Lambda_j f and Gamma_j f exactly on the lattice.
inline constexpr int kCubeLevelOffset = 3;

struct CoeffLevel {
  int frequency_level = 0;
  int cube_level = 0;
  int cubes_per_axis = 0;
  std::vector<cplx> coeffs;  // axis 0 fastest, position m stored at m + cubes_per_axis / 2
};

class CoeffSeq {
 public:
  CoeffSeq() = default;
  explicit CoeffSeq(GridSpec spec) : spec_(spec) {}

  const GridSpec& spec() const noexcept { return spec_; }
  const std::vector<CoeffLevel>& levels() const noexcept { return levels_; }
  const CoeffLevel* find_level(int frequency_level) const noexcept;
  void add_level(CoeffLevel level);

  DyadicCube cube(const CoeffLevel& level, std::size_t index) const;
  cplx at(const DyadicCube& q) const;  // zero for cubes not present
  std::size_t entry_count() const noexcept;
  std::string to_json() const;

 private:
  GridSpec spec_;
  std::vector<CoeffLevel> levels_;
};

// Cube levels usable at shell j: side at least one sample, at most L/4.
bool frame_level_resolvable(const LPFamily& fam, int j) noexcept;

CoeffSeq analyze(const LPFamily& fam, const GridFunction& f, int j, FrameKind kind);
GridFunction synthesize(const LPFamily& fam, const CoeffSeq& c, int j, FrameKind kind);

// ||g^q(b)||_{L^p} with g^q(b)(x) = || |b_Q| |Q|^{-1/2} chi_Q(x) ||_{l^q}.
double fpq_norm(const CoeffSeq& c, double p, double q);

// ||{F_j}||_{L^p(l^q)} for a list of grid functions.
double lp_lq_norm(const std::vector<GridFunction>& pieces, double p, double q);

}  // namespace triharm

#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "triharm/grid.hpp"

namespace triharm {

// Half-open cube [2^-j m, 2^-j (m + 1)) per axis; the corner is the lower left one.
struct DyadicCube {
  int dim = 1;
  int level = 0;
  std::array<std::int64_t, 2> position{0, 0};

  double side() const noexcept { return std::ldexp(1.0, -level); }
  double volume() const noexcept { return std::pow(side(), dim); }
  double corner(int axis) const noexcept { return side() * double(position[std::size_t(axis)]); }
  DyadicCube shifted(std::span<const std::int64_t> m) const;

  auto operator<=>(const DyadicCube&) const = default;
};

// Cube geometry relative to a grid. All of these require grid alignment.
bool grid_aligned(const GridSpec& spec, const DyadicCube& q) noexcept;
bool inside_box(const GridSpec& spec, const DyadicCube& q) noexcept;
int samples_per_side(const GridSpec& spec, const DyadicCube& q);
std::array<int, 2> corner_index(const GridSpec& spec, const DyadicCube& q);
bool contains(const GridSpec& spec, const DyadicCube& q, std::size_t flat);
DyadicCube cube_at(const GridSpec& spec, int level, std::size_t flat);
GridFunction indicator(const GridSpec& spec, const DyadicCube& q);

// Dyadic maximal function (M(|f|^r))^{1/r}: sup over grid-aligned dyadic cubes
// inside the box (side h up to L/2) that contain the point.
GridFunction hl_max(const GridFunction& f, double r);

// sup over dyadic Q containing x of |Q|^{-1} times the integral of |f| over
// Q + side(Q) m. Shifts wrap around the box; a level is admissible when the
// shift moves the cube by less than the box, (|m_i| + 1) side <= L.
GridFunction shifted_dyadic_max(const GridFunction& f, std::span<const std::int64_t> m);

struct LogGrowthRow {
  std::vector<std::int64_t> shift;
  double shift_norm = 0;
  double p = 0;
  double ratio = 0;         // max over the corpus of ||M^m f||_p / ||f||_p
  double fitted_bound = 0;  // C (log(10 + |m|))^{n/p}
};

struct LogGrowthTable {
  std::vector<LogGrowthRow> rows;
  double fitted_constant = 0;
  void write_csv(std::ostream& os) const;
};

LogGrowthTable log_growth_check(double p, const std::vector<std::vector<std::int64_t>>& shifts,
                                const std::vector<GridFunction>& corpus);

// ||f(x - .) / <2^j .>^t||_{L^r} 2^{jn/r} / M_r f(x) at grid point x, with
// <y> = (1 + 4 pi^2 |y|^2)^{1/2} and periodic distance.
double maximal_bound_ratio(const GridFunction& f, const GridFunction& mr_f, std::size_t x, int j, double r,
                           double t);

}  // namespace triharm

#include "triharm/dyadic_frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace triharm {

const CoeffLevel* CoeffSeq::find_level(int frequency_level) const noexcept {
  for (const auto& l : levels_)
    if (l.frequency_level == frequency_level) return &l;
  return nullptr;
}

void CoeffSeq::add_level(CoeffLevel level) {
  require(find_level(level.frequency_level) == nullptr, "duplicate coefficient level");
  std::size_t expect = spec_.dim() == 1 ? std::size_t(level.cubes_per_axis)
                                        : std::size_t(level.cubes_per_axis) * std::size_t(level.cubes_per_axis);
  require(level.coeffs.size() == expect, "coefficient count does not match the level");
  for (const cplx& v : level.coeffs) require(std::isfinite(std::abs(v)), "non-finite coefficient");
  levels_.push_back(std::move(level));
}

DyadicCube CoeffSeq::cube(const CoeffLevel& level, std::size_t index) const {
  DyadicCube q;
  q.dim = spec_.dim();
  q.level = level.cube_level;
  const std::int64_t c = level.cubes_per_axis;
  q.position[0] = std::int64_t(index % std::size_t(c)) - c / 2;
  if (q.dim == 2) q.position[1] = std::int64_t(index / std::size_t(c)) - c / 2;
  return q;
}

cplx CoeffSeq::at(const DyadicCube& q) const {
  for (const auto& l : levels_) {
    if (l.cube_level != q.level) continue;
    const std::int64_t c = l.cubes_per_axis;
    std::int64_t i0 = q.position[0] + c / 2;
    std::int64_t i1 = q.dim == 2 ? q.position[1] + c / 2 : 0;
    if (i0 < 0 || i0 >= c || i1 < 0 || i1 >= c) return 0.0;
    return l.coeffs[std::size_t(i0 + i1 * c)];
  }
  return 0.0;
}

std::size_t CoeffSeq::entry_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.coeffs.size();
  return n;
}

std::string CoeffSeq::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& l : levels_) {
    for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
      DyadicCube q = cube(l, i);
      nlohmann::json m = nlohmann::json::array();
      for (int a = 0; a < q.dim; ++a) m.push_back(q.position[std::size_t(a)]);
      out.push_back({q.level, m, l.coeffs[i].real(), l.coeffs[i].imag()});
    }
  }
  return out.dump();
}

bool frame_level_resolvable(const LPFamily& fam, int j) noexcept {
  if (!fam.contains(j)) return false;
  const double side = std::ldexp(1.0, -(j + kCubeLevelOffset));
  return side >= fam.spec().spacing() && side <= 0.25 * fam.spec().length();
}

namespace {

void check_level(const LPFamily& fam, int j) {
  if (!frame_level_resolvable(fam, j))
    throw DomainError("shell " + std::to_string(j) + " has no resolvable cube level on this grid");
}

FilterKind analysis_filter(FrameKind k) { return k == FrameKind::psi ? FilterKind::tilde_lambda : FilterKind::tilde_gamma; }
FilterKind synthesis_filter(FrameKind k) { return k == FrameKind::psi ? FilterKind::lambda : FilterKind::gamma; }

}  // namespace

CoeffSeq analyze(const LPFamily& fam, const GridFunction& f, int j, FrameKind kind) {
  check_level(fam, j);
  const GridSpec& spec = f.spec();
  require(spec == fam.spec(), "function and family live on different grids");
  // psi~ and theta~ are real and even, so <f, psi~^Q> = |Q|^{1/2} (psi~_j * f)(x_Q).
  GridFunction g = fam.apply(analysis_filter(kind), f, j);
  CoeffLevel level;
  level.frequency_level = j;
  level.cube_level = j + kCubeLevelOffset;
  const double side = std::ldexp(1.0, -level.cube_level);
  level.cubes_per_axis = int(std::llround(spec.length() / side));
  const int stride = int(std::llround(side / spec.spacing()));
  const double root_vol = std::sqrt(std::pow(side, spec.dim()));
  const int c = level.cubes_per_axis;
  level.coeffs.assign(spec.dim() == 1 ? std::size_t(c) : std::size_t(c) * c, 0.0);
  for (std::size_t idx = 0; idx < level.coeffs.size(); ++idx) {
    int i0 = int(idx % std::size_t(c)) * stride;
    int i1 = spec.dim() == 2 ? int(idx / std::size_t(c)) * stride : 0;
    level.coeffs[idx] = root_vol * g[spec.flat(i0, i1)];
  }
  CoeffSeq out(spec);
  out.add_level(std::move(level));
  return out;
}

GridFunction synthesize(const LPFamily& fam, const CoeffSeq& c, int j, FrameKind kind) {
  check_level(fam, j);
  const GridSpec& spec = c.spec();
  require(spec == fam.spec(), "coefficients and family live on different grids");
  std::vector<cplx> impulses(spec.size(), 0.0);
  const CoeffLevel* level = c.find_level(j);
  if (level == nullptr) return GridFunction(spec, std::move(impulses));
  const double side = std::ldexp(1.0, -level->cube_level);
  const int stride = int(std::llround(side / spec.spacing()));
  const double root_vol = std::sqrt(std::pow(side, spec.dim()));
  const double inv_cell = 1.0 / spec.cell_volume();
  const int cpa = level->cubes_per_axis;
  for (std::size_t idx = 0; idx < level->coeffs.size(); ++idx) {
    int i0 = int(idx % std::size_t(cpa)) * stride;
    int i1 = spec.dim() == 2 ? int(idx / std::size_t(cpa)) * stride : 0;
    // A grid delta at x_Q convolved with psi_j gives psi_j(. - x_Q).
    impulses[spec.flat(i0, i1)] = level->coeffs[idx] * root_vol * inv_cell;
  }
  return fam.apply(synthesis_filter(kind), GridFunction(spec, std::move(impulses)), j);
}

double fpq_norm(const CoeffSeq& c, double p, double q) {
  require(p > 0 && q > 0, "sequence space exponents must be positive");
  const GridSpec& spec = c.spec();
  const bool qinf = std::isinf(q);
  std::vector<double> g(spec.size(), 0.0);
  for (const auto& level : c.levels()) {
    const double side = std::ldexp(1.0, -level.cube_level);
    const int stride = int(std::llround(side / spec.spacing()));
    const double inv_root_vol = 1.0 / std::sqrt(std::pow(side, spec.dim()));
    const int cpa = level.cubes_per_axis;
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto a = spec.axes(i);
      std::size_t idx = std::size_t(a[0] / stride) + (spec.dim() == 2 ? std::size_t(a[1] / stride) * cpa : 0);
      double v = std::abs(level.coeffs[idx]) * inv_root_vol;
      if (qinf)
        g[i] = std::max(g[i], v);
      else
        g[i] += std::pow(v, q);
    }
  }
  double acc = 0;
  for (double v : g) {
    double gv = qinf ? v : std::pow(v, 1.0 / q);
    acc += std::isinf(p) ? 0.0 : std::pow(gv, p);
  }
  if (std::isinf(p)) return *std::max_element(g.begin(), g.end());
  return std::pow(acc * spec.cell_volume(), 1.0 / p);
}

double lp_lq_norm(const std::vector<GridFunction>& pieces, double p, double q) {
  require(p > 0 && q > 0, "exponents must be positive");
  if (pieces.empty()) return 0.0;
  const GridSpec& spec = pieces.front().spec();
  const bool qinf = std::isinf(q);
  std::vector<double> g(spec.size(), 0.0);
  for (const auto& f : pieces) {
    require(f.spec() == spec, "pieces live on different grids");
    for (std::size_t i = 0; i < g.size(); ++i) {
      double v = std::abs(f[i]);
      if (qinf)
        g[i] = std::max(g[i], v);
      else
        g[i] += std::pow(v, q);
    }
  }
  if (!qinf)
    for (double& v : g) v = std::pow(v, 1.0 / q);
  std::vector<cplx> as_grid(g.begin(), g.end());
  return lp_norm(GridFunction(spec, std::move(as_grid)), p);
}

}  // namespace triharm

#include "triharm/maximal.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace triharm {

DyadicCube DyadicCube::shifted(std::span<const std::int64_t> m) const {
  require(int(m.size()) == dim, "shift length must equal the dimension");
  DyadicCube q = *this;
  for (int a = 0; a < dim; ++a) q.position[std::size_t(a)] += m[std::size_t(a)];
  return q;
}

bool grid_aligned(const GridSpec& spec, const DyadicCube& q) noexcept {
  double ratio = q.side() / spec.spacing();
  return q.dim == spec.dim() && ratio >= 1.0 && std::floor(ratio) == ratio;
}

bool inside_box(const GridSpec& spec, const DyadicCube& q) noexcept {
  const double half = 0.5 * spec.length();
  for (int a = 0; a < q.dim; ++a) {
    double lo = q.corner(a);
    if (lo < -half || lo + q.side() > half) return false;
  }
  return true;
}

int samples_per_side(const GridSpec& spec, const DyadicCube& q) {
  require(grid_aligned(spec, q), "cube is not aligned with the grid");
  return int(q.side() / spec.spacing());
}

std::array<int, 2> corner_index(const GridSpec& spec, const DyadicCube& q) {
  require(grid_aligned(spec, q), "cube is not aligned with the grid");
  std::array<int, 2> idx{0, 0};
  for (int a = 0; a < q.dim; ++a)
    idx[std::size_t(a)] = int(std::llround((q.corner(a) + 0.5 * spec.length()) / spec.spacing()));
  return idx;
}

bool contains(const GridSpec& spec, const DyadicCube& q, std::size_t flat) {
  auto c = corner_index(spec, q);
  int s = samples_per_side(spec, q);
  auto a = spec.axes(flat);
  for (int d = 0; d < q.dim; ++d) {
    int off = a[std::size_t(d)] - c[std::size_t(d)];
    if (off < 0 || off >= s) return false;
  }
  return true;
}

DyadicCube cube_at(const GridSpec& spec, int level, std::size_t flat) {
  DyadicCube q;
  q.dim = spec.dim();
  q.level = level;
  require(grid_aligned(spec, q), "level is finer than the grid");
  int s = samples_per_side(spec, q);
  auto a = spec.axes(flat);
  const std::int64_t offset = std::int64_t(spec.samples() / 2) / s;
  for (int d = 0; d < q.dim; ++d)
    q.position[std::size_t(d)] = std::int64_t(a[std::size_t(d)] / s) - offset;
  return q;
}

GridFunction indicator(const GridSpec& spec, const DyadicCube& q) {
  std::vector<cplx> v(spec.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (contains(spec, q, i)) v[i] = 1.0;
  return GridFunction(spec, std::move(v));
}

namespace {

// Means of g over the dyadic blocks of side 2^k samples, k = 0..K-1.
std::vector<std::vector<double>> block_means(const GridSpec& spec, const std::vector<double>& g) {
  const int n = spec.samples();
  const int dim = spec.dim();
  std::vector<std::vector<double>> levels;
  levels.push_back(g);
  for (int nb = n / 2; nb >= 2; nb /= 2) {
    const auto& prev = levels.back();
    const int pn = nb * 2;
    std::vector<double> cur(dim == 1 ? std::size_t(nb) : std::size_t(nb) * nb);
    if (dim == 1) {
      for (int b = 0; b < nb; ++b) cur[std::size_t(b)] = 0.5 * (prev[std::size_t(2 * b)] + prev[std::size_t(2 * b + 1)]);
    } else {
      for (int b1 = 0; b1 < nb; ++b1)
        for (int b0 = 0; b0 < nb; ++b0) {
          auto at = [&](int x, int y) { return prev[std::size_t(x) + std::size_t(y) * pn]; };
          cur[std::size_t(b0) + std::size_t(b1) * nb] =
              0.25 * (at(2 * b0, 2 * b1) + at(2 * b0 + 1, 2 * b1) + at(2 * b0, 2 * b1 + 1) + at(2 * b0 + 1, 2 * b1 + 1));
        }
    }
    levels.push_back(std::move(cur));
  }
  return levels;
}

}  // namespace

GridFunction hl_max(const GridFunction& f, double r) {
  require(r > 0, "maximal exponent r must be positive");
  const GridSpec& spec = f.spec();
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(std::abs(f[i]), r);
  auto levels = block_means(spec, g);
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto a = spec.axes(i);
    double best = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const int nb = spec.samples() >> k;
      std::size_t b = std::size_t(a[0] >> k) + (spec.dim() == 2 ? std::size_t(a[1] >> k) * nb : 0);
      best = std::max(best, levels[k][b]);
    }
    out[i] = std::pow(best, 1.0 / r);
  }
  return GridFunction(spec, std::move(out));
}

GridFunction shifted_dyadic_max(const GridFunction& f, std::span<const std::int64_t> m) {
  const GridSpec& spec = f.spec();
  require(int(m.size()) == spec.dim(), "shift length must equal the dimension");
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::abs(f[i]);
  auto levels = block_means(spec, g);
  std::vector<std::size_t> admissible;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    bool ok = true;
    for (auto mi : m) ok = ok && (std::abs(mi) + 1) * (std::int64_t(1) << k) <= spec.samples();
    if (ok) admissible.push_back(k);
  }
  require(!admissible.empty(), "no admissible level for the requested shift");
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto a = spec.axes(i);
    double best = 0;
    for (std::size_t k : admissible) {
      const std::int64_t nb = spec.samples() >> k;
      auto wrap = [nb](std::int64_t v) { return ((v % nb) + nb) % nb; };
      std::int64_t b0 = wrap((a[0] >> k) + m[0]);
      std::int64_t b1 = spec.dim() == 2 ? wrap((a[1] >> k) + m[1]) : 0;
      best = std::max(best, levels[k][std::size_t(b0 + b1 * nb)]);
    }
    out[i] = best;
  }
  return GridFunction(spec, std::move(out));
}

LogGrowthTable log_growth_check(double p, const std::vector<std::vector<std::int64_t>>& shifts,
                                const std::vector<GridFunction>& corpus) {
  require(p > 1, "log growth check needs p > 1");
  LogGrowthTable table;
  for (const auto& m : shifts) {
    LogGrowthRow row;
    row.shift = m;
    double n2 = 0;
    for (auto v : m) n2 += double(v) * double(v);
    row.shift_norm = std::sqrt(n2);
    row.p = p;
    for (const auto& f : corpus) {
      double den = lp_norm(f, p);
      if (den == 0) continue;
      row.ratio = std::max(row.ratio, lp_norm(shifted_dyadic_max(f, m), p) / den);
    }
    table.rows.push_back(row);
  }
  for (const auto& row : table.rows) {
    const int n = corpus.empty() ? 1 : corpus.front().spec().dim();
    double growth = std::pow(std::log(10.0 + row.shift_norm), n / p);
    table.fitted_constant = std::max(table.fitted_constant, row.ratio / growth);
  }
  for (auto& row : table.rows) {
    const int n = corpus.empty() ? 1 : corpus.front().spec().dim();
    row.fitted_bound = table.fitted_constant * std::pow(std::log(10.0 + row.shift_norm), n / p);
  }
  return table;
}

void LogGrowthTable::write_csv(std::ostream& os) const {
  os << "# schema=1\n";
  os << "shift_norm,p,ratio,fitted_bound\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.shift_norm, r.p, r.ratio, r.fitted_bound);
    os << buf;
  }
}

double maximal_bound_ratio(const GridFunction& f, const GridFunction& mr_f, std::size_t x, int j, double r,
                           double t) {
  const GridSpec& spec = f.spec();
  const int n = spec.samples();
  const double h = spec.spacing();
  const double scale = std::ldexp(1.0, j);
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  auto ax = spec.axes(x);
  double acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto a = spec.axes(i);
    double d2 = 0;
    for (int d = 0; d < spec.dim(); ++d) {
      int off = ((ax[std::size_t(d)] - a[std::size_t(d)]) % n + n) % n;
      if (off > n / 2) off -= n;
      double y = off * h * scale;
      d2 += y * y;
    }
    double weight = std::pow(1.0 + four_pi2 * d2, -0.5 * t);
    acc += std::pow(std::abs(f[i]) * weight, r);
  }
  double lhs = std::pow(acc * spec.cell_volume(), 1.0 / r);
  double denom = std::pow(scale, -double(spec.dim()) / r) * std::abs(mr_f[x]);
  return denom == 0 ? 0.0 : lhs / denom;
}

}  // namespace triharm

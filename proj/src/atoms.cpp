#include "triharm/atoms.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "json.hpp"

namespace triharm {

namespace {

std::vector<std::array<int, 2>> multi_indices(int dim, int order) {
  std::vector<std::array<int, 2>> out;
  for (int total = 0; total <= order; ++total) {
    if (dim == 1) {
      out.push_back({total, 0});
    } else {
      for (int a = total; a >= 0; --a) out.push_back({a, total - a});
    }
  }
  return out;
}

double smooth_window(double v) noexcept { return std::abs(v) < 1.0 ? std::exp(-1.0 / (1.0 - v * v)) : 0.0; }

// Random trigonometric polynomial of degree 3 on [0, 1].
struct RandomTrig {
  double a[4], b[4];
  explicit RandomTrig(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int k = 0; k < 4; ++k) {
      a[k] = nd(rng);
      b[k] = nd(rng);
    }
  }
  double operator()(double u) const noexcept {
    double acc = 0;
    for (int k = 0; k < 4; ++k) {
      double w = 2.0 * std::numbers::pi * k * u;
      acc += a[k] * std::cos(w) + b[k] * std::sin(w);
    }
    return acc;
  }
};

struct CubeSamples {
  std::vector<std::size_t> flat;            // grid indices inside Q
  std::vector<std::array<double, 2>> local;  // (x - x_Q) / side in [0, 1)
};

CubeSamples cube_samples(const GridSpec& spec, const DyadicCube& q) {
  CubeSamples cs;
  auto c = corner_index(spec, q);
  int s = samples_per_side(spec, q);
  int s1 = spec.dim() == 2 ? s : 1;
  for (int i1 = 0; i1 < s1; ++i1)
    for (int i0 = 0; i0 < s; ++i0) {
      cs.flat.push_back(spec.flat(c[0] + i0, spec.dim() == 2 ? c[1] + i1 : 0));
      cs.local.push_back({double(i0) / s, double(i1) / s});
    }
  return cs;
}

// f - P f with P the orthogonal projection onto polynomials of degree <= M
// in the discrete L^2 inner product over the samples of Q.
std::vector<double> remove_moments(const CubeSamples& cs, int dim, int order, const std::vector<double>& f) {
  const auto idx = multi_indices(dim, order);
  std::vector<std::vector<double>> basis;
  for (const auto& g : idx) {
    std::vector<double> v(cs.flat.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double x0 = 2.0 * cs.local[i][0] - 1.0, x1 = 2.0 * cs.local[i][1] - 1.0;
      v[i] = std::pow(x0, g[0]) * (dim == 2 ? std::pow(x1, g[1]) : 1.0);
    }
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : basis) {
        double dot = 0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * e[i];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * e[i];
      }
    double nrm = 0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
    basis.push_back(std::move(v));
  }
  std::vector<double> a(f);
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : basis) {
      double dot = 0;
      for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * e[i];
      for (std::size_t i = 0; i < a.size(); ++i) a[i] -= dot * e[i];
    }
  return a;
}

double periodic_distance(const GridSpec& spec, std::span<const double> x, std::span<const double> y) {
  double d2 = 0;
  const double L = spec.length();
  for (int a = 0; a < spec.dim(); ++a) {
    double d = std::fmod(x[std::size_t(a)] - y[std::size_t(a)], L);
    if (d < -0.5 * L) d += L;
    if (d >= 0.5 * L) d -= L;
    d2 += d * d;
  }
  return std::sqrt(d2);
}

}  // namespace

int minimal_moment_order(int n, double p) noexcept {
  double v = n / p - n;
  return v > 0 ? int(std::floor(v + 1e-12)) : 0;
}

int default_moment_order(int n, double p) noexcept { return minimal_moment_order(n, p) + 2; }

double Atom::dilate_side(int k) const noexcept { return std::pow(10.0 * std::sqrt(double(cube.dim)), k) * cube.side(); }

bool Atom::in_dilate(int k, std::span<const double> x) const noexcept {
  const double half = 0.5 * dilate_side(k);
  for (int a = 0; a < cube.dim; ++a) {
    double centre = cube.corner(a) + 0.5 * cube.side();
    if (std::abs(x[std::size_t(a)] - centre) > half) return false;
  }
  return true;
}

std::string Atom::sidecar_json(const AtomCertificate& cert) const {
  nlohmann::json j;
  j["cube"] = {{"dim", cube.dim}, {"level", cube.level}, {"position", std::vector<std::int64_t>(cube.position.begin(), cube.position.begin() + cube.dim)}};
  j["p"] = p;
  j["moment_order"] = moment_order;
  j["seed"] = seed;
  j["certificate"] = {{"support", cert.support_ok},     {"size", cert.size_ok},
                      {"moments", cert.moments_ok},     {"order", cert.order_ok},
                      {"sup_norm", cert.sup_norm},      {"size_bound", cert.size_bound},
                      {"max_moment_residual", cert.max_moment_residual}, {"passed", cert.passed()}};
  return j.dump(2);
}

Atom make_atom(const GridSpec& spec, const DyadicCube& q, double p, int moment_order, std::uint64_t seed) {
  require(q.dim == spec.dim(), "cube dimension differs from the grid");
  require(grid_aligned(spec, q) && inside_box(spec, q), "cube is not a grid-aligned cube inside the box");
  require(samples_per_side(spec, q) >= 16, "cube resolves fewer than 16 samples per axis");
  require(p > 0 && p <= 1, "atom exponent p must lie in (0, 1]");
  require(moment_order >= 0 && moment_order <= 6, "moment order must lie in [0, 6]");
  require(moment_order >= minimal_moment_order(spec.dim(), p), "moment order below [n/p - n]_+");
  const CubeSamples cs = cube_samples(spec, q);
  const double target = 0.5 * std::pow(q.volume(), -1.0 / p);
  for (int attempt = 0; attempt <= 8; ++attempt) {
    std::mt19937_64 rng(seed + std::uint64_t(attempt));
    RandomTrig g0(rng), g1(rng);
    std::vector<double> f(cs.flat.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      double u0 = cs.local[i][0], u1 = cs.local[i][1];
      // Window supported in the inner 90% of Q.
      double w = smooth_window((u0 - 0.5) / 0.45);
      double g = g0(u0);
      if (spec.dim() == 2) {
        w *= smooth_window((u1 - 0.5) / 0.45);
        g = g0(u0) * g1(u1) + g1(u0) * g0(u1);
      }
      f[i] = w * g;
    }
    double fmax = 0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    std::vector<double> a = remove_moments(cs, spec.dim(), moment_order, f);
    double amax = 0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    if (fmax == 0 || amax < 1e-3 * fmax) continue;
    std::vector<cplx> values(spec.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) values[cs.flat[i]] = a[i] * (target / amax);
    Atom atom{GridFunction(spec, std::move(values)), q, p, moment_order, seed + std::uint64_t(attempt)};
    return atom;
  }
  throw DomainError("degenerate atom draw: projection annihilated 9 consecutive seeds");
}

AtomCertificate certify(const Atom& a) {
  AtomCertificate c;
  const GridSpec& spec = a.f.spec();
  c.support_ok = true;
  for (std::size_t i = 0; i < a.f.size(); ++i)
    if (!contains(spec, a.cube, i) && a.f[i] != cplx{}) c.support_ok = false;
  c.sup_norm = max_abs(a.f.values());
  c.size_bound = std::pow(a.cube.volume(), -1.0 / a.p);
  c.size_ok = c.sup_norm <= c.size_bound;
  c.order_ok = a.moment_order >= minimal_moment_order(spec.dim(), a.p);
  c.moments_ok = true;
  for (const auto& g : multi_indices(spec.dim(), a.moment_order)) {
    std::span<const int> alpha(g.data(), std::size_t(spec.dim()));
    cplx m = moment(a.f, alpha);
    double scale = 0;
    for (std::size_t i = 0; i < a.f.size(); ++i) {
      auto ax = spec.axes(i);
      double w = std::abs(std::pow(spec.coord(ax[0]), g[0]));
      if (spec.dim() == 2) w *= std::abs(std::pow(spec.coord(ax[1]), g[1]));
      scale += w * std::abs(a.f[i]);
    }
    scale *= spec.cell_volume();
    double rel = scale > 0 ? std::abs(m) / scale : 0.0;
    c.max_moment_residual = std::max(c.max_moment_residual, rel);
    if (rel > kAtomMomentTolerance) c.moments_ok = false;
  }
  return c;
}

DecayReport decay_profile_check(const LPFamily& fam, const Atom& a, double decay_exponent) {
  require(decay_exponent >= 2 && decay_exponent <= 8, "decay exponent L0 must lie in [2, 8]");
  require(certify(a).passed(), "decay check needs a certified atom");
  const GridSpec& spec = a.f.spec();
  const int n = spec.dim();
  const double side = a.cube.side();
  const double size = std::pow(side, -n / a.p);
  const double floor = kDecayNoiseFloor * max_abs(a.f.values());
  const std::array<double, 2> corner{a.cube.corner(0), n == 2 ? a.cube.corner(1) : 0.0};
  // Position dependent factor of the bound, per grid point.
  std::vector<double> dist(spec.size());
  std::vector<char> inside(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    auto ax = spec.axes(i);
    double x[2] = {spec.coord(ax[0]), spec.coord(ax[1])};
    inside[i] = a.in_dilate(1, std::span<const double>(x, std::size_t(n)));
    dist[i] = periodic_distance(spec, std::span<const double>(x, std::size_t(n)), corner);
  }
  SpectralFunction A = forward_transform(a.f);
  DecayReport rep;
  bool first = true;
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    DecayRow row;
    row.j = j;
    row.scale = std::ldexp(side, j);
    const double decay = std::min(1.0, std::pow(row.scale, a.moment_order + n + 1));
    const double two_j = std::ldexp(1.0, j);
    auto pointwise = [&](const GridFunction& g) {
      double worst = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        double v = std::abs(g[i]);
        if (v <= floor) continue;
        double pos = inside[i] ? 1.0 : std::pow(1.0 + std::pow(two_j * dist[i], 2), -0.5 * decay_exponent);
        worst = std::max(worst, v / (size * decay * pos));
      }
      return worst;
    };
    GridFunction lam = inverse_transform(fam.apply_spectral(FilterKind::lambda, A, j));
    GridFunction gam = inverse_transform(fam.apply_spectral(FilterKind::gamma, A, j));
    row.lambda_ratio = pointwise(lam);
    row.gamma_ratio = pointwise(gam);
    const double rs[3] = {1.0, 2.0, std::numeric_limits<double>::infinity()};
    for (int k = 0; k < 3; ++k) {
      double inv_r = std::isinf(rs[k]) ? 0.0 : 1.0 / rs[k];
      double bound = std::pow(side, -n / a.p + n * inv_r) *
                     std::min(1.0, std::pow(row.scale, a.moment_order + n - n * inv_r + 1));
      row.lr_ratio[k] = lp_norm(lam, rs[k]) / bound;
    }
    if (row.lambda_ratio > 0) {
      rep.lambda_max = first ? row.lambda_ratio : std::max(rep.lambda_max, row.lambda_ratio);
      rep.lambda_min = first ? row.lambda_ratio : std::min(rep.lambda_min, row.lambda_ratio);
    }
    if (row.gamma_ratio > 0) {
      rep.gamma_max = first ? row.gamma_ratio : std::max(rep.gamma_max, row.gamma_ratio);
      rep.gamma_min = first ? row.gamma_ratio : std::min(rep.gamma_min, row.gamma_ratio);
    }
    first = first && !(row.lambda_ratio > 0 && row.gamma_ratio > 0);
    rep.rows.push_back(row);
  }
  return rep;
}

void DecayReport::write_csv(std::ostream& os) const {
  os << "# schema=1\n";
  os << "j,scale,lambda_ratio,gamma_ratio,l1_ratio,l2_ratio,linf_ratio\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.j, r.scale, r.lambda_ratio,
                  r.gamma_ratio, r.lr_ratio[0], r.lr_ratio[1], r.lr_ratio[2]);
    os << buf;
  }
}

CancellationReport moment_cancellation_check(const HardyProfile& profile, const Atom& a, double epsilon) {
  require(epsilon >= 0, "epsilon must be nonnegative");
  const GridSpec& spec = a.f.spec();
  const int n = spec.dim();
  const int order = a.moment_order;
  const std::array<double, 2> corner{a.cube.corner(0), n == 2 ? a.cube.corner(1) : 0.0};
  double weighted = 0;
  for (std::size_t i = 0; i < a.f.size(); ++i) {
    if (a.f[i] == cplx{}) continue;
    auto ax = spec.axes(i);
    double x[2] = {spec.coord(ax[0]), spec.coord(ax[1])};
    double d = periodic_distance(spec, std::span<const double>(x, std::size_t(n)), corner);
    weighted += std::pow(d, order + epsilon) * std::abs(a.f[i]);
  }
  weighted *= spec.cell_volume();
  CancellationReport rep;
  rep.epsilon = epsilon;
  for (int l = profile.l_min(); l <= profile.l_max(); ++l) {
    double lhs = max_abs(profile.smooth(a.f, l).values());
    double rhs = std::pow(2.0, l * (order + n + epsilon)) * weighted;
    CancellationRow row{l, rhs > 0 ? lhs / rhs : 0.0};
    rep.fitted_constant = std::max(rep.fitted_constant, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace triharm

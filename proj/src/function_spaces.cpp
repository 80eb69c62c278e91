#include "triharm/function_spaces.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

namespace triharm {

double HardyProfile::bump(double r) noexcept {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

HardyProfile HardyProfile::build(const GridSpec& spec) {
  HardyProfile prof;
  prof.spec_ = spec;
  // phi_l needs at least 8 samples across its support and a support radius
  // no larger than L/4.
  const int k = spec.log2_samples();
  const int kl = int(std::llround(std::log2(spec.length())));
  prof.l_max_ = k - kl - 2;
  prof.l_min_ = 2 - kl;
  require(prof.l_max_ >= prof.l_min_, "unresolvable Hardy profile on this grid");
  for (int l = prof.l_min_; l <= prof.l_max_; ++l) prof.spectra_.push_back(forward_transform(prof.phi(l)));
  return prof;
}

GridFunction HardyProfile::phi(int l) const {
  require(l >= l_min_ && l <= l_max_, "Hardy profile dilation outside the resolvable range");
  const double scale = std::ldexp(1.0, l);
  GridFunction raw = sample_function(spec_, [scale](std::span<const double> x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    return cplx(bump(scale * std::sqrt(r2)), 0.0);
  });
  double mass = 0;
  for (const cplx& v : raw.values()) mass += v.real();
  mass *= spec_.cell_volume();
  return raw.scaled(1.0 / mass);
}

const SpectralFunction& HardyProfile::phi_hat(int l) const {
  require(l >= l_min_ && l <= l_max_, "Hardy profile dilation outside the resolvable range");
  return spectra_[std::size_t(l - l_min_)];
}

GridFunction HardyProfile::smooth(const GridFunction& f, int l) const {
  SpectralFunction F = forward_transform(f);
  const SpectralFunction& P = phi_hat(l);
  std::vector<cplx> v(F.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= P[i];
  return inverse_transform(SpectralFunction(spec_, std::move(v)));
}

const char* to_string(HardyMethod m) noexcept {
  switch (m) {
    case HardyMethod::maximal: return "maximal";
    case HardyMethod::square: return "square";
    case HardyMethod::gamma_sup: return "gamma_sup";
  }
  return "?";
}

GridFunction hardy_maximal_function(const GridFunction& f, const HardyProfile& profile) {
  require(f.spec() == profile.spec(), "function and profile live on different grids");
  SpectralFunction F = forward_transform(f);
  std::vector<double> best(f.size(), 0.0);
  for (int l = profile.l_min(); l <= profile.l_max(); ++l) {
    const SpectralFunction& P = profile.phi_hat(l);
    std::vector<cplx> v(F.values());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= P[i];
    GridFunction g = inverse_transform(SpectralFunction(f.spec(), std::move(v)));
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], std::abs(g[i]));
  }
  return GridFunction(f.spec(), std::vector<cplx>(best.begin(), best.end()));
}

double hardy_norm(const GridFunction& f, double p, HardyMethod method, const LPFamily& fam,
                  const HardyProfile& profile, double margin_tolerance) {
  require(p > 0, "Hardy exponent must be positive");
  require(!(method == HardyMethod::square && std::isinf(p)), "square function norm needs finite p");
  require(f.spec() == fam.spec() && f.spec() == profile.spec(), "function, family and profile grids differ");
  if (f.is_zero()) return 0.0;
  require_margin_decay(f, margin_tolerance);
  switch (method) {
    case HardyMethod::maximal: return lp_norm(hardy_maximal_function(f, profile), p);
    case HardyMethod::square:
    case HardyMethod::gamma_sup: {
      SpectralFunction F = forward_transform(f);
      std::vector<double> acc(f.size(), 0.0);
      const FilterKind kind = method == HardyMethod::square ? FilterKind::lambda : FilterKind::gamma;
      for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
        GridFunction g = inverse_transform(fam.apply_spectral(kind, F, j));
        for (std::size_t i = 0; i < acc.size(); ++i) {
          double v = std::abs(g[i]);
          if (method == HardyMethod::square)
            acc[i] += v * v;
          else
            acc[i] = std::max(acc[i], v);
        }
      }
      if (method == HardyMethod::square)
        for (double& v : acc) v = std::sqrt(v);
      return lp_norm(GridFunction(f.spec(), std::vector<cplx>(acc.begin(), acc.end())), p);
    }
  }
  return 0.0;
}

double HardyEquivalenceReport::max_spread() const {
  double m = 0;
  for (double s : spread) m = std::max(m, s);
  return m;
}

void HardyEquivalenceReport::write_csv(std::ostream& os) const {
  os << "# schema=1\n";
  os << "function_id,p,method,value\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%s,%.17g\n", r.function_id, r.p, to_string(r.method), r.value);
    os << buf;
  }
}

HardyEquivalenceReport hardy_equivalence_report(const std::vector<GridFunction>& corpus, const std::vector<double>& ps,
                                                const LPFamily& fam, const HardyProfile& profile) {
  HardyEquivalenceReport rep;
  rep.ps = ps;
  const HardyMethod methods[] = {HardyMethod::maximal, HardyMethod::square, HardyMethod::gamma_sup};
  for (double p : ps) {
    double spread = 1.0;
    for (std::size_t id = 0; id < corpus.size(); ++id) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0;
      for (HardyMethod m : methods) {
        double v = hardy_norm(corpus[id], p, m, fam, profile);
        rep.rows.push_back({id, p, m, v});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > 0) spread = std::max(spread, hi / lo);
    }
    rep.spread.push_back(spread);
  }
  return rep;
}

}  // namespace triharm

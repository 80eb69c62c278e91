#include "triharm/multiplier.hpp"

#include <algorithm>
#include <numbers>

#include "fft.hpp"

namespace triharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(long long k, int n) { return int(((k % n) + n) % n); }

// Nonzero entries of a spectrum with their signed lattice indices.
struct SparseSpectrum {
  std::vector<std::array<int, 2>> index;
  std::vector<std::array<double, 2>> xi;
  std::vector<cplx> value;
};

SparseSpectrum sparse(const SpectralFunction& F) {
  const GridSpec& s = F.spec();
  SparseSpectrum out;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i] == cplx{}) continue;
    auto a = s.axes(i);
    out.index.push_back({s.signed_index(a[0]), s.dim() == 2 ? s.signed_index(a[1]) : 0});
    out.xi.push_back({s.frequency(a[0]), s.dim() == 2 ? s.frequency(a[1]) : 0.0});
    out.value.push_back(F[i]);
  }
  return out;
}

std::size_t fine_flat(const GridSpec& fine, long long k0, long long k1) {
  const int M = fine.samples();
  return fine.flat(wrap(k0, M), fine.dim() == 2 ? wrap(k1, M) : 0);
}

// Spectrum on the input lattice copied onto the finer lattice of the same box.
std::vector<cplx> zero_pad(const SpectralFunction& F, const GridSpec& fine) {
  const GridSpec& s = F.spec();
  std::vector<cplx> out(fine.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    auto a = s.axes(i);
    out[fine_flat(fine, s.signed_index(a[0]), s.dim() == 2 ? s.signed_index(a[1]) : 0)] = F[i];
  }
  return out;
}

void check_inputs(const MultiplierTensor& sigma, std::size_t count, const GridSpec& spec) {
  require(int(count) == sigma.arity(), "input count differs from the symbol arity");
  require(spec == sigma.spec(), "inputs and symbol live on different grids");
}

// Frequency vector of an extended-lattice flat index.
std::array<double, 2> fine_frequency(const GridSpec& fine, std::size_t flat) {
  auto a = fine.axes(flat);
  return {fine.frequency(a[0]), fine.dim() == 2 ? fine.frequency(a[1]) : 0.0};
}

// Deficit e^{-a} (1 + a + a^2/2) of the flat Gaussian cutoff.
double flat_deficit(double a) { return std::exp(-a) * (1.0 + a + 0.5 * a * a); }

double flat_lambda() {
  static const double lambda = [] {
    // Smallest lambda with deficit at r = 2 below 1e-17, by bisection.
    double lo = 1.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (flat_deficit(4.0 * mid) <= 1e-17 ? hi : lo) = mid;
    }
    return hi;
  }();
  return lambda;
}

}  // namespace

GridSpec extended_spec(const GridSpec& spec, int m) {
  int M = spec.samples();
  while (M < m * spec.samples()) M *= 2;
  return GridSpec::make(spec.dim(), M, spec.length());
}

SpectralFunction ExtendedSpectrum::fold() const {
  std::vector<cplx> out(spec.size());
  const int N = spec.samples();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == cplx{}) continue;
    auto a = fine.axes(i);
    out[spec.flat(wrap(fine.signed_index(a[0]), N), spec.dim() == 2 ? wrap(fine.signed_index(a[1]), N) : 0)] +=
        values[i];
  }
  return SpectralFunction(spec, std::move(out));
}

double ExtendedSpectrum::max_outside(double lo, double hi) const {
  double worst = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double r = fine.frequency_radius(i);
    if (r < lo || r > hi) worst = std::max(worst, std::abs(values[i]));
  }
  return worst;
}

ExtendedSpectrum output_spectrum(const MultiplierTensor& sigma, const std::vector<SpectralFunction>& inputs) {
  require(!inputs.empty(), "no inputs");
  const GridSpec& spec = inputs.front().spec();
  for (const auto& F : inputs) require(F.spec() == spec, "inputs live on different grids");
  check_inputs(sigma, inputs.size(), spec);
  const int m = sigma.arity(), dim = spec.dim();
  ExtendedSpectrum out{spec, m, extended_spec(spec, m), {}};
  out.values.assign(out.fine.size(), 0.0);
  std::vector<SparseSpectrum> sp;
  for (const auto& F : inputs) sp.push_back(sparse(F));
  double tuples = 1;
  for (const auto& s : sp) {
    if (s.value.empty()) return out;
    tuples *= double(s.value.size());
  }
  if (tuples > kAccumulationBudget)
    throw DomainError("spectral accumulation over " + std::to_string(tuples) +
                      " entry tuples exceeds the budget; use a separable symbol or a smaller band");
  const double weight = std::pow(spec.length(), -dim * (m - 1));
  std::array<double, 6> xi{};
  std::span<const double> arg(xi.data(), std::size_t(m * dim));
  // Iterate over tuples of nonzero entries; slot 0 varies fastest.
  std::array<std::size_t, 3> pos{0, 0, 0};
  while (true) {
    cplx prod = weight;
    long long k0 = 0, k1 = 0;
    for (int i = 0; i < m; ++i) {
      const auto& s = sp[std::size_t(i)];
      std::size_t e = pos[std::size_t(i)];
      prod *= s.value[e];
      k0 += s.index[e][0];
      k1 += s.index[e][1];
      for (int c = 0; c < dim; ++c) xi[std::size_t(i * dim + c)] = s.xi[e][std::size_t(c)];
    }
    out.values[fine_flat(out.fine, k0, k1)] += sigma(arg) * prod;
    int slot = 0;
    while (slot < m && ++pos[std::size_t(slot)] == sp[std::size_t(slot)].value.size()) pos[std::size_t(slot++)] = 0;
    if (slot == m) break;
  }
  return out;
}

ExtendedSpectrum output_spectrum(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs) {
  std::vector<SpectralFunction> spectra;
  for (const auto& f : inputs) spectra.push_back(forward_transform(f));
  return output_spectrum(sigma, spectra);
}

GridFunction apply_direct(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs) {
  require(!inputs.empty(), "no inputs");
  const GridSpec& spec = inputs.front().spec();
  check_inputs(sigma, inputs.size(), spec);
  if (!within_direct_budget(sigma.arity(), spec))
    throw DomainError("direct evaluation exceeds the size budget m*dim*log2(N) <= " + std::to_string(kDirectBudget) +
                      "; use the separable or spectral path");
  for (const auto& f : inputs) require(f.spec() == spec, "inputs live on different grids");
  const int m = sigma.arity(), dim = spec.dim(), N = spec.samples();
  const std::size_t S = spec.size();
  std::vector<SpectralFunction> F;
  for (const auto& f : inputs) F.push_back(forward_transform(f));
  const GridSpec fine = extended_spec(spec, m);
  std::vector<cplx> G(fine.size(), 0.0);
  const double weight = std::pow(spec.length(), -dim * (m - 1));
  // Full lattice sum, zeros included.
  std::array<std::size_t, 3> slot{0, 0, 0};
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) total *= S;
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rest = t;
    cplx prod = weight;
    long long k0 = 0, k1 = 0;
    for (int i = 0; i < m; ++i) {
      slot[std::size_t(i)] = rest % S;
      rest /= S;
      prod *= F[std::size_t(i)][slot[std::size_t(i)]];
      auto a = spec.axes(slot[std::size_t(i)]);
      k0 += spec.signed_index(a[0]);
      k1 += dim == 2 ? spec.signed_index(a[1]) : 0;
    }
    G[fine_flat(fine, k0, k1)] += sigma.at(std::span<const std::size_t>(slot.data(), std::size_t(m))) * prod;
  }
  // Direct synthesis at every grid point, one axis at a time. With x = -L/2 + i h
  // the phase of frequency k/L is -k/2 + i k / N.
  const int M = fine.samples();
  auto phase = [N](int i, int k) {
    long long r = (static_cast<long long>(i) * ((k % N) + N)) % N;
    double frac = double(r) / N - 0.5 * (k & 1);
    return std::polar(1.0, kTwoPi * frac);
  };
  std::vector<cplx> out(S);
  const double norm = std::pow(spec.length(), -dim);
  if (dim == 1) {
    for (int i = 0; i < N; ++i) {
      cplx acc = 0;
      for (int q = 0; q < M; ++q)
        if (G[std::size_t(q)] != cplx{}) acc += G[std::size_t(q)] * phase(i, fine.signed_index(q));
      out[std::size_t(i)] = acc * norm;
    }
  } else {
    std::vector<cplx> half(std::size_t(N) * M, 0.0);  // (x0, eta1)
    for (int q1 = 0; q1 < M; ++q1)
      for (int i0 = 0; i0 < N; ++i0) {
        cplx acc = 0;
        for (int q0 = 0; q0 < M; ++q0) {
          const cplx& g = G[fine.flat(q0, q1)];
          if (g != cplx{}) acc += g * phase(i0, fine.signed_index(q0));
        }
        half[std::size_t(i0) + std::size_t(q1) * N] = acc;
      }
    for (int i1 = 0; i1 < N; ++i1)
      for (int i0 = 0; i0 < N; ++i0) {
        cplx acc = 0;
        for (int q1 = 0; q1 < M; ++q1) acc += half[std::size_t(i0) + std::size_t(q1) * N] * phase(i1, fine.signed_index(q1));
        out[spec.flat(i0, i1)] = acc * norm;
      }
  }
  return GridFunction(spec, std::move(out));
}

GridFunction apply_separable(const MultiplierTensor& sigma, const std::vector<SpectralFunction>& F) {
  require(!F.empty(), "no inputs");
  const GridSpec& spec = F.front().spec();
  check_inputs(sigma, F.size(), spec);
  require(sigma.factorization().has_value(), "symbol has no separable factorization");
  for (const auto& g : F) require(g.spec() == spec, "inputs live on different grids");
  const Factorization& fac = *sigma.factorization();
  const int m = sigma.arity();
  const GridSpec fine = extended_spec(spec, m);
  std::vector<cplx> product_sum(fine.size(), 0.0);
  for (const auto& term : fac.terms) {
    require(int(term.factors.size()) == m, "separable term has the wrong number of factors");
    if (term.weight == cplx{}) continue;
    std::vector<cplx> prod(fine.size(), term.weight);
    for (int i = 0; i < m; ++i) {
      SpectralFunction filtered = sample_spectrum(spec, term.factors[std::size_t(i)]);
      std::vector<cplx> v(F[std::size_t(i)].values());
      for (std::size_t q = 0; q < v.size(); ++q) v[q] *= filtered[q];
      GridFunction g = inverse_transform(SpectralFunction(fine, zero_pad(SpectralFunction(spec, std::move(v)), fine)));
      for (std::size_t q = 0; q < prod.size(); ++q) prod[q] *= g[q];
    }
    for (std::size_t q = 0; q < prod.size(); ++q) product_sum[q] += prod[q];
  }
  SpectralFunction E = forward_transform(GridFunction(fine, std::move(product_sum)));
  std::vector<cplx> ev(E.values());
  if (fac.sum_factor) {
    for (std::size_t q = 0; q < ev.size(); ++q) {
      if (ev[q] == cplx{}) continue;
      auto eta = fine_frequency(fine, q);
      ev[q] *= fac.sum_factor(std::span<const double>(eta.data(), std::size_t(spec.dim())));
    }
  }
  ExtendedSpectrum ext{spec, m, fine, std::move(ev)};
  return ext.to_grid();
}

GridFunction apply_separable(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs) {
  std::vector<SpectralFunction> spectra;
  for (const auto& f : inputs) spectra.push_back(forward_transform(f));
  return apply_separable(sigma, spectra);
}

GridFunction apply(const MultiplierTensor& sigma, const std::vector<GridFunction>& inputs) {
  if (sigma.factorization()) return apply_separable(sigma, inputs);
  return output_spectrum(sigma, inputs).to_grid();
}

GridFunction apply(const MultiplierTensor& sigma, const std::vector<SpectralFunction>& inputs) {
  if (sigma.factorization()) return apply_separable(sigma, inputs);
  return output_spectrum(sigma, inputs).to_grid();
}

MultiplierTensor localize(const MultiplierTensor& sigma, const AnnularPartition& part, int j, LocalizeMode mode) {
  require(part.arity() == sigma.arity() && part.spec() == sigma.spec(), "partition does not match the symbol");
  if (!part.resolvable(j)) throw DomainError("shell " + std::to_string(j) + " is not resolvable on this lattice");
  SymbolFn base = sigma.symbol();
  const double scale = std::ldexp(1.0, -j);
  SymbolFn fn = [base, scale, mode](std::span<const double> xi) -> cplx {
    double r = AnnularPartition::radius(xi) * scale;
    double w = mode == LocalizeMode::theta ? AnnularPartition::Theta(r) : AnnularPartition::Psi(r);
    return w == 0.0 ? cplx{} : w * base(xi);
  };
  return MultiplierTensor(sigma.arity(), sigma.spec(), std::move(fn), std::nullopt,
                          sigma.name() + (mode == LocalizeMode::theta ? "|theta:" : "|psi:") + std::to_string(j));
}

int ls2_samples(int total_dim) noexcept { return total_dim <= 3 ? 64 : 16; }

Ls2Result ls2_norm(const MultiplierTensor& sigma, const AnnularPartition& part, const Ls2Options& opt) {
  require(opt.s >= 0, "Sobolev index s must be nonnegative");
  for (double v : opt.product_s) require(v >= 0, "Sobolev indices must be nonnegative");
  const int m = sigma.arity(), dim = sigma.spec().dim(), d = m * dim;
  require(opt.product_s.empty() || int(opt.product_s.size()) == m, "one product exponent per slot is required");
  const int P = ls2_samples(d);
  const double A = 2.5, step = 2.0 * A / P;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= std::size_t(P);
  // Weight per frequency-side sample, independent of the shell.
  std::vector<double> weight(total);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rest = t;
    double all = 0;
    std::array<double, 3> slot{0, 0, 0};
    for (int c = 0; c < d; ++c) {
      int q = int(rest % std::size_t(P));
      rest /= std::size_t(P);
      double zeta = (q < P / 2 ? q : q - P) / (2.0 * A);
      all += zeta * zeta;
      slot[std::size_t(c / dim)] += zeta * zeta;
    }
    const double fp2 = 4.0 * std::numbers::pi * std::numbers::pi;
    if (opt.product_s.empty()) {
      weight[t] = std::pow(1.0 + fp2 * all, opt.s);
    } else {
      double w = 1.0;
      for (int i = 0; i < m; ++i) w *= std::pow(1.0 + fp2 * slot[std::size_t(i)], opt.product_s[std::size_t(i)]);
      weight[t] = w;
    }
  }
  Ls2Result res;
  std::vector<cplx> buf(total);
  std::array<double, 6> eta{}, scaled{};
  for (int k = part.shell_min(); k <= part.shell_max(); ++k) {
    const double two_k = std::ldexp(1.0, k);
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t rest = t;
      for (int c = 0; c < d; ++c) {
        int q = int(rest % std::size_t(P));
        rest /= std::size_t(P);
        eta[std::size_t(c)] = -A + q * step;
        scaled[std::size_t(c)] = two_k * eta[std::size_t(c)];
      }
      double w = psi_hat(AnnularPartition::radius(std::span<const double>(eta.data(), std::size_t(d))));
      buf[t] = w == 0.0 ? cplx{} : w * sigma(std::span<const double>(scaled.data(), std::size_t(d)));
    }
    fft::transform(buf, std::vector<int>(std::size_t(d), P), -1);
    double acc = 0;
    const double amp = std::pow(step, d);
    for (std::size_t t = 0; t < total; ++t) acc += weight[t] * std::norm(buf[t] * amp);
    double value = std::sqrt(acc * std::pow(1.0 / (2.0 * A), d));
    res.shells.push_back(k);
    res.per_shell.push_back(value);
    res.value = std::max(res.value, value);
  }
  return res;
}

double ls2_norm(const MultiplierTensor& sigma, const AnnularPartition& part, double s) {
  Ls2Options opt;
  opt.s = s;
  return ls2_norm(sigma, part, opt).value;
}

int vanishing_order(int n, double p) {
  require(p > 0 && p <= 1, "moment checks need 0 < p <= 1");
  return int(std::floor(n / p - n + 1e-12));
}

MomentReport moment_check(const GridFunction& g, double p, double tolerance, double margin_tolerance) {
  const GridSpec& spec = g.spec();
  const int order = vanishing_order(spec.dim(), p);
  MomentReport rep;
  if (!g.is_zero()) require_margin_decay(g, margin_tolerance);
  rep.l1_norm = lp_norm(g, 1.0);
  for (int total = 0; total <= order; ++total) {
    for (int a0 = total; a0 >= 0; --a0) {
      if (spec.dim() == 1 && a0 != total) break;
      std::array<int, 2> alpha{a0, total - a0};
      MomentEntry e{alpha, moment(g, std::span<const int>(alpha.data(), std::size_t(spec.dim())))};
      double rel = rep.l1_norm > 0 ? std::abs(e.value) / rep.l1_norm : 0.0;
      rep.max_relative = std::max(rep.max_relative, rel);
      rep.moments.push_back(e);
    }
  }
  rep.pass = rep.max_relative <= tolerance;
  return rep;
}

double vanishing_cutoff(double r, VanishingProfile profile) noexcept {
  r = std::abs(r);
  if (profile == VanishingProfile::compact) return 1.0 - theta_hat(r);
  const double a = flat_lambda() * r * r;
  if (a < 2.0) {
    // e^{-a} times the tail sum a^3/3! + a^4/4! + ..., free of cancellation.
    double term = a * a * a / 6.0, acc = 0;
    for (int i = 3; i < 60 && term > 1e-18 * acc; ++i) {
      acc += term;
      term *= a / (i + 1);
    }
    return std::exp(-a) * acc;
  }
  return 1.0 - flat_deficit(a);
}

MultiplierTensor make_vanishing_multiplier(const MultiplierTensor& sigma, double delta, VanishingProfile profile) {
  const GridSpec& spec = sigma.spec();
  if (!(delta >= 4.0 / spec.length()))
    throw DomainError("vanishing cutoff width delta must be at least 4/L = " + std::to_string(4.0 / spec.length()));
  const int m = sigma.arity(), dim = spec.dim();
  FactorFn cutoff = [delta, profile](std::span<const double> eta) -> cplx {
    return vanishing_cutoff(AnnularPartition::radius(eta) / delta, profile);
  };
  SymbolFn base = sigma.symbol();
  SymbolFn fn = [base, cutoff, m, dim](std::span<const double> xi) -> cplx {
    std::array<double, 2> s{0, 0};
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < dim; ++c) s[std::size_t(c)] += xi[std::size_t(i * dim + c)];
    cplx c = cutoff(std::span<const double>(s.data(), std::size_t(dim)));
    return c == cplx{} ? cplx{} : c * base(xi);
  };
  std::optional<Factorization> fac;
  if (sigma.factorization()) {
    fac = *sigma.factorization();
    FactorFn old = fac->sum_factor;
    if (old)
      fac->sum_factor = [old, cutoff](std::span<const double> eta) { return old(eta) * cutoff(eta); };
    else
      fac->sum_factor = cutoff;
  }
  return MultiplierTensor(m, spec, std::move(fn), std::move(fac), sigma.name() + "|vanishing");
}

}  // namespace triharm

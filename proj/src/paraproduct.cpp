#include "triharm/paraproduct.hpp"

#include <algorithm>

#include "triharm/parallel.hpp"

namespace triharm {

namespace {

// After require_band the out-of-band entries are rounding noise; zeroing them
// keeps the accumulation sparse and the band statements exact.
SpectralFunction clip_to_band(const LPFamily& fam, const SpectralFunction& F) {
  const double lo = std::ldexp(1.0, fam.j_min()), hi = std::ldexp(1.0, fam.j_max());
  std::vector<cplx> v(F.values());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double r = F.spec().frequency_radius(i);
    if (r < lo || r > hi) v[i] = 0.0;
  }
  return SpectralFunction(F.spec(), std::move(v));
}

// Lambda_j and Gamma_k spectra of the three inputs, computed once.
class FilterBank {
 public:
  FilterBank(const LPFamily& fam, const std::vector<GridFunction>& f, int shift) : fam_(fam) {
    lo_ = fam.j_min() - 1;
    for (const auto& g : f) {
      SpectralFunction F = clip_to_band(fam, forward_transform(g));
      std::vector<SpectralFunction> lam, gam;
      for (int j = fam.j_min(); j <= fam.j_max(); ++j) lam.push_back(fam.apply_spectral(FilterKind::lambda, F, j));
      for (int k = lo_; k <= fam.j_max(); ++k) gam.push_back(fam.apply_spectral_unchecked(FilterKind::gamma, F, k));
      lambda_.push_back(std::move(lam));
      gamma_.push_back(std::move(gam));
    }
    zero_ = SpectralFunction::zeros(fam.spec());
    (void)shift;
  }

  // Zero below the band: the inputs have no content under 2^{j_min}.
  const SpectralFunction& lambda(int slot, int j) const {
    if (j < fam_.j_min() || j > fam_.j_max()) return zero_;
    return lambda_[std::size_t(slot)][std::size_t(j - fam_.j_min())];
  }
  const SpectralFunction& gamma(int slot, int k) const {
    if (k < lo_) return zero_;
    if (k > fam_.j_max()) k = fam_.j_max();
    return gamma_[std::size_t(slot)][std::size_t(k - lo_)];
  }

 private:
  const LPFamily& fam_;
  int lo_ = 0;
  std::vector<std::vector<SpectralFunction>> lambda_, gamma_;
  SpectralFunction zero_;
};

struct TaskResult {
  SpectralFunction spectrum;
  std::size_t terms = 0;
};

void add_term(TaskResult& acc, const MultiplierTensor& sigma_j, std::vector<const SpectralFunction*> in) {
  for (const auto* p : in)
    if (p->is_zero()) return;
  std::vector<SpectralFunction> spectra;
  for (const auto* p : in) spectra.push_back(*p);
  SpectralFunction part = output_spectrum(sigma_j, spectra).fold();
  acc.spectrum = acc.spectrum + part;
  ++acc.terms;
}

}  // namespace

GridFunction ParaproductPieces::primary() const {
  GridFunction acc = t1;
  for (const auto& g : t2k) acc = acc + g;
  return acc;
}

GridFunction ParaproductPieces::total() const {
  GridFunction acc = primary();
  for (const auto& g : residual) acc = acc + g;
  return acc;
}

void require_band(const LPFamily& fam, const GridFunction& f, double relative_tolerance) {
  SpectralFunction F = forward_transform(f);
  const double peak = max_abs(F.values());
  const double lo = std::ldexp(1.0, fam.j_min()), hi = std::ldexp(1.0, fam.j_max());
  for (std::size_t i = 0; i < F.size(); ++i) {
    double r = F.spec().frequency_radius(i);
    if ((r < lo || r > hi) && std::abs(F[i]) > relative_tolerance * peak)
      throw DomainError("band violation: input spectrum is nonzero at |xi| = " + std::to_string(r) +
                        ", outside the resolvable annulus [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

ParaproductPieces paraproduct_decompose(const MultiplierTensor& sigma, const AnnularPartition& part,
                                        const LPFamily& fam, const std::vector<GridFunction>& f, int shift,
                                        int threads) {
  require(sigma.arity() == 3 && f.size() == 3, "the paraproduct split is trilinear");
  require(shift >= 1, "paraproduct shift must be at least 1");
  require(part.arity() == 3 && part.spec() == fam.spec() && sigma.spec() == fam.spec(), "grid mismatch");
  for (const auto& g : f) require_band(fam, g);
  const FilterBank bank(fam, f, shift);
  const int jn = fam.j_min(), jx = fam.j_max();
  std::vector<MultiplierTensor> local;
  for (int j = jn; j <= jx; ++j) local.push_back(localize(sigma, part, j, LocalizeMode::theta));

  const int pieces = 1 + shift + 5;
  const int shells = jx - jn + 1;
  auto task = [&](std::size_t id) {
    const int piece = int(id) / shells, j = jn + int(id) % shells;
    const MultiplierTensor& sj = local[std::size_t(j - jn)];
    TaskResult acc{SpectralFunction::zeros(fam.spec()), 0};
    if (piece == 0) {
      add_term(acc, sj, {&bank.lambda(0, j), &bank.gamma(1, j - shift), &bank.gamma(2, j - shift)});
    } else if (piece <= shift) {
      const int k = piece - 1;
      add_term(acc, sj, {&bank.lambda(0, j), &bank.lambda(1, j - k), &bank.gamma(2, j - k)});
    } else {
      const auto& o = kOrderings[std::size_t(piece - shift)];
      const int a = o[0], b = o[1], c = o[2];
      const int k0 = b < a ? 1 : 0, e = c < b ? 1 : 0;
      // The (1,3,2) ordering below j - S is already inside t1.
      const int k_hi = piece - shift == 1 ? shift - 1 : j - jn;
      for (int k = k0; k <= k_hi; ++k) {
        std::array<const SpectralFunction*, 3> in{};
        in[std::size_t(a)] = &bank.lambda(a, j);
        in[std::size_t(b)] = &bank.lambda(b, j - k);
        in[std::size_t(c)] = &bank.gamma(c, j - k - e);
        add_term(acc, sj, {in[0], in[1], in[2]});
      }
    }
    return acc;
  };
  std::vector<TaskResult> results =
      parallel_map<TaskResult>(std::size_t(pieces * shells), threads, std::function<TaskResult(std::size_t)>(task));

  ParaproductPieces out;
  out.shift = shift;
  for (int piece = 0; piece < pieces; ++piece) {
    SpectralFunction sum = SpectralFunction::zeros(fam.spec());
    for (int s = 0; s < shells; ++s) {
      const TaskResult& r = results[std::size_t(piece * shells + s)];
      sum = sum + r.spectrum;
      out.terms_evaluated += r.terms;
    }
    GridFunction g = inverse_transform(sum);
    if (piece == 0)
      out.t1 = std::move(g);
    else if (piece <= shift)
      out.t2k.push_back(std::move(g));
    else
      out.residual[std::size_t(piece - shift - 1)] = std::move(g);
  }
  return out;
}

ShellPredicate primary_index_set(int shift) {
  return [shift](const std::array<int, 3>& j) {
    if (j[1] <= j[0] - shift && j[2] <= j[0] - shift) return true;
    return j[1] > j[0] - shift && j[1] <= j[0] && j[2] <= j[1];
  };
}

ShellPredicate ordering_index_set(int o) {
  require(o >= 0 && o < 6, "ordering index must lie in [0, 5]");
  const auto ord = kOrderings[std::size_t(o)];
  return [ord](const std::array<int, 3>& j) {
    auto before = [&](int s, int t) { return j[std::size_t(s)] > j[std::size_t(t)] || (j[std::size_t(s)] == j[std::size_t(t)] && s < t); };
    return before(ord[0], ord[1]) && before(ord[1], ord[2]);
  };
}

GridFunction lattice_triple_sum(const MultiplierTensor& sigma, const LPFamily& fam, const std::vector<GridFunction>& f,
                                const ShellPredicate& in_set) {
  require(sigma.arity() == 3 && f.size() == 3, "the triple sum is trilinear");
  std::vector<std::vector<GridFunction>> lam(3);
  for (int i = 0; i < 3; ++i)
    for (int j = fam.j_min(); j <= fam.j_max(); ++j) lam[std::size_t(i)].push_back(fam.lambda(f[std::size_t(i)], j));
  GridFunction acc = GridFunction::zeros(fam.spec());
  const int jn = fam.j_min(), jx = fam.j_max();
  for (int a = jn; a <= jx; ++a)
    for (int b = jn; b <= jx; ++b)
      for (int c = jn; c <= jx; ++c) {
        if (!in_set({a, b, c})) continue;
        const auto& g1 = lam[0][std::size_t(a - jn)];
        const auto& g2 = lam[1][std::size_t(b - jn)];
        const auto& g3 = lam[2][std::size_t(c - jn)];
        if (g1.is_zero() || g2.is_zero() || g3.is_zero()) continue;
        acc = acc + apply_direct(sigma, {g1, g2, g3});
      }
  return acc;
}

LocalizationCheck localization_check(const MultiplierTensor& sigma, const AnnularPartition& part, const LPFamily& fam,
                                     const std::vector<GridFunction>& f, int k, int shift) {
  require(sigma.arity() == 3 && f.size() == 3, "the localization check is trilinear");
  require(shift >= 4, "the support statement needs a shift of at least 4");
  require(fam.contains(k), "shell outside the resolvable range");
  std::vector<SpectralFunction> in;
  in.push_back(fam.apply_spectral(FilterKind::lambda, forward_transform(f[0]), k));
  in.push_back(fam.apply_spectral_unchecked(FilterKind::gamma, forward_transform(f[1]), k - shift));
  in.push_back(fam.apply_spectral_unchecked(FilterKind::gamma, forward_transform(f[2]), k - shift));
  ExtendedSpectrum ext = output_spectrum(localize(sigma, part, k, LocalizeMode::theta), in);
  LocalizationCheck c;
  c.k = k;
  c.outside = ext.max_outside(std::ldexp(1.0, k - 2), std::ldexp(1.0, k + 2));
  c.peak = max_abs(ext.values);
  return c;
}

}  // namespace triharm

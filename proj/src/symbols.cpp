#include <fstream>
#include <random>

#include "triharm/multiplier.hpp"

namespace triharm {

bool within_direct_budget(int m, const GridSpec& spec) noexcept {
  return m * spec.dim() * spec.log2_samples() <= kDirectBudget;
}

MultiplierTensor::MultiplierTensor(int m, GridSpec spec, SymbolFn symbol, std::optional<Factorization> factorization,
                                   std::string name)
    : m_(m), spec_(spec), symbol_(std::move(symbol)), factorization_(std::move(factorization)), name_(std::move(name)) {
  require(m >= 1 && m <= 3, "multilinear arity must be 1, 2 or 3");
  require(bool(symbol_), "empty symbol");
  const int dim = spec_.dim();
  if (within_direct_budget(m_, spec_)) {
    values_.resize(lattice_size());
    std::array<std::size_t, 3> slot{0, 0, 0};
    std::array<double, 6> xi{};
    const std::size_t S = spec_.size();
    for (std::size_t t = 0; t < values_.size(); ++t) {
      std::size_t rest = t;
      for (int i = 0; i < m_; ++i) {
        slot[std::size_t(i)] = rest % S;
        rest /= S;
        auto a = spec_.axes(slot[std::size_t(i)]);
        xi[std::size_t(i * dim)] = spec_.frequency(a[0]);
        if (dim == 2) xi[std::size_t(i * dim + 1)] = spec_.frequency(a[1]);
      }
      cplx v = symbol_(std::span<const double>(xi.data(), std::size_t(m_ * dim)));
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), "symbol takes a non-finite value on the lattice");
      values_[t] = v;
    }
  }
  if (factorization_) {
    // The factorization must reproduce the symbol; checked on a fixed sample.
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-spec_.nyquist(), spec_.nyquist());
    for (int trial = 0; trial < 64; ++trial) {
      std::array<double, 6> xi{};
      for (int c = 0; c < m_ * dim; ++c) xi[std::size_t(c)] = u(rng);
      cplx prod_sum = 0;
      for (const auto& term : factorization_->terms) {
        require(int(term.factors.size()) == m_, "separable term has the wrong number of factors");
        cplx p = term.weight;
        for (int i = 0; i < m_; ++i) p *= term.factors[std::size_t(i)](std::span<const double>(&xi[std::size_t(i * dim)], std::size_t(dim)));
        prod_sum += p;
      }
      if (factorization_->sum_factor) {
        std::array<double, 2> s{0, 0};
        for (int i = 0; i < m_; ++i)
          for (int c = 0; c < dim; ++c) s[std::size_t(c)] += xi[std::size_t(i * dim + c)];
        prod_sum *= factorization_->sum_factor(std::span<const double>(s.data(), std::size_t(dim)));
      }
      cplx direct = symbol_(std::span<const double>(xi.data(), std::size_t(m_ * dim)));
      require(std::abs(direct - prod_sum) <= 1e-12 * std::max(1.0, std::abs(direct)),
              "separable factorization does not reproduce the symbol");
    }
  }
}

std::size_t MultiplierTensor::lattice_size() const noexcept {
  std::size_t n = 1;
  for (int i = 0; i < m_; ++i) n *= spec_.size();
  return n;
}

cplx MultiplierTensor::at(std::span<const std::size_t> slots) const {
  const std::size_t S = spec_.size();
  if (!values_.empty()) {
    std::size_t t = 0, stride = 1;
    for (int i = 0; i < m_; ++i, stride *= S) t += slots[std::size_t(i)] * stride;
    return values_[t];
  }
  std::array<double, 6> xi{};
  const int dim = spec_.dim();
  for (int i = 0; i < m_; ++i) {
    auto a = spec_.axes(slots[std::size_t(i)]);
    xi[std::size_t(i * dim)] = spec_.frequency(a[0]);
    if (dim == 2) xi[std::size_t(i * dim + 1)] = spec_.frequency(a[1]);
  }
  return symbol_(std::span<const double>(xi.data(), std::size_t(m_ * dim)));
}

void MultiplierTensor::write_binary(std::ostream& os) const {
  require(materialized(), "only stored tensors (m*dim*log2 N <= 18) can be exported");
  binio::put_i64(os, m_);
  binio::put_i64(os, spec_.dim());
  binio::put_i64(os, spec_.samples());
  binio::put_f64(os, spec_.length());
  for (const cplx& v : values_) {
    binio::put_f64(os, v.real());
    binio::put_f64(os, v.imag());
  }
}

void MultiplierTensor::write_binary(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  require(bool(os), "cannot open " + path + " for writing");
  write_binary(os);
}

namespace {

cplx one_factor(std::span<const double>) { return 1.0; }

double norm_of(std::span<const double> xi) { return AnnularPartition::radius(xi); }

}  // namespace

FactorFn parse_factor(const std::string& name) {
  if (name == "one") return one_factor;
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string kind = name.substr(0, colon);
    int j = 0;
    try {
      std::size_t used = 0;
      j = std::stoi(name.substr(colon + 1), &used);
      if (used != name.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("bad shell index in factor '" + name + "'");
    }
    const double scale = std::ldexp(1.0, -j);
    if (kind == "psi") return [scale](std::span<const double> xi) -> cplx { return psi_hat(norm_of(xi) * scale); };
    if (kind == "theta") return [scale](std::span<const double> xi) -> cplx { return theta_hat(norm_of(xi) * scale); };
  }
  throw UsageError("unknown factor '" + name + "' (expected one, psi:J or theta:J)");
}

MultiplierTensor make_one(int m, const GridSpec& spec) {
  Factorization fac;
  fac.terms.push_back({1.0, std::vector<FactorFn>(std::size_t(m), one_factor)});
  return MultiplierTensor(m, spec, [](std::span<const double>) -> cplx { return 1.0; }, std::move(fac), "one");
}

MultiplierTensor make_mihlin(int m, const GridSpec& spec, double tau) {
  SymbolFn fn = [tau](std::span<const double> xi) -> cplx {
    double r = norm_of(xi);
    return r == 0.0 ? cplx{} : std::polar(1.0, tau * std::log(r));
  };
  return MultiplierTensor(m, spec, std::move(fn), std::nullopt, "mihlin:" + std::to_string(tau));
}

MultiplierTensor make_random_band(int m, const GridSpec& spec, std::uint64_t seed, int rank) {
  require(rank >= 1 && rank <= 8, "random_band rank must lie in [1, 8]");
  const int dim = spec.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-2.0, 2.0), width(0.75, 1.5);
  std::normal_distribution<double> coeff(0.0, 1.0);
  struct Bump {
    double weight;
    double width;
    std::vector<std::array<double, 2>> mu;
  };
  std::vector<Bump> bumps;
  for (int r = 0; r < rank; ++r) {
    Bump b{coeff(rng), width(rng), {}};
    for (int i = 0; i < m; ++i) b.mu.push_back({centre(rng), dim == 2 ? centre(rng) : 0.0});
    bumps.push_back(std::move(b));
  }
  auto gauss = [dim](const std::array<double, 2>& mu, double w, std::span<const double> x) {
    double d2 = 0;
    for (int c = 0; c < dim; ++c) d2 += (x[std::size_t(c)] - mu[std::size_t(c)]) * (x[std::size_t(c)] - mu[std::size_t(c)]);
    return std::exp(-d2 / (2.0 * w * w));
  };
  Factorization fac;
  for (const auto& b : bumps) {
    SeparableTerm term{b.weight, {}};
    for (int i = 0; i < m; ++i) {
      auto mu = b.mu[std::size_t(i)];
      double w = b.width;
      term.factors.push_back([gauss, mu, w](std::span<const double> x) -> cplx { return gauss(mu, w, x); });
    }
    fac.terms.push_back(std::move(term));
  }
  SymbolFn fn = [bumps, gauss, m, dim](std::span<const double> xi) -> cplx {
    double acc = 0;
    for (const auto& b : bumps) {
      double p = b.weight;
      for (int i = 0; i < m; ++i) p *= gauss(b.mu[std::size_t(i)], b.width, xi.subspan(std::size_t(i * dim), std::size_t(dim)));
      acc += p;
    }
    return acc;
  };
  return MultiplierTensor(m, spec, std::move(fn), std::move(fac), "random_band:" + std::to_string(seed));
}

MultiplierTensor make_separable(const GridSpec& spec, const std::vector<std::string>& names) {
  require(!names.empty() && names.size() <= 3, "separable symbols take 1 to 3 factors");
  std::vector<FactorFn> factors;
  for (const auto& n : names) factors.push_back(parse_factor(n));
  const int m = int(factors.size()), dim = spec.dim();
  Factorization fac;
  fac.terms.push_back({1.0, factors});
  SymbolFn fn = [factors, dim](std::span<const double> xi) -> cplx {
    cplx p = 1.0;
    for (std::size_t i = 0; i < factors.size(); ++i) p *= factors[i](xi.subspan(i * std::size_t(dim), std::size_t(dim)));
    return p;
  };
  std::string label = "separable:";
  for (std::size_t i = 0; i < names.size(); ++i) label += (i ? "," : "") + names[i];
  return MultiplierTensor(m, spec, std::move(fn), std::move(fac), label);
}

MultiplierTensor make_named(const std::string& text, int m, const GridSpec& spec) {
  auto colon = text.find(':');
  std::string family = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto number = [&](const char* what) {
    try {
      std::size_t used = 0;
      double v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("symbol family ") + family + " needs a numeric " + what);
    }
  };
  if (family == "one" && arg.empty()) return make_one(m, spec);
  if (family == "mihlin") return make_mihlin(m, spec, number("tau"));
  if (family == "random_band") {
    double s = number("seed");
    if (s < 0 || s != std::floor(s)) throw UsageError("random_band seed must be a nonnegative integer");
    return make_random_band(m, spec, std::uint64_t(s));
  }
  if (family == "separable") {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= arg.size()) {
      auto comma = arg.find(',', start);
      names.push_back(arg.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (int(names.size()) != m) throw UsageError("separable symbol needs exactly m factors");
    return make_separable(spec, names);
  }
  throw UsageError("unknown symbol family '" + text + "' (one, mihlin:TAU, random_band:SEED, separable:F,...)");
}

}  // namespace triharm

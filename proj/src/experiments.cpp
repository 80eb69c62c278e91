#include "triharm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "triharm/parallel.hpp"

namespace triharm {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double exponent_value(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  Rational r = parse_rational(text);
  if (r <= 0) throw UsageError("exponent '" + text + "' must be positive");
  return to_double(r);
}

Rational reciprocal(const std::string& text) {
  if (text == "inf" || text == "infinity") return Rational(0);
  Rational r = parse_rational(text);
  if (r <= 0) throw UsageError("exponent '" + text + "' must be positive");
  return Rational(1) / r;
}

VanishingProfile parse_profile(const std::string& s) {
  if (s == "gaussian_flat") return VanishingProfile::gaussian_flat;
  if (s == "compact") return VanishingProfile::compact;
  throw UsageError("unknown vanishing profile '" + s + "' (gaussian_flat or compact)");
}

template <class T>
T get_or(const ordered_json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

std::string timestamp_line() {
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("# generated_at=") + buf + "\n";
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Per-slot surrogate seeds; slots of one triple must differ.
std::uint64_t slot_seed(std::uint64_t seed, int slot) { return seed * 7919u + std::uint64_t(slot) + 1u; }

}  // namespace

std::string ExperimentConfig::to_json() const {
  ordered_json j;
  j["grid"] = {{"dim", grid.dim}, {"N", grid.N}, {"L", grid.L}};
  j["exponents"] = {{"p", {p[0], p[1], p[2]}}, {"s", s}};
  j["symbol"] = {{"family", symbol.family},
                 {"vanishing", symbol.vanishing},
                 {"delta", symbol.delta},
                 {"profile", symbol.profile}};
  j["inputs"] = {{"family", inputs.family},     {"seed", inputs.seed},       {"count", inputs.count},
                 {"band", inputs.band},         {"packets", inputs.packets}, {"zero_slot", inputs.zero_slot}};
  j["dilations"] = dilations;
  j["moment"] = {{"p", moment_p}};
  j["threads"] = threads;
  j["output"] = output;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ExperimentConfig c;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      c.grid.dim = get_or(g, "dim", c.grid.dim);
      c.grid.N = get_or(g, "N", c.grid.N);
      c.grid.L = get_or(g, "L", c.grid.L);
    }
    if (j.contains("exponents")) {
      const auto& e = j["exponents"];
      if (e.contains("p")) {
        auto v = e["p"].get<std::vector<std::string>>();
        if (v.size() != 3) throw UsageError("exponents.p needs three entries");
        c.p = {v[0], v[1], v[2]};
      }
      c.s = get_or(e, "s", c.s);
    }
    if (j.contains("symbol")) {
      const auto& s = j["symbol"];
      c.symbol.family = get_or(s, "family", c.symbol.family);
      c.symbol.vanishing = get_or(s, "vanishing", c.symbol.vanishing);
      c.symbol.delta = get_or(s, "delta", c.symbol.delta);
      c.symbol.profile = get_or(s, "profile", c.symbol.profile);
    }
    if (j.contains("inputs")) {
      const auto& i = j["inputs"];
      c.inputs.family = get_or(i, "family", c.inputs.family);
      c.inputs.seed = get_or(i, "seed", c.inputs.seed);
      c.inputs.count = get_or(i, "count", c.inputs.count);
      c.inputs.band = get_or(i, "band", c.inputs.band);
      c.inputs.packets = get_or(i, "packets", c.inputs.packets);
      c.inputs.zero_slot = get_or(i, "zero_slot", c.inputs.zero_slot);
    }
    c.dilations = get_or(j, "dilations", c.dilations);
    if (j.contains("moment")) c.moment_p = get_or(j["moment"], "p", c.moment_p);
    c.threads = get_or(j, "threads", c.threads);
    c.output = get_or(j, "output", c.output);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config field: ") + e.what());
  }
  if (c.inputs.family != "wave_packet") throw UsageError("unknown input family '" + c.inputs.family + "'");
  if (!c.inputs.band.empty() && c.inputs.band.size() != 2) throw UsageError("inputs.band needs [lo, hi]");
  if (c.inputs.count < 0 || c.inputs.packets < 1) throw UsageError("inputs.count and inputs.packets out of range");
  if (c.inputs.zero_slot < -1 || c.inputs.zero_slot > 2) throw UsageError("inputs.zero_slot must lie in [-1, 2]");
  parse_profile(c.symbol.profile);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const { return to_json() == o.to_json(); }

GridSpec ExperimentConfig::grid_spec() const { return GridSpec::make(grid.dim, grid.N, grid.L); }

std::array<double, 3> ExperimentConfig::exponents() const {
  return {exponent_value(p[0]), exponent_value(p[1]), exponent_value(p[2])};
}

double ExperimentConfig::output_p() const {
  Rational inv = reciprocal(p[0]) + reciprocal(p[1]) + reciprocal(p[2]);
  require(inv > 0, "at least one exponent must be finite");
  return to_double(Rational(1) / inv);
}

MultiplierTensor ExperimentConfig::build_symbol() const {
  MultiplierTensor sigma = make_named(symbol.family, 3, grid_spec());
  if (!symbol.vanishing) return sigma;
  return make_vanishing_multiplier(sigma, symbol.delta, parse_profile(symbol.profile));
}

std::array<double, 2> ExperimentConfig::band_for(const LPFamily& fam) const {
  if (inputs.band.empty()) return {std::ldexp(1.0, fam.j_min() + 1), std::ldexp(1.0, fam.j_max() - 1)};
  return {inputs.band[0], inputs.band[1]};
}

Surrogate make_surrogate(const GridSpec& spec, std::array<double, 2> band, std::uint64_t seed, double t,
                         double n_over_p, int packets) {
  const double lo = band[0], hi = band[1];
  require(lo > 0 && hi > lo, "surrogate band must satisfy 0 < lo < hi");
  require(t > 0, "dilation must be positive");
  require(t * hi < spec.nyquist(), "dilated surrogate band exceeds the Nyquist frequency");
  const int dim = spec.dim();
  const double d = (hi - lo) / 4, w = 3.6 / d;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-0.05 * spec.length(), 0.05 * spec.length());
  std::uniform_real_distribution<double> mag(lo + d, hi - d), angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> amp(0.0, 1.0);
  struct Packet {
    double a, phase;
    std::array<double, 2> c, nu;
  };
  std::vector<Packet> ps;
  for (int k = 0; k < packets; ++k) {
    Packet p{};
    p.a = amp(rng);
    p.phase = angle(rng);
    p.c = {centre(rng), dim == 2 ? centre(rng) : 0.0};
    double r = mag(rng), th = angle(rng);
    p.nu = dim == 2 ? std::array<double, 2>{r * std::cos(th), r * std::sin(th)}
                    : std::array<double, 2>{std::cos(th) < 0 ? -r : r, 0.0};
    ps.push_back(p);
  }
  const double scale = std::pow(t, n_over_p);
  GridFunction raw = sample_function(spec, [&](std::span<const double> x) -> cplx {
    double acc = 0;
    for (const auto& p : ps) {
      double d2 = 0, ph = p.phase;
      for (int c = 0; c < dim; ++c) {
        double y = t * x[std::size_t(c)] - p.c[std::size_t(c)];
        d2 += y * y;
        ph += 2.0 * std::numbers::pi * p.nu[std::size_t(c)] * y;
      }
      acc += p.a * std::exp(-std::numbers::pi * d2 / (w * w)) * std::cos(ph);
    }
    return scale * acc;
  });
  SpectralFunction F = multiply_radial(forward_transform(raw), [lo, hi, t](double r) {
    return r >= t * lo && r <= t * hi ? 1.0 : 0.0;
  });
  return {inverse_transform(F), F};
}

RatioReport run_ratio_experiment(const ExperimentConfig& cfg) {
  const GridSpec spec = cfg.grid_spec();
  const int n = spec.dim();
  ExponentPoint e;
  e.n = n;
  for (int i = 0; i < 3; ++i) e.t[std::size_t(i)] = reciprocal(cfg.p[std::size_t(i)]);
  const Rational s = parse_rational(cfg.s);
  const Rational need = required_regularity(e);
  if (!(s > need * n))
    throw ThresholdError("s = " + to_string(s) + " does not exceed the required threshold " + to_string(need * n) +
                         " for " + to_string(e));
  const auto p = cfg.exponents();
  const double pout = cfg.output_p();
  const LPFamily fam = LPFamily::build(spec);
  const HardyProfile prof = HardyProfile::build(spec);
  const AnnularPartition part = AnnularPartition::build(spec, 3);
  const MultiplierTensor sigma = cfg.build_symbol();
  const double ls2 = ls2_norm(sigma, part, to_double(s));
  const auto band = cfg.band_for(fam);
  std::vector<double> dil;
  for (const auto& d : cfg.dilations) dil.push_back(to_double(parse_rational(d)));
  for (double t : dil)
    require(t * band[0] >= std::ldexp(1.0, fam.j_min()) && t * band[1] <= std::ldexp(1.0, fam.j_max() - 1),
            "dilated input band leaves the resolvable annulus");

  const std::size_t count = std::size_t(cfg.inputs.count);
  auto task = [&](std::size_t id) {
    RatioRow row;
    row.dilation = dil[id / count];
    row.seed = cfg.inputs.seed + id % count;
    row.ls2 = ls2;
    std::vector<SpectralFunction> spectra;
    for (int i = 0; i < 3; ++i) {
      Surrogate sg = make_surrogate(spec, band, slot_seed(row.seed, i), row.dilation, n / p[std::size_t(i)],
                                    cfg.inputs.packets);
      if (i == cfg.inputs.zero_slot) sg = {GridFunction::zeros(spec), SpectralFunction::zeros(spec)};
      HardyMethod m = p[std::size_t(i)] <= 1 ? HardyMethod::maximal : HardyMethod::square;
      row.norms[std::size_t(i)] = hardy_norm(sg.f, p[std::size_t(i)], m, fam, prof);
      spectra.push_back(std::move(sg.F));
    }
    const double den = ls2 * row.norms[0] * row.norms[1] * row.norms[2];
    if (!(den > 0)) {
      row.note = "zero denominator";
      return row;
    }
    GridFunction T = triharm::apply(sigma, spectra);
    row.numerator = hardy_norm(T, pout, HardyMethod::maximal, fam, prof);
    row.ratio = row.numerator / den;
    return row;
  };
  RatioReport rep;
  rep.rows = parallel_map<RatioRow>(dil.size() * count, cfg.threads, std::function<RatioRow(std::size_t)>(task));

  std::vector<double> all;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (std::size_t d = 0; d < dil.size(); ++d) {
    std::vector<double> r;
    for (std::size_t k = 0; k < count; ++k) {
      const RatioRow& row = rep.rows[d * count + k];
      if (row.skipped()) continue;
      if (!std::isfinite(row.ratio)) rep.all_finite = false;
      r.push_back(row.ratio);
    }
    if (r.empty()) continue;
    DilationSummary ds{dil[d], *std::max_element(r.begin(), r.end()), median_of(r)};
    rep.summary.push_back(ds);
    lo = std::min(lo, ds.max);
    hi = std::max(hi, ds.max);
    all.insert(all.end(), r.begin(), r.end());
  }
  if (!all.empty()) {
    rep.max = *std::max_element(all.begin(), all.end());
    rep.median = median_of(all);
    rep.dilation_variation = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  return rep;
}

void RatioReport::write_csv(std::ostream& os, bool timestamp) const {
  os << "# schema=1\n";
  if (timestamp) os << timestamp_line();
  os << "kind,dilation,seed,numerator,ls2,norm_f1,norm_f2,norm_f3,ratio,note\n";
  for (const auto& r : rows) {
    os << "row," << format_double(r.dilation) << ',' << r.seed << ',' << format_double(r.numerator) << ','
       << format_double(r.ls2);
    for (double v : r.norms) os << ',' << format_double(v);
    os << ',' << (r.skipped() ? "" : format_double(r.ratio)) << ',' << r.note << '\n';
  }
  for (const auto& s : summary) {
    os << "max," << format_double(s.dilation) << ",,,,,,," << format_double(s.max) << ",\n";
    os << "median," << format_double(s.dilation) << ",,,,,,," << format_double(s.median) << ",\n";
  }
  os << "overall_max,,,,,,,," << format_double(max) << ",\n";
  os << "overall_median,,,,,,,," << format_double(median) << ",\n";
  os << "dilation_variation,,,,,,,," << format_double(dilation_variation) << ",\n";
}

MomentExperimentReport run_moment_experiment(const ExperimentConfig& cfg) {
  const GridSpec spec = cfg.grid_spec();
  const int n = spec.dim();
  const double p = to_double(parse_rational(cfg.moment_p));
  const LPFamily fam = LPFamily::build(spec);
  const AnnularPartition part = AnnularPartition::build(spec, 3);
  const MultiplierTensor sigma = cfg.build_symbol();
  const auto band = cfg.band_for(fam);
  require(3 * band[1] < 2 * spec.nyquist(), "output band would alias onto low frequencies");
  const int order = vanishing_order(n, p);

  // Shells whose plateau (Theta = 1 on [2^{j-2}, 2^{j+2}]) meets the triple
  // radii of the inputs. Shells touching them only through the window's
  // flank carry numerically null pieces.
  const double rlo = std::sqrt(3.0) * band[0], rhi = std::sqrt(3.0) * band[1];
  std::vector<int> shells;
  for (int j = part.shell_min(); j <= part.shell_max(); ++j)
    if (std::ldexp(1.0, j - 2) <= rhi && std::ldexp(1.0, j + 2) >= rlo) shells.push_back(j);
  std::vector<MultiplierTensor> local;
  for (int j : shells) local.push_back(localize(sigma, part, j, LocalizeMode::theta));

  const std::size_t count = std::size_t(cfg.inputs.count);
  const std::size_t pieces = 1 + shells.size();
  auto task = [&](std::size_t id) {
    const std::uint64_t seed = cfg.inputs.seed + id / pieces;
    const std::size_t piece = id % pieces;
    std::vector<SpectralFunction> spectra;
    for (int i = 0; i < 3; ++i) {
      if (i == cfg.inputs.zero_slot)
        spectra.push_back(SpectralFunction::zeros(spec));
      else
        spectra.push_back(make_surrogate(spec, band, slot_seed(seed, i), 1.0, 0.0, cfg.inputs.packets).F);
    }
    GridFunction full = triharm::apply(sigma, spectra);
    GridFunction g = piece == 0 ? full : output_spectrum(local[piece - 1], spectra).to_grid();
    // A piece that only grazes the input band inherits the window's slowly
    // decaying tails, so its margin is measured against the full output.
    if (piece > 0 && !g.is_zero()) {
      const double edge = margin_ratio(g) * max_abs(g.values()), top = max_abs(full.values());
      if (edge > kMomentMarginTolerance * top)
        throw DomainError("margin violation in localized piece: edge " + format_double(edge) + " against peak " +
                          format_double(top));
    }
    MomentReport mr = piece == 0 ? moment_check(g, p)
                                 : moment_check(g, p, kMomentTolerance, std::numeric_limits<double>::infinity());
    std::vector<MomentRow> rows;
    const std::string name = piece == 0 ? "T" : "T_j=" + std::to_string(shells[piece - 1]);
    for (int k = 0; k <= order; ++k) {
      MomentRow r{seed, name, k, 0.0, true};
      for (const auto& m : mr.moments)
        if (m.alpha[0] + m.alpha[1] == k && mr.l1_norm > 0)
          r.max_relative = std::max(r.max_relative, std::abs(m.value) / mr.l1_norm);
      r.pass = r.max_relative <= kMomentTolerance;
      rows.push_back(r);
    }
    return rows;
  };
  auto parts = parallel_map<std::vector<MomentRow>>(count * pieces, cfg.threads,
                                                    std::function<std::vector<MomentRow>(std::size_t)>(task));
  MomentExperimentReport rep;
  rep.order = order;
  for (auto& v : parts)
    for (auto& r : v) {
      rep.worst = std::max(rep.worst, r.max_relative);
      rep.all_pass = rep.all_pass && r.pass;
      rep.rows.push_back(std::move(r));
    }
  return rep;
}

void MomentExperimentReport::write_csv(std::ostream& os, bool timestamp) const {
  os << "# schema=1\n";
  if (timestamp) os << timestamp_line();
  os << "seed,piece,order,max_relative,pass\n";
  for (const auto& r : rows)
    os << r.seed << ',' << r.piece << ',' << r.order << ',' << format_double(r.max_relative) << ','
       << (r.pass ? "true" : "false") << '\n';
  for (int k = 0; k <= order; ++k) {
    double w = 0;
    for (const auto& r : rows)
      if (r.order == k) w = std::max(w, r.max_relative);
    os << "# max_relative_order_" << k << '=' << format_double(w) << '\n';
  }
}

}  // namespace triharm

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "triharm/atoms.hpp"
#include "triharm/dyadic_frame.hpp"
#include "triharm/experiments.hpp"
#include "triharm/multiplier.hpp"
#include "triharm/regions.hpp"

using namespace triharm;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitThreshold = 3;
constexpr int kExitUsage = 64;

struct GridOpts {
  int dim = 1;
  int N = 256;
  double L = 32;
  void add(CLI::App* app) {
    app->add_option("--dim", dim, "Spatial dimension (1 or 2)");
    app->add_option("--N", N, "Samples per axis (power of two)");
    app->add_option("--L", L, "Box length (power of two)");
  }
  GridSpec spec() const { return GridSpec::make(dim, N, L); }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  require(bool(file), "cannot open " + path + " for writing");
  return file;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

// A smooth band-limited test input when no file is given.
GridFunction demo_input(const GridSpec& spec) {
  const double L = spec.length();
  return sample_function(spec, [L](std::span<const double> x) -> cplx {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    double w = L / 16;
    return std::exp(-std::numbers::pi * r2 / (w * w)) * std::cos(2 * std::numbers::pi * 2.0 * x[0]);
  });
}

int cmd_classify(const std::string& t, int n, bool json) {
  ExponentPoint e = parse_exponent_point(t, n);
  Region r = classify(e);
  if (r == Region::None) {
    std::cerr << "error: " << to_string(e) << " lies in no region\n";
    return kExitDomain;
  }
  Rational thr = required_regularity(e);
  if (json) {
    nlohmann::json j;
    j["t"] = {to_string(e.t[0]), to_string(e.t[1]), to_string(e.t[2])};
    j["n"] = n;
    j["region"] = to_string(r);
    j["threshold_s_over_n"] = to_string(thr);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(r) << ", threshold s > " << to_string(thr) << "·n\n";
  }
  return 0;
}

int cmd_plan(const std::string& t, const std::string& s, int n, bool json) {
  ExponentPoint e = parse_exponent_point(t, n);
  InterpPlan plan = plan_interpolation(e, parse_rational(s));
  PlanVerdict v = verify_plan(plan);
  if (json) {
    auto j = nlohmann::json::parse(plan.to_json());
    j["verified"] = v.ok;
    if (!v.ok) j["violation"] = v.violation;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << plan.to_table();
    std::cout << "verify_plan: " << (v.ok ? "true" : "false (" + v.violation + ")") << "\n";
  }
  return v.ok ? 0 : kExitDomain;
}

int cmd_lp_decompose(const GridSpec& spec, const std::string& input, const std::string& out_dir,
                     const std::string& frame, int frame_level) {
  GridFunction f = input.empty() ? demo_input(spec) : read_grid_function(input);
  LPFamily fam = LPFamily::build(f.spec());
  SpectralFunction F = forward_transform(f);
  GridFunction sum = GridFunction::zeros(f.spec());
  std::cout << "# schema=1\nj,lambda_l2,gamma_l2\n";
  for (int j = fam.j_min(); j <= fam.j_max(); ++j) {
    GridFunction lj = inverse_transform(fam.apply_spectral(FilterKind::lambda, F, j));
    GridFunction gj = inverse_transform(fam.apply_spectral(FilterKind::gamma, F, j));
    sum = sum + lj;
    std::cout << j << ',' << format_double(lp_norm(lj, 2)) << ',' << format_double(lp_norm(gj, 2)) << '\n';
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_binary(out_dir + "/lambda_" + std::to_string(j) + ".bin", lj);
      write_binary(out_dir + "/gamma_" + std::to_string(j) + ".bin", gj);
    }
  }
  std::cout << "# partition_residual=" << format_double(lp_norm(f - sum, 2) / std::max(lp_norm(f, 2), 1e-300))
            << '\n';
  if (!frame.empty()) {
    FrameKind kind = frame == "psi" ? FrameKind::psi : frame == "theta" ? FrameKind::theta
                                                                         : throw UsageError("--frame is psi or theta");
    CoeffSeq c = analyze(fam, f, frame_level, kind);
    std::ofstream out_file;
    std::string path = out_dir.empty() ? "" : out_dir + "/coeffs_" + frame + "_" + std::to_string(frame_level) + ".json";
    std::ostream& os = path.empty() ? std::cerr : (out_file.open(path), out_file);
    os << c.to_json() << "\n";
  }
  return 0;
}

int cmd_atom_make(const GridSpec& spec, int level, std::vector<std::int64_t> pos, double p, int M,
                  std::uint64_t seed, const std::string& out) {
  DyadicCube q;
  q.dim = spec.dim();
  q.level = level;
  pos.resize(2, 0);
  q.position = {pos[0], pos[1]};
  if (M < 0) M = default_moment_order(spec.dim(), p);
  Atom a = make_atom(spec, q, p, M, seed);
  AtomCertificate cert = certify(a);
  if (!out.empty()) {
    write_binary(out + ".bin", a.f);
    std::ofstream js(out + ".json");
    require(bool(js), "cannot write " + out + ".json");
    js << a.sidecar_json(cert) << "\n";
  }
  std::cout << a.sidecar_json(cert) << "\n";
  return cert.passed() ? 0 : kExitDomain;
}

int cmd_atom_check(const std::string& prefix, double decay_exponent, const std::string& out) {
  std::ifstream js(prefix + ".json");
  if (!js) throw UsageError("cannot read " + prefix + ".json");
  nlohmann::json j = nlohmann::json::parse(js);
  Atom a;
  a.f = read_grid_function(prefix + ".bin");
  a.cube.dim = j["cube"]["dim"].get<int>();
  a.cube.level = j["cube"]["level"].get<int>();
  auto pos = j["cube"]["position"].get<std::vector<std::int64_t>>();
  pos.resize(2, 0);
  a.cube.position = {pos[0], pos[1]};
  a.p = j["p"].get<double>();
  a.moment_order = j["moment_order"].get<int>();
  a.seed = j["seed"].get<std::uint64_t>();
  AtomCertificate cert = certify(a);
  std::cerr << "certificate: support=" << cert.support_ok << " size=" << cert.size_ok << " moments=" << cert.moments_ok
            << " order=" << cert.order_ok << " residual=" << format_double(cert.max_moment_residual) << "\n";
  if (!cert.passed()) return kExitDomain;
  LPFamily fam = LPFamily::build(a.f.spec());
  DecayReport rep = decay_profile_check(fam, a, decay_exponent);
  std::ofstream file;
  rep.write_csv(open_output(out, file));
  return 0;
}

MultiplierTensor symbol_from(const std::string& family, int m, const GridSpec& spec, double delta) {
  MultiplierTensor s = make_named(family, m, spec);
  return delta > 0 ? make_vanishing_multiplier(s, delta) : s;
}

int cmd_multiplier_apply(const std::string& family, const std::string& inputs, const std::string& method,
                         double delta, const GridSpec& fallback, const std::string& out) {
  std::vector<GridFunction> f;
  if (inputs.empty()) {
    f.assign(3, demo_input(fallback));
  } else {
    for (const auto& path : split_csv(inputs)) f.push_back(read_grid_function(path));
  }
  const GridSpec spec = f.front().spec();
  MultiplierTensor sigma = symbol_from(family, int(f.size()), spec, delta);
  GridFunction g;
  if (method == "direct")
    g = apply_direct(sigma, f);
  else if (method == "separable")
    g = apply_separable(sigma, f);
  else if (method == "auto")
    g = triharm::apply(sigma, f);
  else
    throw UsageError("--method is direct, separable or auto");
  if (!out.empty()) write_binary(out, g);
  std::cout << "l2=" << format_double(lp_norm(g, 2)) << " linf=" << format_double(lp_norm(g, INFINITY)) << "\n";
  return 0;
}

int cmd_ls2(const std::string& family, int m, const GridSpec& spec, double s, const std::string& product,
            double delta) {
  MultiplierTensor sigma = symbol_from(family, m, spec, delta);
  AnnularPartition part = AnnularPartition::build(spec, m);
  Ls2Options opt;
  opt.s = s;
  for (const auto& v : split_csv(product)) opt.product_s.push_back(to_double(parse_rational(v)));
  Ls2Result r = ls2_norm(sigma, part, opt);
  std::cout << "# schema=1\nshell,value\n";
  for (std::size_t i = 0; i < r.shells.size(); ++i) std::cout << r.shells[i] << ',' << format_double(r.per_shell[i]) << '\n';
  std::cout << "# ls2=" << format_double(r.value) << '\n';
  return 0;
}

ExperimentConfig load_config(const std::string& path, int threads, const std::string& output, int count,
                             long long seed) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : ExperimentConfig::load(path);
  if (threads >= 0) cfg.threads = threads;
  if (!output.empty()) cfg.output = output;
  if (count >= 0) cfg.inputs.count = count;
  if (seed >= 0) cfg.inputs.seed = std::uint64_t(seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triharm: numerical laboratory for trilinear Fourier multipliers"};
  app.require_subcommand(1);

  std::string t, s = "2";
  int n = 1;
  bool json = false;
  auto* classify_cmd = app.add_subcommand("classify", "Region and regularity threshold of an exponent point");
  classify_cmd->add_option("--t", t, "t1,t2,t3 with t_i = 1/p_i")->required();
  classify_cmd->add_option("--n", n, "Dimension");
  classify_cmd->add_flag("--json", json, "Emit JSON");

  auto* plan_cmd = app.add_subcommand("plan", "Interpolation plan for an exponent point");
  plan_cmd->add_option("--t", t, "t1,t2,t3")->required();
  plan_cmd->add_option("--s", s, "Regularity index s (rational)")->required();
  plan_cmd->add_option("--n", n, "Dimension");
  plan_cmd->add_flag("--json", json, "Emit JSON");

  GridOpts grid;
  std::string input, out_dir, frame;
  int frame_level = 0;
  auto* lp_cmd = app.add_subcommand("lp-decompose", "Littlewood-Paley pieces and phi-transform coefficients");
  grid.add(lp_cmd);
  lp_cmd->add_option("--input", input, "GridFunction binary (default: built-in test input)");
  lp_cmd->add_option("--output-dir", out_dir, "Directory for lambda_j/gamma_j binaries");
  lp_cmd->add_option("--frame", frame, "Also analyze with the psi or theta frame");
  lp_cmd->add_option("--frame-level", frame_level, "Shell for --frame");

  int level = 0, M = -1;
  std::vector<std::int64_t> pos{0};
  double p = 1;
  long long seed = -1;
  std::string out;
  auto* am_cmd = app.add_subcommand("atom-make", "Generate and certify an H^p atom");
  grid.add(am_cmd);
  am_cmd->add_option("--level", level, "Cube level j (side 2^-j)");
  am_cmd->add_option("--pos", pos, "Cube position m (one per axis)")->delimiter(',');
  am_cmd->add_option("--p", p, "Exponent p in (0, 1]");
  am_cmd->add_option("--M", M, "Moment order (default [n/p - n]_+ + 2)");
  am_cmd->add_option("--seed", seed, "Random seed");
  am_cmd->add_option("--output", out, "Output prefix for .bin and .json");

  double decay = 4;
  auto* ac_cmd = app.add_subcommand("atom-check", "Certify a stored atom and report decay ratios");
  ac_cmd->add_option("--atom", input, "Prefix of the .bin/.json pair")->required();
  ac_cmd->add_option("--decay", decay, "Decay exponent L0 in [2, 8]");
  ac_cmd->add_option("--output", out, "CSV path (default stdout)");

  std::string family = "one", inputs, method = "auto", product;
  double delta = 0;
  int m = 3;
  auto* ma_cmd = app.add_subcommand("multiplier-apply", "Apply an m-linear multiplier to stored inputs");
  grid.add(ma_cmd);
  ma_cmd->add_option("--symbol", family, "one, mihlin:TAU, random_band:SEED, separable:F1,F2,F3");
  ma_cmd->add_option("--inputs", inputs, "Comma separated GridFunction binaries");
  ma_cmd->add_option("--method", method, "direct, separable or auto");
  ma_cmd->add_option("--vanishing", delta, "Apply the vanishing cutoff of width delta");
  ma_cmd->add_option("--output", out, "Output GridFunction binary");

  double sval = 0;
  auto* ls_cmd = app.add_subcommand("ls2-norm", "Scale-invariant Sobolev norm of a symbol");
  grid.add(ls_cmd);
  ls_cmd->add_option("--symbol", family, "Symbol family");
  ls_cmd->add_option("--m", m, "Arity");
  ls_cmd->add_option("--s", sval, "Sobolev index")->required();
  ls_cmd->add_option("--product", product, "Per-slot exponents s1,s2,s3 for the product weight");
  ls_cmd->add_option("--vanishing", delta, "Apply the vanishing cutoff of width delta");

  std::string config;
  int threads = -1, count = -1;
  bool no_timestamp = false;
  auto* re_cmd = app.add_subcommand("ratio-experiment", "Randomized boundedness ratios");
  auto* me_cmd = app.add_subcommand("moment-experiment", "Vanishing moments of T_sigma and its localized pieces");
  for (auto* c : {re_cmd, me_cmd}) {
    c->add_option("--config", config, "JSON config file");
    c->add_option("--threads", threads, "Worker count (0 = all cores, capped by TRIHARM_THREADS)");
    c->add_option("--output", out, "CSV output path (default: config output, else stdout)");
    c->add_option("--count", count, "Number of seeds");
    c->add_option("--seed", seed, "First seed");
    c->add_flag("--no-timestamp", no_timestamp, "Omit the generated_at line");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(t, n, json);
    if (*plan_cmd) return cmd_plan(t, s, n, json);
    if (*lp_cmd) return cmd_lp_decompose(grid.spec(), input, out_dir, frame, frame_level);
    if (*am_cmd) return cmd_atom_make(grid.spec(), level, pos, p, M, seed < 0 ? 1 : std::uint64_t(seed), out);
    if (*ac_cmd) return cmd_atom_check(input, decay, out);
    if (*ma_cmd) return cmd_multiplier_apply(family, inputs, method, delta, grid.spec(), out);
    if (*ls_cmd) return cmd_ls2(family, m, grid.spec(), sval, product, delta);
    if (*re_cmd || *me_cmd) {
      ExperimentConfig cfg = load_config(config, threads, out, count, seed);
      std::ofstream file;
      std::ostream& os = open_output(cfg.output, file);
      if (*re_cmd) {
        RatioReport rep = run_ratio_experiment(cfg);
        rep.write_csv(os, !no_timestamp);
        std::cerr << "max=" << format_double(rep.max) << " median=" << format_double(rep.median)
                  << " dilation_variation=" << format_double(rep.dilation_variation) << "\n";
      } else {
        MomentExperimentReport rep = run_moment_experiment(cfg);
        rep.write_csv(os, !no_timestamp);
        std::cerr << "order=" << rep.order << " worst=" << format_double(rep.worst)
                  << " all_pass=" << (rep.all_pass ? "true" : "false") << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const ThresholdError& e) {
    std::cerr << "threshold error: " << e.what() << "\n";
    return kExitThreshold;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

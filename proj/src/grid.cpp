#include "triharm/grid.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fft.hpp"

namespace triharm {

GridSpec GridSpec::make(int dim, int samples, double length) {
  require(dim == 1 || dim == 2, "grid dimension must be 1 or 2");
  require(samples >= 16 && std::has_single_bit(unsigned(samples)),
          "samples per axis must be a power of two, at least 16");
  require(length > 0 && std::isfinite(length), "box length must be positive");
  int e = 0;
  double mant = std::frexp(length, &e);
  require(mant == 0.5, "box length must be a power of two");
  GridSpec s;
  s.dim_ = dim;
  s.n_ = samples;
  s.log2n_ = std::countr_zero(unsigned(samples));
  s.length_ = length;
  return s;
}

double GridSpec::cell_volume() const noexcept {
  double h = spacing();
  return dim_ == 1 ? h : h * h;
}

double GridSpec::frequency_radius(std::size_t flat) const noexcept {
  auto a = axes(flat);
  double x = frequency(a[0]);
  if (dim_ == 1) return std::abs(x);
  double y = frequency(a[1]);
  return std::hypot(x, y);
}

namespace {

std::vector<int> fft_dims(const GridSpec& s) { return std::vector<int>(std::size_t(s.dim()), s.samples()); }

// (-1)^(k0 + k1): the phase of the box corner -L/2 against frequency k/L.
inline double corner_sign(const GridSpec& s, std::size_t flat) {
  auto a = s.axes(flat);
  return ((a[0] + a[1]) & 1) ? -1.0 : 1.0;
}

}  // namespace

GridFunction sample_function(const GridSpec& spec, const std::function<cplx(std::span<const double>)>& f) {
  std::vector<cplx> v(spec.size());
  double x[2] = {0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto a = spec.axes(i);
    x[0] = spec.coord(a[0]);
    x[1] = spec.coord(a[1]);
    v[i] = f(std::span<const double>(x, std::size_t(spec.dim())));
  }
  return GridFunction(spec, std::move(v));
}

SpectralFunction sample_spectrum(const GridSpec& spec, const std::function<cplx(std::span<const double>)>& f) {
  std::vector<cplx> v(spec.size());
  double xi[2] = {0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto a = spec.axes(i);
    xi[0] = spec.frequency(a[0]);
    xi[1] = spec.frequency(a[1]);
    v[i] = f(std::span<const double>(xi, std::size_t(spec.dim())));
  }
  return SpectralFunction(spec, std::move(v));
}

SpectralFunction forward_transform(const GridFunction& f) {
  const GridSpec& s = f.spec();
  std::vector<cplx> v(f.values());
  fft::transform(v, fft_dims(s), -1);
  const double w = s.cell_volume();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w * corner_sign(s, i);
  return SpectralFunction(s, std::move(v));
}

GridFunction inverse_transform(const SpectralFunction& F) {
  const GridSpec& s = F.spec();
  std::vector<cplx> v(F.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= corner_sign(s, i);
  fft::transform(v, fft_dims(s), +1);
  const double w = std::pow(s.length(), -s.dim());
  for (cplx& c : v) c *= w;
  return GridFunction(s, std::move(v));
}

SpectralFunction multiply_radial(const SpectralFunction& F, const std::function<double(double)>& profile) {
  const GridSpec& s = F.spec();
  std::vector<cplx> v(F.values());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != cplx{}) v[i] *= profile(s.frequency_radius(i));
  return SpectralFunction(s, std::move(v));
}

double lp_norm(const GridFunction& f, double p) {
  require(p > 0, "L^p exponent must be positive");
  if (std::isinf(p)) return max_abs(f.values());
  double acc = 0;
  for (const cplx& v : f.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.spec().cell_volume(), 1.0 / p);
}

double spectral_l2_norm(const SpectralFunction& F) {
  double acc = 0;
  for (const cplx& v : F.values()) acc += std::norm(v);
  return std::sqrt(acc * std::pow(F.spec().length(), -F.spec().dim()));
}

cplx moment(const GridFunction& f, std::span<const int> alpha) {
  const GridSpec& s = f.spec();
  require(int(alpha.size()) == s.dim(), "multi-index length must equal the dimension");
  int order = 0;
  for (int a : alpha) {
    require(a >= 0, "multi-index entries must be nonnegative");
    order += a;
  }
  require(order <= 8, "moment order above 8 is not supported");
  cplx acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto a = s.axes(i);
    double w = std::pow(s.coord(a[0]), alpha[0]);
    if (s.dim() == 2) w *= std::pow(s.coord(a[1]), alpha[1]);
    acc += w * f[i];
  }
  return acc * s.cell_volume();
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  require(f.spec() == g.spec(), "convolution operands live on different grids");
  SpectralFunction F = forward_transform(f);
  SpectralFunction G = forward_transform(g);
  std::vector<cplx> v(F.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= G[i];
  return inverse_transform(SpectralFunction(f.spec(), std::move(v)));
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
  require(f.spec() == g.spec(), "inner product operands live on different grids");
  cplx acc = 0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]);
  return acc * f.spec().cell_volume();
}

double margin_ratio(const GridFunction& f) {
  const GridSpec& s = f.spec();
  const double inner = 0.4 * s.length();
  double top = 0, edge = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double m = std::abs(f[i]);
    top = std::max(top, m);
    auto a = s.axes(i);
    bool outside = std::abs(s.coord(a[0])) >= inner || (s.dim() == 2 && std::abs(s.coord(a[1])) >= inner);
    if (outside) edge = std::max(edge, m);
  }
  return top == 0 ? 0.0 : edge / top;
}

void require_margin_decay(const GridFunction& f, double relative_tolerance) {
  double r = margin_ratio(f);
  if (r > relative_tolerance) {
    std::ostringstream msg;
    msg << "margin violation: function reaches " << r << " of its peak in the outer 10% of the box (tolerance "
        << relative_tolerance << ")";
    throw DomainError(msg.str());
  }
}

double max_abs(const std::vector<cplx>& a) {
  double m = 0;
  for (const cplx& v : a) m = std::max(m, std::abs(v));
  return m;
}

double relative_error(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  require(a.size() == b.size(), "size mismatch in relative_error");
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  if (den == 0) return std::sqrt(num);
  return std::sqrt(num / den);
}

namespace binio {

void put_i64(std::ostream& os, std::int64_t v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  os.write(reinterpret_cast<const char*>(&u), 8);
}

void put_f64(std::ostream& os, double v) {
  std::int64_t i;
  std::memcpy(&i, &v, 8);
  put_i64(os, i);
}

std::int64_t get_i64(std::istream& is) {
  std::uint64_t u = 0;
  is.read(reinterpret_cast<char*>(&u), 8);
  require(bool(is), "truncated binary stream");
  if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
  std::int64_t v;
  std::memcpy(&v, &u, 8);
  return v;
}

double get_f64(std::istream& is) {
  std::int64_t i = get_i64(is);
  double v;
  std::memcpy(&v, &i, 8);
  return v;
}

}  // namespace binio

void write_binary(std::ostream& os, const GridSpec& spec, const std::vector<cplx>& values) {
  binio::put_i64(os, spec.dim());
  binio::put_i64(os, spec.samples());
  binio::put_f64(os, spec.length());
  for (const cplx& v : values) {
    binio::put_f64(os, v.real());
    binio::put_f64(os, v.imag());
  }
}

void write_binary(const std::string& path, const GridFunction& f) {
  std::ofstream os(path, std::ios::binary);
  require(bool(os), "cannot open " + path + " for writing");
  write_binary(os, f.spec(), f.values());
}

GridFunction read_grid_function(std::istream& is) {
  auto dim = binio::get_i64(is);
  auto n = binio::get_i64(is);
  double len = binio::get_f64(is);
  require(n > 0 && n < (1 << 24), "implausible sample count in header");
  GridSpec spec = GridSpec::make(int(dim), int(n), len);
  std::vector<cplx> v(spec.size());
  for (cplx& c : v) {
    double re = binio::get_f64(is);
    double im = binio::get_f64(is);
    c = {re, im};
  }
  return GridFunction(spec, std::move(v));
}

GridFunction read_grid_function(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(bool(is), "cannot open " + path);
  return read_grid_function(is);
}

std::string to_json(const GridFunction& f) {
  require(f.spec().samples() <= 256, "JSON export is limited to N <= 256");
  nlohmann::json j;
  j["dim"] = f.spec().dim();
  j["n"] = f.spec().samples();
  j["length"] = f.spec().length();
  std::vector<double> re, im;
  for (const cplx& v : f.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

}  // namespace triharm

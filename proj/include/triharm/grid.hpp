#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "triharm/error.hpp"

namespace triharm {

using cplx = std::complex<double>;

// Uniform grid on the box [-L/2, L/2)^dim with N = 2^K samples per axis.
// Flat indices run with axis 0 fastest. Frequency arrays use FFT order:
// index k < N/2 is frequency k/L, index k >= N/2 is (k - N)/L.
class GridSpec {
 public:
  GridSpec() = default;
  static GridSpec make(int dim, int samples, double length);

  int dim() const noexcept { return dim_; }
  int samples() const noexcept { return n_; }
  int log2_samples() const noexcept { return log2n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / n_; }
  std::size_t size() const noexcept { return dim_ == 1 ? std::size_t(n_) : std::size_t(n_) * n_; }
  double cell_volume() const noexcept;
  double nyquist() const noexcept { return 0.5 * n_ / length_; }

  double coord(int i) const noexcept { return -0.5 * length_ + i * spacing(); }
  int signed_index(int k) const noexcept { return k < n_ / 2 ? k : k - n_; }
  double frequency(int k) const noexcept { return signed_index(k) / length_; }

  std::array<int, 2> axes(std::size_t flat) const noexcept {
    return {int(flat % n_), dim_ == 1 ? 0 : int(flat / n_)};
  }
  std::size_t flat(int i0, int i1 = 0) const noexcept { return std::size_t(i0) + std::size_t(i1) * n_; }
  // Euclidean norm of the frequency at a flat spectral index.
  double frequency_radius(std::size_t flat) const noexcept;

  bool operator==(const GridSpec&) const = default;

 private:
  int dim_ = 1;
  int n_ = 16;
  int log2n_ = 4;
  double length_ = 1.0;
};

namespace detail {

template <class Tag>
class Sampled {
 public:
  Sampled() = default;
  Sampled(GridSpec spec, std::vector<cplx> values) : spec_(spec), values_(std::move(values)) {
    require(values_.size() == spec_.size(), "value count does not match the grid");
    for (const cplx& v : values_)
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), "non-finite sample value");
  }
  static Sampled zeros(const GridSpec& spec) { return Sampled(spec, std::vector<cplx>(spec.size())); }

  const GridSpec& spec() const noexcept { return spec_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
  bool is_zero() const noexcept {
    for (const cplx& v : values_)
      if (v != cplx{}) return false;
    return true;
  }

  Sampled scaled(cplx c) const {
    std::vector<cplx> out(values_);
    for (cplx& v : out) v *= c;
    return Sampled(spec_, std::move(out));
  }
  friend Sampled operator+(const Sampled& a, const Sampled& b) {
    require(a.spec_ == b.spec_, "grid mismatch");
    std::vector<cplx> out(a.values_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.values_[i];
    return Sampled(a.spec_, std::move(out));
  }
  friend Sampled operator-(const Sampled& a, const Sampled& b) { return a + b.scaled(-1.0); }

 private:
  GridSpec spec_;
  std::vector<cplx> values_;
};

struct PhysicalTag {};
struct SpectralTag {};

}  // namespace detail

using GridFunction = detail::Sampled<detail::PhysicalTag>;
using SpectralFunction = detail::Sampled<detail::SpectralTag>;

GridFunction sample_function(const GridSpec& spec, const std::function<cplx(std::span<const double>)>& f);
SpectralFunction sample_spectrum(const GridSpec& spec, const std::function<cplx(std::span<const double>)>& f);

SpectralFunction forward_transform(const GridFunction& f);
GridFunction inverse_transform(const SpectralFunction& F);

// Pointwise product of a spectrum with a radial profile evaluated at |xi|.
SpectralFunction multiply_radial(const SpectralFunction& F, const std::function<double(double)>& profile);

double lp_norm(const GridFunction& f, double p);
double spectral_l2_norm(const SpectralFunction& F);
cplx moment(const GridFunction& f, std::span<const int> alpha);
GridFunction convolve(const GridFunction& f, const GridFunction& g);
// Riemann-sum inner product with conjugation on the second argument.
cplx inner_product(const GridFunction& f, const GridFunction& g);

// Largest |f| inside the outer 10% margin of the box divided by max |f|.
double margin_ratio(const GridFunction& f);
void require_margin_decay(const GridFunction& f, double relative_tolerance);

double relative_error(const std::vector<cplx>& a, const std::vector<cplx>& b);
double max_abs(const std::vector<cplx>& a);

// Little-endian binary: int64 dim, int64 N, float64 L, then (re, im) pairs.
void write_binary(std::ostream& os, const GridSpec& spec, const std::vector<cplx>& values);
void write_binary(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(std::istream& is);
GridFunction read_grid_function(const std::string& path);
std::string to_json(const GridFunction& f);

namespace binio {
void put_i64(std::ostream& os, std::int64_t v);
void put_f64(std::ostream& os, double v);
std::int64_t get_i64(std::istream& is);
double get_f64(std::istream& is);
}  // namespace binio

}  // namespace triharm

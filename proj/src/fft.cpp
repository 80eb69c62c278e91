#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace triharm::fft {
namespace {

// FFTW planning is not thread-safe, execution with new arrays is.
std::mutex plan_mutex;
std::map<std::pair<std::vector<int>, int>, fftw_plan> plan_cache;

fftw_plan plan_for(const std::vector<int>& dims, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(dims, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // FFTW wants the slowest dimension first.
  std::vector<int> rev(dims.rbegin(), dims.rend());
  std::size_t total = 1;
  for (int d : dims) total *= std::size_t(d);
  std::vector<std::complex<double>> scratch(total);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft(int(rev.size()), rev.data(), buf, buf,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_cache.emplace(std::move(key), plan);
  return plan;
}

}  // namespace

void transform(std::complex<double>* data, const std::vector<int>& dims, int sign) {
  fftw_plan plan = plan_for(dims, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace triharm::fft

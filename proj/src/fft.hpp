#pragma once

#include <complex>
#include <vector>

namespace triharm::fft {

// In-place unnormalized DFT over a row-major array whose first listed
// dimension varies fastest. sign = -1 is e^{-2 pi i}, +1 is e^{+2 pi i}.
void transform(std::complex<double>* data, const std::vector<int>& dims, int sign);

inline void transform(std::vector<std::complex<double>>& data, const std::vector<int>& dims, int sign) {
  transform(data.data(), dims, sign);
}

}  // namespace triharm::fft

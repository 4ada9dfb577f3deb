#pragma once

#include <complex>
#include <vector>

namespace dforge {

enum class FftSign { Forward = -1, Backward = +1 };

// Unnormalized complex DFT over a d-dimensional cubic grid with n points per
// axis, row-major (last axis fastest). Forward uses exp(-2 pi i k.j/n).
std::vector<std::complex<double>> fft_grid(const std::vector<std::complex<double>>& data, int d,
                                           int n, FftSign sign);

// Flat index of the frequency k (components may be negative) in an FFT grid.
std::size_t fft_index(const int* k, int d, int n);

}  // namespace dforge

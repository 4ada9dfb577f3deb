#include "dforge/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>

#include "dforge/error.hpp"

namespace dforge {

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {
    if (ptr == nullptr) throw NumericalError("fftw_alloc_complex failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

}  // namespace

std::vector<std::complex<double>> fft_grid(const std::vector<std::complex<double>>& data, int d,
                                           int n, FftSign sign) {
  if (d < 1 || d > 3 || n < 1) throw ConfigError("fft_grid: unsupported grid shape");
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  if (data.size() != total) throw ConfigError("fft_grid: data size does not match grid");

  FftwBuffer buf(total);
  static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
  std::memcpy(buf.ptr, data.data(), total * sizeof(fftw_complex));

  std::vector<int> dims(static_cast<std::size_t>(d), n);
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan(
      fftw_plan_dft(d, dims.data(), buf.ptr, buf.ptr, static_cast<int>(sign), FFTW_ESTIMATE));
  if (!plan) throw NumericalError("fftw_plan_dft failed");
  fftw_execute(plan.get());

  std::vector<std::complex<double>> out(total);
  std::memcpy(static_cast<void*>(out.data()), buf.ptr, total * sizeof(fftw_complex));
  return out;
}

std::size_t fft_index(const int* k, int d, int n) {
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) {
    int r = k[i] % n;
    if (r < 0) r += n;
    idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(r);
  }
  return idx;
}

}  // namespace dforge

#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "fockdelay/errors.hpp"
#include "fockdelay/params.hpp"

namespace fockdelay::detail {
namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void transform(std::vector<Complex>& data, int sign) {
  if (!is_power_of_two(data.size())) throw NumericalError("fft", "size must be a power of two");
  // FFTW picks codelets by buffer alignment, and the codelets round
  // differently; an fftw_malloc scratch copy keeps results reproducible.
  const std::size_t bytes = sizeof(fftw_complex) * data.size();
  auto* buffer = static_cast<fftw_complex*>(fftw_malloc(bytes));
  if (!buffer) throw NumericalError("fft", "allocation failed");
  std::memcpy(buffer, data.data(), bytes);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buffer, buffer, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::memcpy(static_cast<void*>(data.data()), buffer, bytes);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
  fftw_free(buffer);
}

}  // namespace

void fft_forward(std::vector<Complex>& data) { transform(data, FFTW_FORWARD); }

void fft_inverse(std::vector<Complex>& data) {
  transform(data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& x : data) x *= scale;
}

double bin_frequency(std::size_t k, std::size_t n, double dt) {
  const auto signed_k = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
  return 2.0 * kPi * signed_k / (static_cast<double>(n) * dt);
}

}  // namespace fockdelay::detail

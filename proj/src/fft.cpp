#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace superwave::detail {

namespace {
// The FFTW planner is not thread-safe; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, std::size_t nx, std::size_t ny,
                 FftDirection direction) {
  if (data.size() != nx * ny) throw std::invalid_argument("fft: size does not match shape");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  const int sign = direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = ny > 1 ? fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf, sign,
                                     FFTW_ESTIMATE)
                  : fftw_plan_dft_1d(static_cast<int>(nx), buf, buf, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("fft: planning failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace superwave::detail

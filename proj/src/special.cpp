#include "superwave/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace superwave {

double sinc(double x) noexcept {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double inverse_sinc(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("inverse_sinc: argument outside [0, 1]");
  if (y == 1.0) return 0.0;
  if (y == 0.0) return -std::numbers::pi;
  // sinc is increasing on [−π, 0].
  double lo = -std::numbers::pi, hi = 0.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (sinc(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

std::vector<double> bessel_series(int n_max, double x) {
  // j_n(x) = x^n/(2n+1)!! · (1 − x²/(2(2n+3)) + x⁴/(8(2n+3)(2n+5)) − …)
  std::vector<double> j(n_max + 1);
  double lead = 1.0;
  const double x2 = x * x;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) lead *= x / (2.0 * n + 1.0);
    const double a = 2.0 * n + 3.0, b = 2.0 * n + 5.0;
    j[n] = lead * (1.0 - x2 / (2.0 * a) + x2 * x2 / (8.0 * a * b));
  }
  return j;
}

}  // namespace

std::vector<double> spherical_bessel_j(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("spherical_bessel_j: n_max must be >= 0");
  if (!std::isfinite(x)) throw std::invalid_argument("spherical_bessel_j: non-finite argument");
  if (x < 0.0) {
    auto j = spherical_bessel_j(n_max, -x);
    for (int n = 1; n <= n_max; n += 2) j[n] = -j[n];
    return j;
  }
  if (x < 1e-3) return bessel_series(n_max, x);

  std::vector<double> j(n_max + 1);
  const double s = std::sin(x), c = std::cos(x);
  j[0] = s / x;
  if (n_max == 0) return j;
  if (x > n_max) {
    j[1] = s / (x * x) - c / x;
    for (int n = 1; n < n_max; ++n) j[n + 1] = (2.0 * n + 1.0) / x * j[n] - j[n - 1];
    return j;
  }

  const int start = n_max + 30 + static_cast<int>(std::sqrt(40.0 * (n_max + x)));
  double upper = 0.0, cur = 1.0;
  double norm = 0.0;
  for (int n = start; n >= 1; --n) {
    const double lower = (2.0 * n + 1.0) / x * cur - upper;
    if (n <= n_max) j[n] = cur;
    norm += (2.0 * n + 1.0) * cur * cur;
    upper = cur;
    cur = lower;
    if (std::abs(cur) > 1e100) {
      const double r = 1e-100;
      cur *= r;
      upper *= r;
      norm *= r * r;
      for (int m = n; m <= n_max; ++m) j[m] *= r;
    }
  }
  // cur now holds the unnormalized j_0.
  norm += cur * cur;
  double scale = 1.0 / std::sqrt(norm);
  const double j1_exact = s / (x * x) - c / x;
  // Fix the overall sign against whichever of j_0, j_1 is better conditioned.
  if (std::abs(j[0]) >= std::abs(j1_exact)) {
    if ((cur < 0) != (j[0] < 0)) scale = -scale;
  } else if ((j[1] < 0) != (j1_exact < 0)) {
    scale = -scale;
  }
  for (int n = 1; n <= n_max; ++n) j[n] *= scale;
  return j;
}

std::vector<double> legendre_p(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("legendre_p: n_max must be >= 0");
  std::vector<double> p(n_max + 1);
  p[0] = 1.0;
  if (n_max >= 1) p[1] = x;
  for (int n = 1; n < n_max; ++n)
    p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - n * p[n - 1]) / (n + 1.0);
  return p;
}

}  // namespace superwave

#pragma once

#include <vector>

namespace superwave {

/// sin(x)/x, with sinc(0) = 1.
double sinc(double x) noexcept;

/// The u ∈ [−π, 0] with sinc(u) = y, for y ∈ [0, 1] (bisection to |Δu| ≤ 1e-12).
double inverse_sinc(double y);

/// j_0(x) … j_{n_max}(x). Miller's downward recurrence normalized by the sum
/// rule Σ(2n+1)j_n² = 1, upward recurrence when |x| > n_max, series near 0.
std::vector<double> spherical_bessel_j(int n_max, double x);

/// P_0(x) … P_{n_max}(x) by the three-term recurrence.
std::vector<double> legendre_p(int n_max, double x);

}  // namespace superwave

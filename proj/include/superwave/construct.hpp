#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "superwave/field.hpp"

namespace superwave {

// ---- product function [cos(x/N) + i a sin(x/N)]^N ---------------------------

struct ProductFunctionParams {
  int N = 20;
  double a = 6.0;
};

struct FourierTerm {
  double k;
  cdouble c;
};

struct ProductSeries {
  std::vector<FourierTerm> terms;  // n = 0..N, k_n = 1 − 2n/N
  /// Σc_n and Σ|c_n| accumulated in 50-digit arithmetic, then rounded.
  double coefficient_sum = 0.0;
  double coefficient_abs_sum = 0.0;
};

/// c_n = C(N,n) ((1+a)/2)^{N−n} ((1−a)/2)^n at k_n = 1 − 2n/N.
ProductSeries product_fourier_coeffs(const ProductFunctionParams& params);

/// Samples with band descriptor k_max = 1. Evaluated in log-magnitude/phase form;
/// when the peak exceeds 1e300 the values are stored relative to exp(log_scale).
SampledField product_function(const ProductFunctionParams& params, const Grid1D& grid);

/// Centered grid of n samples over one period of the product function: πN for
/// even N (the k_n fall on bins), 2πN for odd N.
Grid1D product_period_grid(int N, std::size_t n);

/// Σ c_n e^{i k_n x} on the grid.
std::vector<cdouble> resum(const std::vector<FourierTerm>& terms, const Grid1D& grid);

// ---- forced zeros -------------------------------------------------------------

struct ForcedZeroDesign {
  double omega = 1.0;
  int n = 6, m = 6;
  std::vector<std::pair<double, double>> zeros;  // g ∝ Π_j (x − x_j)(y − y_j)
  /// Required ratio of the grid Nyquist wavenumber to the band edge Ω/2.
  double min_oversampling = 4.0;
};

/// f̃ = cos^n(πk_x/Ω) cos^m(πk_y/Ω) on |k_x|,|k_y| ≤ Ω/2, inverse transformed on
/// the grid (f(0,0) = 1), then multiplied by the zero factors in real space.
SampledField forced_zero_field(const ForcedZeroDesign& design, const Grid2D& grid);

// ---- canvas functions -------------------------------------------------------

struct CanvasDesign {
  double omega = 1.0;
  int m = 1;
  std::vector<cdouble> poly_coeffs{1.0};  // a_0 … a_{n−1}
  bool allow_non_square_integrable = false;
};

/// c_m(x) = sinc(Ωx/m)^m.
double canvas_envelope(double omega, int m, double x) noexcept;

/// g = f_n c_m with f_n = Σ a_k x^k; band descriptor Ω attached.
SampledField canvas_function(const CanvasDesign& design, const Grid1D& grid);

/// Least-squares polynomial (n_coeffs terms) such that f_n c_m matches the
/// target at n_points uniform points on [x1, x2].
std::vector<cdouble> fit_canvas_polynomial(const std::function<cdouble(double)>& target,
                                           double x1, double x2, int n_coeffs, double omega,
                                           int m, int n_points = 400);

// ---- Taylor matching --------------------------------------------------------

struct TaylorMatchDesign {
  int N = 0;
  double a = 0.0;
  std::vector<double> k;  // k_j = 1 − 2j/N, j = 0..N
  std::vector<double> X;  // X_j = Π_{i≠j} (k_i − a)/(k_i − k_j)
};

TaylorMatchDesign taylor_match_coeffs(int N, double a);

/// f_N = Σ X_j e^{i k_j x} with band descriptor 1.
SampledField taylor_field(const TaylorMatchDesign& design, const Grid1D& grid);

}  // namespace superwave

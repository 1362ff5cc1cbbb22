#include "superwave/construct.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "superwave/linalg.hpp"

namespace superwave {

namespace {

using mp = boost::multiprecision::cpp_bin_float_50;
constexpr double kLogOverflow = 690.7755278982137;  // ln(1e300)

void check_params(const ProductFunctionParams& p) {
  if (p.N < 1) throw std::invalid_argument("product function: N must be >= 1");
  if (!std::isfinite(p.a)) throw std::invalid_argument("product function: a must be finite");
}

}  // namespace

ProductSeries product_fourier_coeffs(const ProductFunctionParams& params) {
  check_params(params);
  const int N = params.N;
  const mp p = (mp(1) + mp(params.a)) / 2;
  const mp q = (mp(1) - mp(params.a)) / 2;
  ProductSeries out;
  mp sum = 0, abs_sum = 0;
  mp binom = 1;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) binom = binom * (N - n + 1) / n;
    const mp c = binom * pow(p, N - n) * pow(q, n);
    sum += c;
    abs_sum += abs(c);
    out.terms.push_back({1.0 - 2.0 * n / N, static_cast<double>(c)});
  }
  out.coefficient_sum = static_cast<double>(sum);
  out.coefficient_abs_sum = static_cast<double>(abs_sum);
  return out;
}

SampledField product_function(const ProductFunctionParams& params, const Grid1D& grid) {
  check_params(params);
  const double N = params.N;
  std::vector<double> log_mag(grid.size()), phase(grid.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.coord(i) / N;
    const double re = std::cos(t), im = params.a * std::sin(t);
    log_mag[i] = 0.5 * N * std::log(re * re + im * im);
    phase[i] = N * std::atan2(im, re);
    peak = std::max(peak, log_mag[i]);
  }
  const double log_scale = peak > kLogOverflow ? peak : 0.0;
  std::vector<cdouble> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    v[i] = std::polar(std::exp(log_mag[i] - log_scale), phase[i]);
  return SampledField(grid, std::move(v), BandDescriptor::rectangular(1.0), log_scale);
}

Grid1D product_period_grid(int N, std::size_t n) {
  if (N < 1) throw std::invalid_argument("product_period_grid: N must be >= 1");
  const double period = (N % 2 == 0 ? 1.0 : 2.0) * std::numbers::pi * N;
  return Grid1D::centered(n, period);
}

std::vector<cdouble> resum(const std::vector<FourierTerm>& terms, const Grid1D& grid) {
  std::vector<cdouble> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coord(i);
    cdouble s = 0.0;
    for (const auto& t : terms) s += t.c * std::polar(1.0, t.k * x);
    v[i] = s;
  }
  return v;
}

// ---- forced zeros ---------------------------------------------------------

SampledField forced_zero_field(const ForcedZeroDesign& d, const Grid2D& grid) {
  if (!(d.omega > 0.0)) throw std::invalid_argument("forced zeros: omega must be positive");
  if (d.n < 0 || d.m < 0) throw std::invalid_argument("forced zeros: cosine powers must be >= 0");
  const double pi = std::numbers::pi;
  const double need = d.min_oversampling * d.omega / 2.0;
  if (pi / grid.dx() < need || pi / grid.dy() < need)
    throw std::invalid_argument("forced zeros: grid Nyquist " +
                                std::to_string(pi / std::max(grid.dx(), grid.dy())) +
                                " is below " + std::to_string(d.min_oversampling) +
                                " x the band edge " + std::to_string(d.omega / 2.0));
  const double x_lo = grid.x(0), x_hi = grid.x(grid.nx() - 1);
  const double y_lo = grid.y(0), y_hi = grid.y(grid.ny() - 1);
  for (const auto& [xj, yj] : d.zeros)
    if (!(xj >= x_lo && xj <= x_hi && yj >= y_lo && yj <= y_hi))
      throw std::invalid_argument("forced zeros: zero (" + std::to_string(xj) + ", " +
                                  std::to_string(yj) + ") lies outside the grid");

  const std::size_t nx = grid.nx(), ny = grid.ny();
  const double dkx = 2 * pi / (nx * grid.dx()), dky = 2 * pi / (ny * grid.dy());
  const double edge = d.omega / 2.0 * (1.0 + 1e-12);
  std::vector<cdouble> data(grid.size());
  double dc = 0.0;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double ky = signed_bin(iy, ny) * dky;
    if (std::abs(ky) > edge) continue;
    const double wy = std::pow(std::cos(pi * ky / d.omega), d.m);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double kx = signed_bin(ix, nx) * dkx;
      if (std::abs(kx) > edge) continue;
      const double w = std::pow(std::cos(pi * kx / d.omega), d.n) * wy;
      dc += w;
      // Phase referenced to the grid origin so the field is centred on x = y = 0.
      data[grid.index(ix, iy)] = w * std::polar(1.0, kx * grid.origin_x() + ky * grid.origin_y());
    }
  }
  if (!(dc > 0.0))
    throw std::invalid_argument("forced zeros: no spectral bins inside the band; refine the grid");
  detail::fft_inplace(data, nx, ny, detail::FftDirection::backward);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      double factor = 1.0 / dc;
      for (const auto& [xj, yj] : d.zeros) factor *= (grid.x(ix) - xj) * (grid.y(iy) - yj);
      data[grid.index(ix, iy)] *= factor;
    }
  return SampledField(grid, std::move(data), BandDescriptor::rectangular(d.omega / 2.0));
}

// ---- canvas ---------------------------------------------------------------

double canvas_envelope(double omega, int m, double x) noexcept {
  const double u = omega * x / m;
  const double s = std::abs(u) < 1e-4 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
  return std::pow(s, m);
}

SampledField canvas_function(const CanvasDesign& d, const Grid1D& grid) {
  if (!(d.omega > 0.0)) throw std::invalid_argument("canvas: omega must be positive");
  if (d.m < 1) throw std::invalid_argument("canvas: order m must be >= 1");
  if (d.poly_coeffs.empty()) throw std::invalid_argument("canvas: polynomial needs a coefficient");
  const int n = static_cast<int>(d.poly_coeffs.size());
  if (d.m <= n + 1 && !d.allow_non_square_integrable)
    throw std::invalid_argument("canvas: m = " + std::to_string(d.m) + " with " +
                                std::to_string(n) +
                                " polynomial coefficients; m > n+1 is needed for a "
                                "square-integrable function (set the waiver to override)");
  if (std::numbers::pi / grid.spacing() <= d.omega)
    throw std::invalid_argument("canvas: grid does not resolve the band limit omega");
  std::vector<cdouble> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coord(i);
    cdouble p = 0.0;
    for (int k = n - 1; k >= 0; --k) p = p * x + d.poly_coeffs[k];
    v[i] = p * canvas_envelope(d.omega, d.m, x);
  }
  return SampledField(grid, std::move(v), BandDescriptor::rectangular(d.omega));
}

std::vector<cdouble> fit_canvas_polynomial(const std::function<cdouble(double)>& target,
                                           double x1, double x2, int n_coeffs, double omega,
                                           int m, int n_points) {
  if (!(x1 < x2)) throw std::invalid_argument("canvas fit: interval needs x1 < x2");
  if (n_coeffs < 1 || n_points < n_coeffs)
    throw std::invalid_argument("canvas fit: need n_points >= n_coeffs >= 1");
  const double scale = std::max(std::abs(x1), std::abs(x2));
  CMatrix a(n_points, n_coeffs);
  CVector b(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double x = x1 + (x2 - x1) * i / (n_points - 1);
    const double c = canvas_envelope(omega, m, x);
    double pw = 1.0;
    for (int k = 0; k < n_coeffs; ++k, pw *= x / scale) a(i, k) = c * pw;
    b(i) = target(x);
  }
  const auto sol = pinv_solve(a, b);
  std::vector<cdouble> coeffs(n_coeffs);
  for (int k = 0; k < n_coeffs; ++k) coeffs[k] = sol.x(k) / std::pow(scale, k);
  return coeffs;
}

// ---- Taylor matching ------------------------------------------------------

TaylorMatchDesign taylor_match_coeffs(int N, double a) {
  if (N < 1) throw std::invalid_argument("taylor match: N must be >= 1");
  if (!std::isfinite(a)) throw std::invalid_argument("taylor match: a must be finite");
  TaylorMatchDesign d;
  d.N = N;
  d.a = a;
  for (int j = 0; j <= N; ++j) d.k.push_back(1.0 - 2.0 * j / N);
  for (int j = 0; j <= N; ++j) {
    double x = 1.0;
    for (int i = 0; i <= N; ++i)
      if (i != j) x *= (d.k[i] - a) / (d.k[i] - d.k[j]);
    d.X.push_back(x);
  }
  return d;
}

SampledField taylor_field(const TaylorMatchDesign& d, const Grid1D& grid) {
  if (d.X.size() != d.k.size() || d.X.empty())
    throw std::invalid_argument("taylor field: malformed design");
  double total = 0.0;
  for (double x : d.X) total += std::abs(x);
  const double log_scale = total > 1e300 ? std::log(total) : 0.0;
  const double s = total > 1e300 ? 1.0 / total : 1.0;
  std::vector<cdouble> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coord(i);
    cdouble acc = 0.0;
    for (std::size_t j = 0; j < d.X.size(); ++j) acc += d.X[j] * s * std::polar(1.0, d.k[j] * x);
    v[i] = acc;
  }
  return SampledField(grid, std::move(v), BandDescriptor::rectangular(1.0), log_scale);
}

}  // namespace superwave

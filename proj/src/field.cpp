#include "superwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace superwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t axis_nx(const AnyGrid& g) {
  return std::visit(
      [](const auto& gr) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(gr)>, Grid1D>)
          return gr.size();
        else
          return gr.nx();
      },
      g);
}

std::size_t axis_ny(const AnyGrid& g) {
  if (const auto* g2 = std::get_if<Grid2D>(&g)) return g2->ny();
  return 1;
}

double axis_dx(const AnyGrid& g) {
  if (const auto* g2 = std::get_if<Grid2D>(&g)) return g2->dx();
  return std::get<Grid1D>(g).spacing();
}

double axis_dy(const AnyGrid& g) {
  if (const auto* g2 = std::get_if<Grid2D>(&g)) return g2->dy();
  return 1.0;
}

double axis_origin_x(const AnyGrid& g) {
  if (const auto* g2 = std::get_if<Grid2D>(&g)) return g2->origin_x();
  return std::get<Grid1D>(g).origin();
}

double axis_origin_y(const AnyGrid& g) {
  if (const auto* g2 = std::get_if<Grid2D>(&g)) return g2->origin_y();
  return 0.0;
}

// Walks groups of equal |k| from the top and returns the smallest group value
// whose strictly-outside power stays below the limit.
double smallest_k_below(std::vector<std::pair<double, double>> k_power, double limit) {
  std::sort(k_power.begin(), k_power.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double outside = 0.0;
  double result = k_power.empty() ? 0.0 : k_power.front().first;
  std::size_t i = 0;
  while (i < k_power.size()) {
    const double k = k_power[i].first;
    if (!(outside < limit)) break;
    result = k;
    double group = 0.0;
    const double tol = 1e-12 * std::max(1.0, k);
    while (i < k_power.size() && k - k_power[i].first <= tol) group += k_power[i++].second;
    outside += group;
  }
  return result;
}

void require_floor(double floor) {
  if (!(floor > 0.0 && floor < 1.0))
    throw std::invalid_argument("measured_bandlimit: floor must lie in (0, 1)");
}

}  // namespace

std::string_view to_string(BandShape shape) {
  switch (shape) {
    case BandShape::rectangular:
      return "rectangular";
    case BandShape::disk:
      return "disk";
    case BandShape::annular:
      return "annular";
  }
  return "unknown";
}

BandShape band_shape_from_string(std::string_view name) {
  if (name == "rectangular") return BandShape::rectangular;
  if (name == "disk") return BandShape::disk;
  if (name == "annular") return BandShape::annular;
  throw std::invalid_argument("unknown band shape '" + std::string(name) + "'");
}

BandDescriptor::BandDescriptor(BandShape shape, double k_max, double k_min)
    : shape_(shape), k_max_(k_max), k_min_(k_min) {
  if (!(k_max_ > 0.0) || !std::isfinite(k_max_))
    throw std::invalid_argument("BandDescriptor: k_max must be positive");
  if (!(k_min_ >= 0.0 && k_min_ <= k_max_))
    throw std::invalid_argument("BandDescriptor: annular band needs 0 <= k_min <= k_max");
}

BandDescriptor BandDescriptor::rectangular(double k_max) {
  return {BandShape::rectangular, k_max, 0.0};
}
BandDescriptor BandDescriptor::disk(double k_max) { return {BandShape::disk, k_max, 0.0}; }
BandDescriptor BandDescriptor::annular(double k_max, std::optional<double> k_min) {
  return {BandShape::annular, k_max, k_min.value_or(k_max)};
}

double BandDescriptor::second_moment_k2() const noexcept {
  const double a = k_max_ * k_max_;
  switch (shape_) {
    case BandShape::rectangular:
      return a / 6.0;  // <k_x^2> = k_max^2/3 on [-k_max, k_max]
    case BandShape::disk:
      return a / 8.0;
    case BandShape::annular:
      return (a + k_min_ * k_min_) / 8.0;
  }
  return a / 8.0;
}

std::size_t grid_size(const AnyGrid& grid) {
  return std::visit([](const auto& g) { return g.size(); }, grid);
}

// --- SampledField -----------------------------------------------------------

SampledField::SampledField(Grid1D grid, std::vector<cdouble> values,
                           std::optional<BandDescriptor> band, double log_scale)
    : SampledField(AnyGrid(grid), std::move(values), band, log_scale) {}

SampledField::SampledField(Grid2D grid, std::vector<cdouble> values,
                           std::optional<BandDescriptor> band, double log_scale)
    : SampledField(AnyGrid(grid), std::move(values), band, log_scale) {}

SampledField::SampledField(AnyGrid grid, std::vector<cdouble> values,
                           std::optional<BandDescriptor> band, double log_scale)
    : grid_(grid), values_(std::move(values)), band_(band), log_scale_(log_scale) {
  validate();
}

void SampledField::validate() const {
  if (values_.size() != grid_size(grid_))
    throw std::invalid_argument("SampledField: " + std::to_string(values_.size()) +
                                " values for a grid of " + std::to_string(grid_size(grid_)) +
                                " samples");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
      throw std::invalid_argument("SampledField: non-finite value at sample " + std::to_string(i));
  }
  if (!std::isfinite(log_scale_)) throw std::invalid_argument("SampledField: non-finite log_scale");
}

const Grid1D& SampledField::grid1d() const {
  if (const auto* g = std::get_if<Grid1D>(&grid_)) return *g;
  throw std::invalid_argument("SampledField: field is 2D, a 1D field is required");
}

const Grid2D& SampledField::grid2d() const {
  if (const auto* g = std::get_if<Grid2D>(&grid_)) return *g;
  throw std::invalid_argument("SampledField: field is 1D, a 2D field is required");
}

std::size_t SampledField::nx() const noexcept { return axis_nx(grid_); }
std::size_t SampledField::ny() const noexcept { return axis_ny(grid_); }
double SampledField::dx() const noexcept { return axis_dx(grid_); }

SampledField SampledField::with_values(std::vector<cdouble> values) const {
  return SampledField(grid_, std::move(values), band_, log_scale_);
}

SampledField SampledField::with_band(std::optional<BandDescriptor> band) const {
  return SampledField(grid_, values_, band, log_scale_);
}

double SampledField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SampledField::energy() const noexcept {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * axis_dx(grid_) * axis_dy(grid_);
}

// --- Spectrum ---------------------------------------------------------------

Spectrum::Spectrum(AnyGrid source_grid, std::vector<cdouble> values, double log_scale)
    : grid_(source_grid), values_(std::move(values)), log_scale_(log_scale) {
  if (values_.size() != grid_size(grid_))
    throw std::invalid_argument("Spectrum: value count does not match the source grid");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("Spectrum: non-finite value");
}

std::size_t Spectrum::nx() const noexcept { return axis_nx(grid_); }
std::size_t Spectrum::ny() const noexcept { return axis_ny(grid_); }

double Spectrum::dkx() const noexcept {
  return kTwoPi / (static_cast<double>(nx()) * axis_dx(grid_));
}
double Spectrum::dky() const noexcept {
  if (!is_2d()) return 1.0;
  return kTwoPi / (static_cast<double>(ny()) * axis_dy(grid_));
}
double Spectrum::kx(std::size_t ix) const noexcept {
  return static_cast<double>(signed_bin(ix, nx())) * dkx();
}
double Spectrum::ky(std::size_t iy) const noexcept {
  if (!is_2d()) return 0.0;
  return static_cast<double>(signed_bin(iy, ny())) * dky();
}
double Spectrum::cell() const noexcept { return dkx() * (is_2d() ? dky() : 1.0); }

double Spectrum::energy() const noexcept {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s * cell();
}

cdouble Spectrum::series_coefficient(std::size_t ix, std::size_t iy) const {
  const std::size_t n = nx(), m = ny();
  if (ix >= n || iy >= m) throw std::out_of_range("Spectrum: bin out of range");
  const double sx = std::sqrt(kTwoPi) / (static_cast<double>(n) * axis_dx(grid_));
  const double sy = is_2d() ? std::sqrt(kTwoPi) / (static_cast<double>(m) * axis_dy(grid_)) : 1.0;
  const double phase = -(kx(ix) * axis_origin_x(grid_) + ky(iy) * axis_origin_y(grid_));
  return values_[iy * n + ix] * sx * sy * std::polar(1.0, phase);
}

long signed_bin(std::size_t j, std::size_t n) noexcept {
  return j < (n + 1) / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

std::size_t bin_of(long s, std::size_t n) noexcept {
  const long nn = static_cast<long>(n);
  long r = s % nn;
  if (r < 0) r += nn;
  return static_cast<std::size_t>(r);
}

// --- transforms -------------------------------------------------------------

Spectrum forward_transform(const SampledField& field) {
  std::vector<cdouble> data(field.values().begin(), field.values().end());
  const std::size_t nx = field.nx(), ny = field.ny();
  detail::fft_inplace(data, nx, ny, detail::FftDirection::forward);
  double scale = axis_dx(field.grid()) / std::sqrt(kTwoPi);
  if (field.is_2d()) scale *= axis_dy(field.grid()) / std::sqrt(kTwoPi);
  for (auto& v : data) v *= scale;
  return Spectrum(field.grid(), std::move(data), field.log_scale());
}

SampledField inverse_transform(const Spectrum& spectrum) {
  std::vector<cdouble> data(spectrum.values().begin(), spectrum.values().end());
  const std::size_t nx = spectrum.nx(), ny = spectrum.ny();
  detail::fft_inplace(data, nx, ny, detail::FftDirection::backward);
  const auto& g = spectrum.source_grid();
  double scale = std::sqrt(kTwoPi) / (static_cast<double>(nx) * axis_dx(g));
  if (spectrum.is_2d()) scale *= std::sqrt(kTwoPi) / (static_cast<double>(ny) * axis_dy(g));
  for (auto& v : data) v *= scale;
  return SampledField(g, std::move(data), std::nullopt, spectrum.log_scale());
}

SampledField inverse_transform(const Spectrum& spectrum, const AnyGrid& grid) {
  if (!(grid == spectrum.source_grid()))
    throw std::invalid_argument("inverse_transform: grid does not match the spectrum's grid");
  return inverse_transform(spectrum);
}

double measured_bandlimit(const SampledField& field, double floor) {
  require_floor(floor);
  const Spectrum spec = forward_transform(field);
  const std::size_t nx = spec.nx(), ny = spec.ny();
  std::vector<std::pair<double, double>> kp;
  kp.reserve(spec.size());
  double total = 0.0;
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double p = std::norm(spec.values()[iy * nx + ix]);
      total += p;
      kp.emplace_back(std::hypot(spec.kx(ix), spec.ky(iy)), p);
    }
  if (!(total > 0.0)) throw std::invalid_argument("measured_bandlimit: field has zero power");
  return smallest_k_below(std::move(kp), floor * total);
}

std::array<double, 2> measured_bandlimit_axes(const SampledField& field, double floor) {
  require_floor(floor);
  const Spectrum spec = forward_transform(field);
  const std::size_t nx = spec.nx(), ny = spec.ny();
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  double total = 0.0;
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double p = std::norm(spec.values()[iy * nx + ix]);
      px[ix] += p;
      py[iy] += p;
      total += p;
    }
  if (!(total > 0.0)) throw std::invalid_argument("measured_bandlimit: field has zero power");
  std::vector<std::pair<double, double>> kx, ky;
  for (std::size_t ix = 0; ix < nx; ++ix) kx.emplace_back(std::abs(spec.kx(ix)), px[ix]);
  std::array<double, 2> out{smallest_k_below(std::move(kx), floor * total), 0.0};
  if (field.is_2d()) {
    for (std::size_t iy = 0; iy < ny; ++iy) ky.emplace_back(std::abs(spec.ky(iy)), py[iy]);
    out[1] = smallest_k_below(std::move(ky), floor * total);
  }
  return out;
}

std::vector<cdouble> spectral_derivative(const SampledField& field, Axis axis, int order) {
  if (order < 0) throw std::invalid_argument("spectral_derivative: order must be >= 0");
  if (axis == Axis::y && !field.is_2d())
    throw std::invalid_argument("spectral_derivative: y derivative of a 1D field");
  std::vector<cdouble> data(field.values().begin(), field.values().end());
  if (order == 0) return data;
  const std::size_t nx = field.nx(), ny = field.ny();
  detail::fft_inplace(data, nx, ny, detail::FftDirection::forward);
  const std::size_t n = axis == Axis::x ? nx : ny;
  const double d = axis == Axis::x ? axis_dx(field.grid()) : axis_dy(field.grid());
  const double dk = kTwoPi / (static_cast<double>(n) * d);
  std::vector<cdouble> mult(n);
  for (std::size_t j = 0; j < n; ++j) {
    const long s = signed_bin(j, n);
    if (order % 2 == 1 && n % 2 == 0 && static_cast<std::size_t>(-s) == n / 2) {
      mult[j] = 0.0;
      continue;
    }
    mult[j] = std::pow(cdouble(0.0, static_cast<double>(s) * dk), order);
  }
  const double inv = 1.0 / static_cast<double>(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix)
      data[iy * nx + ix] *= mult[axis == Axis::x ? ix : iy] * inv;
  detail::fft_inplace(data, nx, ny, detail::FftDirection::backward);
  return data;
}

}  // namespace superwave

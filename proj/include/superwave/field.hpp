#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "superwave/grid.hpp"

namespace superwave {

using cdouble = std::complex<double>;

enum class BandShape { rectangular, disk, annular };

std::string_view to_string(BandShape shape);
BandShape band_shape_from_string(std::string_view name);

/// Declared spectral support of a field.
///
/// `second_moment_k2()` is the k₂ entering the speckle intensity/phase-gradient
/// law: half the second moment of one Cartesian wavenumber component of a power
/// spectrum spread uniformly (by area) over the support. Thin ring: k_max²/4,
/// disk: k_max²/8.
class BandDescriptor {
 public:
  static BandDescriptor rectangular(double k_max);
  static BandDescriptor disk(double k_max);
  /// Annulus k_min ≤ |k| ≤ k_max; omitting k_min gives the zero-width ring at k_max.
  static BandDescriptor annular(double k_max, std::optional<double> k_min = std::nullopt);

  BandShape shape() const noexcept { return shape_; }
  double k_max() const noexcept { return k_max_; }
  double k_min() const noexcept { return k_min_; }
  double second_moment_k2() const noexcept;

  bool operator==(const BandDescriptor&) const = default;

 private:
  BandDescriptor(BandShape shape, double k_max, double k_min);

  BandShape shape_;
  double k_max_;
  double k_min_;
};

using AnyGrid = std::variant<Grid1D, Grid2D>;

std::size_t grid_size(const AnyGrid& grid);

/// Uniformly sampled complex scalar field on a 1D or 2D grid.
///
/// Immutable. When `log_scale()` is nonzero the physical values are
/// `exp(log_scale) * values()`; constructors use this to avoid overflow.
class SampledField {
 public:
  SampledField(Grid1D grid, std::vector<cdouble> values,
               std::optional<BandDescriptor> band = std::nullopt, double log_scale = 0.0);
  SampledField(Grid2D grid, std::vector<cdouble> values,
               std::optional<BandDescriptor> band = std::nullopt, double log_scale = 0.0);
  SampledField(AnyGrid grid, std::vector<cdouble> values,
               std::optional<BandDescriptor> band = std::nullopt, double log_scale = 0.0);

  bool is_2d() const noexcept { return std::holds_alternative<Grid2D>(grid_); }
  const AnyGrid& grid() const noexcept { return grid_; }
  const Grid1D& grid1d() const;
  const Grid2D& grid2d() const;

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t nx() const noexcept;
  std::size_t ny() const noexcept;
  double dx() const noexcept;

  std::span<const cdouble> values() const noexcept { return values_; }
  cdouble operator[](std::size_t i) const noexcept { return values_[i]; }

  const std::optional<BandDescriptor>& band() const noexcept { return band_; }
  double log_scale() const noexcept { return log_scale_; }

  /// Same grid, band and scale with new values.
  SampledField with_values(std::vector<cdouble> values) const;
  SampledField with_band(std::optional<BandDescriptor> band) const;

  double max_abs() const noexcept;
  /// Σ|f|² times the cell measure (dx or dx·dy).
  double energy() const noexcept;

 private:
  void validate() const;

  AnyGrid grid_;
  std::vector<cdouble> values_;
  std::optional<BandDescriptor> band_;
  double log_scale_ = 0.0;
};

/// Discrete spectrum of a sampled field, bins in FFT order (DC first, negative
/// wavenumbers in the upper half). Bin j sits at k = 2π·s(j)/(n·dx) with s(j)
/// the signed index. Values are scaled so that Σ|F|²·dk = Σ|f|²·dx.
class Spectrum {
 public:
  Spectrum(AnyGrid source_grid, std::vector<cdouble> values, double log_scale = 0.0);

  const AnyGrid& source_grid() const noexcept { return grid_; }
  bool is_2d() const noexcept { return std::holds_alternative<Grid2D>(grid_); }
  std::size_t nx() const noexcept;
  std::size_t ny() const noexcept;
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const cdouble> values() const noexcept { return values_; }
  double log_scale() const noexcept { return log_scale_; }

  double dkx() const noexcept;
  double dky() const noexcept;
  double kx(std::size_t ix) const noexcept;
  double ky(std::size_t iy) const noexcept;
  /// Cell measure dk (1D) or dkx·dky (2D).
  double cell() const noexcept;
  double energy() const noexcept;

  /// Coefficient c of c·e^{i k x} in the periodic extension of the source
  /// samples, referenced to x = 0 rather than to the grid origin.
  cdouble series_coefficient(std::size_t ix, std::size_t iy = 0) const;

 private:
  AnyGrid grid_;
  std::vector<cdouble> values_;
  double log_scale_ = 0.0;
};

/// Signed FFT index of bin j on an n-point axis.
long signed_bin(std::size_t j, std::size_t n) noexcept;
/// Bin index holding signed index s (wrapping).
std::size_t bin_of(long s, std::size_t n) noexcept;

Spectrum forward_transform(const SampledField& field);
SampledField inverse_transform(const Spectrum& spectrum);
/// Inverse onto a given grid; rejects a grid that does not match the spectrum's source.
SampledField inverse_transform(const Spectrum& spectrum, const AnyGrid& grid);

/// Smallest bin wavenumber K with spectral power outside |k| ≤ K below
/// floor × total power. 2D uses the radial wavenumber.
double measured_bandlimit(const SampledField& field, double floor);
/// Per-axis variant on the marginal powers; 1D returns {K, 0}.
std::array<double, 2> measured_bandlimit_axes(const SampledField& field, double floor);

enum class Axis { x, y };

/// ∂^order along `axis` by multiplication with (ik)^order. For odd orders the
/// Nyquist bin of an even-length axis is zeroed.
std::vector<cdouble> spectral_derivative(const SampledField& field, Axis axis = Axis::x,
                                         int order = 1);

}  // namespace superwave

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superwave/field.hpp"

namespace superwave {

enum class DerivativeScheme {
  spectral,  // multiply the spectrum by ik; exact for band-limited periodic samples
  central4,  // 4th-order central differences; the two outermost samples per side are invalid
};

DerivativeScheme derivative_scheme_from_string(std::string_view name);
std::string_view to_string(DerivativeScheme scheme);

struct LocalOptions {
  DerivativeScheme scheme = DerivativeScheme::spectral;
  /// Samples with |f| below this fraction of the reference magnitude are invalid.
  /// The reference is the global max for the spectral scheme and the max over the
  /// difference stencil for central4.
  double mask_threshold = 1e-6;
  /// Band limit k^s used for gamma; defaults to the field's band, else the
  /// measured band limit at floor 1e-9.
  std::optional<double> reference_bandlimit;
};

/// Per-sample log-derivative analysis of a field. In 2D, k_local = |∇χ| and
/// kappa_local = |∇ln ρ|; the signed components are kept in k_x, k_y, kappa_x,
/// kappa_y. In 1D k_local and kappa_local are signed and the component arrays
/// hold the same x values (y arrays empty).
struct LocalMap {
  AnyGrid grid = Grid1D(2, 1.0);
  std::vector<double> k_local;
  std::vector<double> kappa_local;
  std::vector<double> gamma;  // |kappa_local| / reference_bandlimit
  std::vector<std::uint8_t> valid;
  std::vector<double> k_x, k_y, kappa_x, kappa_y;
  double reference_bandlimit = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return valid.size(); }
  std::size_t valid_count() const noexcept;
};

/// Computes k = Im ∂ln f and κ = Re ∂ln f together.
LocalMap local_analysis(const SampledField& field, const LocalOptions& options = {});
inline LocalMap local_wavenumber(const SampledField& field, const LocalOptions& options = {}) {
  return local_analysis(field, options);
}
inline LocalMap local_growth(const SampledField& field, const LocalOptions& options = {}) {
  return local_analysis(field, options);
}

enum class FieldKind {
  amplitude,   // complex field f; irradiance is |f|²
  irradiance,  // real nonnegative samples I
};

/// Γ = |∇ln I| / irradiance_bandlimit. The map's kappa_local is the amplitude
/// growth rate (half the irradiance log-derivative) and its reference band limit
/// is irradiance_bandlimit/2, so gamma = |kappa_local|/reference holds as usual.
LocalMap supergrowth_strength(const SampledField& field, double irradiance_bandlimit,
                              FieldKind kind = FieldKind::amplitude,
                              const LocalOptions& options = {});

struct Region {
  std::size_t samples = 0;
  double x_min = 0, x_max = 0;
  double y_min = 0, y_max = 0;  // zero in 1D
};

struct SuperRegionReport {
  double superoscillating_fraction = 0.0;
  double supergrowing_fraction = 0.0;
  double reference_bandlimit = 0.0;
  std::size_t valid_samples = 0;
  /// Intervals (1D) or 4-connected components (2D) of valid samples.
  std::vector<Region> superoscillating;
  std::vector<Region> supergrowing;
};

/// Relative slack applied to every "exceeds the band limit" comparison, so a
/// tone sitting exactly at the limit does not count.
inline constexpr double kSuperSlack = 1e-9;

/// Superoscillating: |k_local| > bandlimit. Supergrowing: |kappa_local| > bandlimit
/// (equivalently Γ > 1 when bandlimit is the map's reference).
SuperRegionReport super_regions(const LocalMap& map, double bandlimit);
inline SuperRegionReport super_regions(const LocalMap& map) {
  return super_regions(map, map.reference_bandlimit);
}

/// Sign changes of real samples on a 1D grid, located by linear interpolation.
/// Exact zeros count once.
std::vector<double> zero_crossings(const Grid1D& grid, std::span<const double> values);

/// Local frequency of a real waveform from its zero spacing: π over the smallest
/// gap between consecutive crossings that both lie in [a, b]. Zero when there are
/// fewer than two. Used where Im ∂ln f is uninformative (real targets, or complex
/// signals of the form e^{iωt}·R(t) with R real).
double zero_spacing_frequency(const Grid1D& grid, std::span<const double> values, double a,
                              double b);

}  // namespace superwave

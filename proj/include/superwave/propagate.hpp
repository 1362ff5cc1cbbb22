#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "superwave/field.hpp"

namespace superwave {

enum class PropagationKernel {
  paraxial,   // exp(−i z k⊥²/(2k))
  helmholtz,  // exp(i z (√(k² − k⊥²) − k)); evanescent components decay
};

PropagationKernel propagation_kernel_from_string(std::string_view name);
std::string_view to_string(PropagationKernel kernel);

struct PropagationSetup {
  double wavelength = 1.0;
  double z = 0.0;
  PropagationKernel kernel = PropagationKernel::paraxial;
  /// Zero padding per axis before the transform; 1 means periodic boundaries.
  int pad_factor = 2;
};

struct PropagationResult {
  SampledField field;  // envelope relative to the carrier e^{ikz}, on the input grid
  /// Share of spectral power beyond 90% of the Nyquist wavenumber on either axis.
  double nyquist_leakage = 0;
  /// Share of the padded output power that falls outside the input window.
  double window_leakage = 0;
  std::vector<std::string> warnings;
};

/// Angular-spectrum propagation of a 1D or 2D field. Warns when either leakage
/// measure exceeds 1%.
PropagationResult propagate_field(const SampledField& field, const PropagationSetup& setup);

/// Several planes of the same input (a carpet scan); planes run concurrently.
std::vector<PropagationResult> propagate_planes(const SampledField& field,
                                                const PropagationSetup& setup,
                                                const std::vector<double>& z_values,
                                                unsigned threads = 1);

/// Fraunhofer far field of an aperture field: its angular spectrum, bin k
/// standing for the direction sin θ = k/k₀.
Spectrum far_field(const SampledField& aperture);

// ---- quasiperiodic hole arrays ---------------------------------------------

struct HoleArraySpec {
  /// Even rotational order of the tiling; order/2 grids (10 → pentagrid).
  int symmetry_order = 10;
  double hole_diameter = 0.2;
  double min_separation = 0.8;
  double aperture_diameter = 25.0;
  /// 0 keeps every hole inside the aperture; otherwise the `hole_count` holes
  /// nearest the center, and fewer available is an error.
  std::size_t hole_count = 0;
  std::uint64_t seed = 1;
};

struct HoleArray {
  std::vector<double> x, y;  // hole centers
  double edge_length = 0;    // rhombus edge of the underlying tiling
  double min_pairwise_separation = 0;
  SampledField mask;  // 1 inside holes, 0 elsewhere
};

/// Vertices of an m-grid de Bruijn rhombus tiling (m = order/2, seeded grid
/// offsets), scaled so the short diagonal of the narrowest rhombus equals the
/// minimum separation, then thinned greedily in a seeded random order so the
/// separation holds exactly. Holes must lie fully inside the aperture.
HoleArray quasiperiodic_mask(const HoleArraySpec& spec, const Grid2D& grid);

// ---- hot spots -------------------------------------------------------------

struct Hotspot {
  double x = 0, y = 0;
  double peak = 0;
  double fwhm = 0;
  bool sub_diffraction = false;  // fwhm < λ/(2NA)
};

struct HotspotReport {
  std::vector<Hotspot> spots;  // by decreasing peak
  double diffraction_limit = 0;  // λ/(2NA)
  double wavelength = 0;
};

/// Local maxima above threshold × global max; FWHM is twice the mean half-max
/// radius over 16 rays (bilinear interpolation). A flat field gives no spots.
/// Spots whose half-max contour reaches the grid edge are dropped.
HotspotReport find_hotspots(const SampledField& irradiance, double threshold, double wavelength,
                            double numerical_aperture);

/// |ψ|² as a real-valued field.
SampledField irradiance(const SampledField& field);

}  // namespace superwave

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "superwave/field.hpp"

namespace superwave {

enum class GratingKind { binary, sinusoidal, blazed };

GratingKind grating_kind_from_string(std::string_view name);
std::string_view to_string(GratingKind kind);

struct HologramPlan {
  Grid2D grid;  // one sample per SLM pixel
  std::vector<double> M;    // modulation depth in [0, 1]
  std::vector<double> Phi;  // Φ = χ − πM
  double pitch = 0;         // grating period Λx
  GratingKind kind = GratingKind::blazed;
  double amplitude_scale = 1;  // max |target|; A = |target|/scale
};

/// M = 1 + sinc⁻¹(A)/π, Φ = χ − πM. A must lie in [0, 1].
HologramPlan encode_hologram(const Grid2D& grid, std::span<const double> A,
                             std::span<const double> chi, double pitch,
                             GratingKind kind = GratingKind::blazed);
/// Normalizes |target| by its max (kept in amplitude_scale) and encodes.
HologramPlan encode_hologram(const SampledField& target, double pitch,
                             GratingKind kind = GratingKind::blazed);

/// −sinc(πM − π)·e^{i(Φ + πM)} per pixel (blazed plans only). For an encoded
/// target this is −A e^{iχ}: the target up to a global sign.
SampledField first_order_field(const HologramPlan& plan);

/// Phase map with θ = Φ + 2πx/Λx:
///   binary      M·π(1 + sign(sin θ))      ∈ {0, 2πM}
///   sinusoidal  M·π(1 + sin θ)/2
///   blazed      M·mod(θ, 2π)              ∈ [0, 2πM)
/// Requires at least 4 samples per period.
std::vector<double> render_grating(const HologramPlan& plan);
/// Same grating on another grid (typically finer than the SLM pixels); each
/// sample takes M and Φ from the nearest plan pixel, the carrier is evaluated
/// at the sample itself.
std::vector<double> render_grating(const HologramPlan& plan, const Grid2D& grid);

/// Uniform 8-bit quantizer on [0, 2π]: level round(φ·255/2π), error ≤ π/255.
std::vector<std::uint8_t> quantize_8bit(std::span<const double> phase);
std::vector<double> dequantize_8bit(std::span<const std::uint8_t> levels);

/// Binary PGM (P5), rows top to bottom in grid order.
void write_pgm(const std::filesystem::path& path, std::size_t nx, std::size_t ny,
               std::span<const std::uint8_t> levels);

/// Illuminates the phase map (uniform plane wave unless given), takes the far
/// field by FFT, keeps |k_x − 2π/Λx| ≤ π/Λx and shifts that window back to
/// baseband. Rejects a pitch too coarse for the illumination's band.
SampledField simulate_first_order(std::span<const double> phase_map, const Grid2D& grid,
                                  double pitch, const SampledField* illumination = nullptr);

struct SimulationOptions {
  /// Odd number of render samples per pixel along x. 1 simulates the
  /// pixelated map itself, whose sampled sawtooth aliases strongly for M < 1;
  /// larger values approach the continuous grating.
  int oversample = 9;
  bool quantize = false;  // pass the rendered map through the 8-bit quantizer
  double band_floor = 1e-6;  // power floor for the order-overlap check
};

/// Renders the plan on a grid oversampled along x, simulates it under uniform
/// illumination and returns the first order at the plan's pixel centers.
/// Rejects a pitch whose first-order window cannot hold the encoded target's
/// band, quoting the bound. The FFT is periodic: a window that is not a whole
/// number of pitches wide adds an edge artifact.
SampledField simulate_first_order(const HologramPlan& plan, const SimulationOptions& options = {});

/// Largest pitch whose first-order window holds the field's x-band (measured at
/// the given power floor): Λx < π/K_x.
double max_pitch_for(const SampledField& target, double floor = 1e-6);

/// Laguerre–Gauss mode (r√2/w)^{|m|} L_p^{|m|}(2r²/w²) e^{−r²/w²} e^{imθ}.
SampledField laguerre_gauss(const Grid2D& grid, int p, int m, double waist);

}  // namespace superwave

#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "superwave/field.hpp"

namespace superwave {

struct SpeckleModel {
  BandDescriptor spectrum = BandDescriptor::disk(std::numbers::pi / 2);
  int n_plane_waves = 1024;  // Gaussian statistics want ≥ 16; not enforced
  double mean_intensity = 1.0;
  std::uint64_t seed = 1;
};

struct PlaneWave {
  double kx = 0, ky = 0;  // snapped to the grid's frequency bins
  cdouble amplitude;      // complex Gaussian, E|a|² = I_o/n
};

/// The waves of one realization: directions uniform on the ring (annular) or by
/// area over the disk/annulus, wavevectors snapped to the nearest bin so the
/// realization is exactly periodic on the grid. Realization r draws from the
/// independent substream (seed, r).
std::vector<PlaneWave> speckle_waves(const SpeckleModel& model, const Grid2D& grid,
                                     std::uint64_t realization = 0);

/// ψ(r) = Σ a_j e^{i k_j·r}, synthesized with one inverse FFT.
SampledField generate_speckle(const SpeckleModel& model, const Grid2D& grid,
                              std::uint64_t realization = 0);

/// P(I, g) = (I g / (I_o² k₂)) exp(−(I/I_o)(1 + g²/2k₂)), g = |∇χ|.
double joint_pdf_theory(double I, double grad_chi, double I_o, double k2);
/// Marginal over I: 4k₂ g / (2k₂ + g²)².
double gradient_pdf_theory(double grad_chi, double k2);
/// P(g > k_max) = 2k₂/(2k₂ + k_max²): 1/3 for the thin ring, 1/5 for the disk.
double superoscillatory_fraction_theory(const BandDescriptor& spectrum);

struct HistogramSpec {
  int intensity_bins = 40;
  int gradient_bins = 40;
  double intensity_max = 8.0;  // in units of I_o
  double gradient_max = 4.0;   // in units of k_max
};

struct MeasureOptions {
  double mask_threshold = 1e-6;  // relative to each realization's max |ψ|
  HistogramSpec histogram;
  double z = 1.96;  // confidence half-width multiplier
};

struct SpeckleStats {
  std::size_t realizations = 0;
  std::size_t samples = 0;
  std::size_t valid_samples = 0;
  double k_max = 0, k2 = 0, I_o = 0;

  double superoscillating_fraction = 0;  // |∇χ| > k_max
  double supergrowing_fraction = 0;      // Γ = |∇I|/(I·2k_max) > 1
  /// Binomial half-widths with one independent sample per (π/k_max)² cell.
  double superoscillating_half_width = 0;
  double supergrowing_half_width = 0;
  double effective_samples = 0;
  /// Superoscillating fraction with the mask threshold raised 100-fold.
  double superoscillating_fraction_strict_mask = 0;

  double mean_intensity = 0;     // average of per-realization spatial means
  double mean_intensity_se = 0;  // standard error across realizations

  HistogramSpec histogram_spec;
  /// Probability mass per (I, g) bin, row-major with the intensity index slow;
  /// mass beyond the ranges is in histogram_overflow. Total mass is 1.
  std::vector<double> histogram;
  double histogram_overflow = 0;
  /// Total-variation distance between the histogram and the bin-integrated joint law.
  double tv_distance = 0;
};

/// Order-independent accumulation of realizations; merge() in a fixed order
/// gives bit-identical results for any thread count.
class SpeckleAccumulator {
 public:
  SpeckleAccumulator(const BandDescriptor& spectrum, double mean_intensity,
                     MeasureOptions options = {});

  void add(const SampledField& realization);
  void merge(const SpeckleAccumulator& other);
  SpeckleStats stats() const;

 private:
  BandDescriptor spectrum_;
  double I_o_;
  MeasureOptions options_;
  std::size_t samples_ = 0, valid_ = 0, super_osc_ = 0, super_grow_ = 0;
  std::size_t strict_valid_ = 0, strict_super_osc_ = 0;
  std::size_t overflow_ = 0;
  std::vector<std::size_t> counts_;
  std::vector<double> realization_means_;
  double cell_area_ = 0;  // grid cell area of the realizations seen
};

SpeckleStats measure_fractions(std::span<const SampledField> realizations,
                               const BandDescriptor& spectrum, double mean_intensity,
                               const MeasureOptions& options = {});

/// Generates and measures `count` realizations without holding them all.
SpeckleStats run_speckle_ensemble(const SpeckleModel& model, const Grid2D& grid,
                                  std::size_t count, unsigned threads = 1,
                                  const MeasureOptions& options = {});

}  // namespace superwave

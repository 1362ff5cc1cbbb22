#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "superwave/field.hpp"
#include "superwave/optimize.hpp"

namespace superwave {

/// Additive white Gaussian noise. `sigma` is the RMS noise amplitude:
/// E|n|² = σ², split evenly over real and imaginary parts of complex samples.
struct NoiseModel {
  double sigma = 0;
  std::uint64_t seed = 1;

  /// σ = reference·10^(dB/20): "dB" is an amplitude ratio.
  static NoiseModel relative_db(double db, double reference_amplitude, std::uint64_t seed = 1);
};

struct NoisyRecord {
  std::vector<cdouble> values;
  double sigma = 0;
  /// 20·log10(RMS of the noise actually drawn / reference); NaN without a reference.
  double achieved_db = 0;
};

/// Stream `stream` of the model's seed; identical inputs give identical output.
NoisyRecord add_noise(std::span<const cdouble> signal, const NoiseModel& model,
                      std::uint64_t stream = 0, double reference_amplitude = 0);
std::vector<double> add_noise(std::span<const double> signal, const NoiseModel& model,
                              std::uint64_t stream = 0);

enum class AveragingMode {
  coherent,  // average records sample by sample, then project
  spectral,  // project each record, average tooth magnitudes, keep the mean phase
};
enum class ProjectionMode {
  exact,    // least squares at the exact tooth frequencies
  fft_bin,  // nearest FFT bin of the record
};

AveragingMode averaging_mode_from_string(std::string_view name);
std::string_view to_string(AveragingMode mode);
ProjectionMode projection_mode_from_string(std::string_view name);
std::string_view to_string(ProjectionMode mode);

struct RecoverOptions {
  AveragingMode averaging = AveragingMode::coherent;
  ProjectionMode projection = ProjectionMode::exact;
};

struct RecoveryReport {
  CombSpec comb;  // teeth with recovered amplitudes
  std::vector<cdouble> reconstructed;  // on the record grid
  std::size_t averages = 0;
  /// Largest |G_jk|/√(G_jj G_kk), j ≠ k, of the tooth Gram matrix on the record;
  /// zero up to rounding for an integer number of comb periods.
  double leakage = 0;
};

/// Projects the records onto the comb's known teeth and rebuilds ψ from them.
/// Only the frequencies of `comb` are used. Recovered amplitudes are referenced
/// to x = 0 with zero delays.
RecoveryReport spectral_filter_recover(const Grid1D& grid,
                                       const std::vector<std::vector<cdouble>>& records,
                                       const CombSpec& comb, const RecoverOptions& options = {});

/// ∫|ψ̂ − ψ|² / ∫|ψ|² over [x1, x2], by the trapezoid rule on `samples` points.
double reconstruction_mse(const CombSpec& recovered, const CombSpec& truth, double x1, double x2,
                          std::size_t samples = 2049);

// ---- the buried-superoscillation experiment ---------------------------------

struct RecoveryExperiment {
  int K = 11;
  double Omega = 1.0;
  double omega_min = -0.5;
  double target_bandwidth = 2.0;  // target sin(bx)/(bx)
  std::size_t fit_points = 64;    // uniform on |x| ≤ π/Ω
  int periods = 12;               // record length in comb periods 2π(K−1)/Ω
  std::size_t samples_per_period = 2048;
  double noise_db = 17.0;         // above a_so = max |ψ| on the fit window
  int averages = 10;
  std::uint64_t seed = 1;
  RecoverOptions options;
  /// Replaces the fitted sinc comb when nonempty. Its teeth must be equally
  /// spaced; the record then spans whole periods 2π/Δω.
  CombSpec comb;
  /// Half-width of the MSE and a_so window; 0 means π/Ω.
  double window = 0;
};

struct ExperimentResult {
  CombSpec truth;
  RecoveryReport report;
  double a_so = 0;
  double sigma = 0;
  double achieved_db = 0;  // of the first record
  double mse = 0;          // over the fit window
};

/// One trial; trial t draws its noise from streams t·2²⁴ + j.
ExperimentResult run_recovery_experiment(const RecoveryExperiment& experiment,
                                         std::uint64_t trial = 0);
/// MSE of trials 0 … count−1, in trial order for any thread count.
std::vector<double> run_recovery_trials(const RecoveryExperiment& experiment, std::size_t count,
                                        unsigned threads = 1);

/// The noiseless comb of the experiment: `comb` if given, else the sinc target
/// fitted on |x| ≤ π/Ω.
CombSpec experiment_comb(const RecoveryExperiment& experiment);

}  // namespace superwave

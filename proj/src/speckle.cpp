#include "superwave/speckle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "superwave/local_analysis.hpp"
#include "superwave/parallel.hpp"
#include "superwave/random.hpp"

namespace superwave {

namespace {

constexpr double kPi = std::numbers::pi;

void check_spectrum(const BandDescriptor& s) {
  if (s.shape() == BandShape::rectangular)
    throw std::invalid_argument("speckle: spectrum must be disk or annular");
}

}  // namespace

std::vector<PlaneWave> speckle_waves(const SpeckleModel& model, const Grid2D& grid,
                                     std::uint64_t realization) {
  check_spectrum(model.spectrum);
  if (model.n_plane_waves < 1) throw std::invalid_argument("speckle: need at least one plane wave");
  if (!(model.mean_intensity > 0.0)) throw std::invalid_argument("speckle: mean intensity must be positive");
  const double kmax = model.spectrum.k_max();
  if (!(grid.dx() < kPi / kmax && grid.dy() < kPi / kmax))
    throw std::invalid_argument("speckle: grid does not resolve k_max (need dx, dy < π/k_max)");

  const double dkx = 2 * kPi / (grid.nx() * grid.dx());
  const double dky = 2 * kPi / (grid.ny() * grid.dy());
  const double kmin = model.spectrum.k_min();
  const bool ring = model.spectrum.shape() == BandShape::annular && kmin == kmax;
  const double scale = std::sqrt(model.mean_intensity / model.n_plane_waves / 2.0);

  CounterRng rng(model.seed, realization);
  boost::random::normal_distribution<double> normal;
  std::vector<PlaneWave> waves(model.n_plane_waves);
  for (auto& w : waves) {
    const double theta = 2 * kPi * rng.uniform();
    const double u = rng.uniform();
    const double k = ring ? kmax : std::sqrt(kmin * kmin + u * (kmax * kmax - kmin * kmin));
    w.kx = std::round(k * std::cos(theta) / dkx) * dkx;
    w.ky = std::round(k * std::sin(theta) / dky) * dky;
    const double re = normal(rng), im = normal(rng);
    w.amplitude = scale * cdouble(re, im);
  }
  return waves;
}

SampledField generate_speckle(const SpeckleModel& model, const Grid2D& grid,
                              std::uint64_t realization) {
  const auto waves = speckle_waves(model, grid, realization);
  const std::size_t nx = grid.nx(), ny = grid.ny();
  const double dkx = 2 * kPi / (nx * grid.dx());
  const double dky = 2 * kPi / (ny * grid.dy());
  std::vector<cdouble> data(nx * ny);
  for (const auto& w : waves) {
    const auto ix = bin_of(std::lround(w.kx / dkx), nx);
    const auto iy = bin_of(std::lround(w.ky / dky), ny);
    // e^{ik·r} at r = origin + (i dx, j dy) is e^{ik·origin} times a DFT kernel.
    data[iy * nx + ix] += w.amplitude * std::polar(1.0, w.kx * grid.origin_x() + w.ky * grid.origin_y());
  }
  detail::fft_inplace(data, nx, ny, detail::FftDirection::backward);
  return SampledField(grid, std::move(data), model.spectrum);
}

double joint_pdf_theory(double I, double g, double I_o, double k2) {
  if (!(I_o > 0.0) || !(k2 > 0.0)) throw std::invalid_argument("joint_pdf_theory: I_o and k2 must be positive");
  if (I < 0.0 || g < 0.0) return 0.0;
  return I * g / (I_o * I_o * k2) * std::exp(-(I / I_o) * (1.0 + g * g / (2.0 * k2)));
}

double gradient_pdf_theory(double g, double k2) {
  if (!(k2 > 0.0)) throw std::invalid_argument("gradient_pdf_theory: k2 must be positive");
  if (g < 0.0) return 0.0;
  const double d = 2.0 * k2 + g * g;
  return 4.0 * k2 * g / (d * d);
}

double superoscillatory_fraction_theory(const BandDescriptor& spectrum) {
  check_spectrum(spectrum);
  const double k2 = spectrum.second_moment_k2();
  const double kmax = spectrum.k_max();
  return 2.0 * k2 / (2.0 * k2 + kmax * kmax);
}

// ---- accumulation ------------------------------------------------------------

SpeckleAccumulator::SpeckleAccumulator(const BandDescriptor& spectrum, double mean_intensity,
                                       MeasureOptions options)
    : spectrum_(spectrum), I_o_(mean_intensity), options_(options) {
  check_spectrum(spectrum);
  if (!(mean_intensity > 0.0)) throw std::invalid_argument("speckle: mean intensity must be positive");
  const auto& h = options_.histogram;
  if (h.intensity_bins < 1 || h.gradient_bins < 1 || !(h.intensity_max > 0) || !(h.gradient_max > 0))
    throw std::invalid_argument("speckle: histogram bins and ranges must be positive");
  if (!(options_.mask_threshold >= 0.0) || !(options_.mask_threshold * 100.0 < 1.0))
    throw std::invalid_argument("speckle: mask threshold must lie in [0, 0.01)");
  counts_.assign(static_cast<std::size_t>(h.intensity_bins) * h.gradient_bins, 0);
}

void SpeckleAccumulator::add(const SampledField& field) {
  if (!field.is_2d()) throw std::invalid_argument("speckle: realizations must be 2D");
  const double kmax = spectrum_.k_max();
  LocalOptions lo;
  lo.mask_threshold = options_.mask_threshold;
  lo.reference_bandlimit = kmax;
  const auto m = local_analysis(field, lo);
  const auto f = field.values();
  const double strict = 100.0 * options_.mask_threshold * field.max_abs();
  const double ls = std::exp(2.0 * field.log_scale());
  const auto& h = options_.histogram;
  const double slack = kmax * (1.0 + kSuperSlack);

  double sum_I = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double I = std::norm(f[i]) * ls;
    sum_I += I;
    if (!m.valid[i]) continue;
    ++valid_;
    const double g = m.k_local[i];
    if (g > slack) ++super_osc_;
    if (m.kappa_local[i] > slack) ++super_grow_;
    if (std::abs(f[i]) >= strict) {
      ++strict_valid_;
      if (g > slack) ++strict_super_osc_;
    }
    const double u = I / I_o_ / h.intensity_max * h.intensity_bins;
    const double v = g / kmax / h.gradient_max * h.gradient_bins;
    if (u >= h.intensity_bins || v >= h.gradient_bins) {
      ++overflow_;
    } else {
      ++counts_[static_cast<std::size_t>(u) * h.gradient_bins + static_cast<std::size_t>(v)];
    }
  }
  samples_ += f.size();
  realization_means_.push_back(sum_I / static_cast<double>(f.size()));
  const auto& g = field.grid2d();
  cell_area_ = g.dx() * g.dy();
}

void SpeckleAccumulator::merge(const SpeckleAccumulator& o) {
  if (!(o.spectrum_ == spectrum_) || o.I_o_ != I_o_ || o.counts_.size() != counts_.size())
    throw std::invalid_argument("speckle: cannot merge accumulators with different settings");
  samples_ += o.samples_;
  valid_ += o.valid_;
  super_osc_ += o.super_osc_;
  super_grow_ += o.super_grow_;
  strict_valid_ += o.strict_valid_;
  strict_super_osc_ += o.strict_super_osc_;
  overflow_ += o.overflow_;
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
  realization_means_.insert(realization_means_.end(), o.realization_means_.begin(),
                            o.realization_means_.end());
  if (o.cell_area_ > 0) cell_area_ = o.cell_area_;
}

namespace {

// Mass of the joint law (normalized units u = I/I_o, v = g/k_max, κ = k₂/k_max²)
// over [u0,u1]×[v0,v1]: the u integral is closed form, v by 20-point Gauss.
double bin_mass(double u0, double u1, double v0, double v1, double kappa) {
  auto inner = [&](double v) {
    const double a = 1.0 + v * v / (2.0 * kappa);
    auto prim = [&](double u) { return -(u / a + 1.0 / (a * a)) * std::exp(-a * u); };
    return v / kappa * (prim(u1) - prim(u0));
  };
  return boost::math::quadrature::gauss<double, 20>::integrate(inner, v0, v1);
}

}  // namespace

SpeckleStats SpeckleAccumulator::stats() const {
  SpeckleStats s;
  s.realizations = realization_means_.size();
  s.samples = samples_;
  s.valid_samples = valid_;
  s.k_max = spectrum_.k_max();
  s.k2 = spectrum_.second_moment_k2();
  s.I_o = I_o_;
  s.histogram_spec = options_.histogram;
  if (valid_ == 0) return s;

  const double n = static_cast<double>(valid_);
  s.superoscillating_fraction = super_osc_ / n;
  s.supergrowing_fraction = super_grow_ / n;
  s.superoscillating_fraction_strict_mask =
      strict_valid_ ? static_cast<double>(strict_super_osc_) / strict_valid_ : 0.0;
  const double grain = (kPi / s.k_max) * (kPi / s.k_max);
  s.effective_samples = n * cell_area_ / grain;
  auto half = [&](double p) { return options_.z * std::sqrt(p * (1 - p) / s.effective_samples); };
  s.superoscillating_half_width = half(s.superoscillating_fraction);
  s.supergrowing_half_width = half(s.supergrowing_fraction);

  double mean = 0.0;
  for (double v : realization_means_) mean += v;
  mean /= static_cast<double>(s.realizations);
  s.mean_intensity = mean;
  if (s.realizations > 1) {
    double var = 0.0;
    for (double v : realization_means_) var += (v - mean) * (v - mean);
    var /= static_cast<double>(s.realizations - 1);
    s.mean_intensity_se = std::sqrt(var / static_cast<double>(s.realizations));
  }

  const auto& h = options_.histogram;
  const double kappa = s.k2 / (s.k_max * s.k_max);
  const double du = h.intensity_max / h.intensity_bins, dv = h.gradient_max / h.gradient_bins;
  s.histogram.resize(counts_.size());
  s.histogram_overflow = overflow_ / n;
  double theory_in = 0.0, tv = 0.0;
  for (int a = 0; a < h.intensity_bins; ++a)
    for (int b = 0; b < h.gradient_bins; ++b) {
      const std::size_t i = static_cast<std::size_t>(a) * h.gradient_bins + b;
      s.histogram[i] = counts_[i] / n;
      const double t = bin_mass(a * du, (a + 1) * du, b * dv, (b + 1) * dv, kappa);
      theory_in += t;
      tv += std::abs(s.histogram[i] - t);
    }
  tv += std::abs(s.histogram_overflow - (1.0 - theory_in));
  s.tv_distance = 0.5 * tv;
  return s;
}

SpeckleStats measure_fractions(std::span<const SampledField> realizations,
                               const BandDescriptor& spectrum, double mean_intensity,
                               const MeasureOptions& options) {
  if (realizations.empty()) throw std::invalid_argument("speckle: need at least one realization");
  SpeckleAccumulator acc(spectrum, mean_intensity, options);
  for (const auto& f : realizations) acc.add(f);
  return acc.stats();
}

SpeckleStats run_speckle_ensemble(const SpeckleModel& model, const Grid2D& grid,
                                  std::size_t count, unsigned threads,
                                  const MeasureOptions& options) {
  if (count == 0) throw std::invalid_argument("speckle: need at least one realization");
  std::vector<SpeckleAccumulator> parts(count, SpeckleAccumulator(model.spectrum, model.mean_intensity, options));
  parallel_for(count, threads, [&](std::size_t r) { parts[r].add(generate_speckle(model, grid, r)); });
  SpeckleAccumulator total(model.spectrum, model.mean_intensity, options);
  for (const auto& p : parts) total.merge(p);
  return total.stats();
}

}  // namespace superwave

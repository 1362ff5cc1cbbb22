#include "superwave/recover.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "superwave/linalg.hpp"
#include "superwave/parallel.hpp"
#include "superwave/random.hpp"

namespace superwave {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<cdouble> project_exact(const Grid1D& grid, std::span<const cdouble> y,
                                   const std::vector<double>& w) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto K = static_cast<Eigen::Index>(w.size());
  CMatrix M(n, K);
  CVector b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.coord(static_cast<std::size_t>(i));
    for (Eigen::Index k = 0; k < K; ++k) M(i, k) = std::polar(1.0, w[k] * x);
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const auto sol = pinv_solve(M, b);
  return {sol.x.data(), sol.x.data() + K};
}

std::vector<cdouble> project_fft(const Grid1D& grid, std::span<const cdouble> y,
                                 const std::vector<double>& w) {
  const std::size_t n = grid.size();
  std::vector<cdouble> data(y.begin(), y.end());
  detail::fft_inplace(data, n, 1, detail::FftDirection::forward);
  const double dk = 2 * kPi / (static_cast<double>(n) * grid.spacing());
  std::vector<cdouble> a(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const long s = std::lround(w[k] / dk);
    a[k] = data[bin_of(s, n)] * std::polar(1.0 / static_cast<double>(n), -s * dk * grid.origin());
  }
  return a;
}

double gram_leakage(const Grid1D& grid, const std::vector<double>& w) {
  // |Σ_i e^{i d x_i}| = |sin(n d h/2) / sin(d h/2)| on a uniform grid.
  double worst = 0.0;
  const double n = static_cast<double>(grid.size()), h = grid.spacing();
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t k = j + 1; k < w.size(); ++k) {
      const double half = 0.5 * (w[k] - w[j]) * h;
      const double den = std::sin(half);
      const double g = std::abs(den) < 1e-300 ? 1.0 : std::abs(std::sin(n * half) / den) / n;
      worst = std::max(worst, g);
    }
  return worst;
}

}  // namespace

NoiseModel NoiseModel::relative_db(double db, double reference_amplitude, std::uint64_t seed) {
  if (!std::isfinite(db)) throw std::invalid_argument("noise: dB must be finite");
  if (!(reference_amplitude >= 0.0)) throw std::invalid_argument("noise: reference amplitude must be >= 0");
  return {reference_amplitude * std::pow(10.0, db / 20.0), seed};
}

NoisyRecord add_noise(std::span<const cdouble> signal, const NoiseModel& model, std::uint64_t stream,
                      double reference_amplitude) {
  if (!(model.sigma >= 0.0) || !std::isfinite(model.sigma))
    throw std::invalid_argument("noise: sigma must be finite and >= 0");
  NoisyRecord out{std::vector<cdouble>(signal.begin(), signal.end()), model.sigma,
                  std::numeric_limits<double>::quiet_NaN()};
  if (model.sigma == 0.0) return out;
  CounterRng rng(model.seed, stream);
  boost::random::normal_distribution<double> normal(0.0, model.sigma / std::sqrt(2.0));
  double power = 0.0;
  for (auto& v : out.values) {
    const cdouble n(normal(rng), normal(rng));
    power += std::norm(n);
    v += n;
  }
  if (reference_amplitude > 0.0 && !signal.empty())
    out.achieved_db = 20.0 * std::log10(std::sqrt(power / signal.size()) / reference_amplitude);
  return out;
}

std::vector<double> add_noise(std::span<const double> signal, const NoiseModel& model,
                              std::uint64_t stream) {
  if (!(model.sigma >= 0.0) || !std::isfinite(model.sigma))
    throw std::invalid_argument("noise: sigma must be finite and >= 0");
  std::vector<double> out(signal.begin(), signal.end());
  if (model.sigma == 0.0) return out;
  CounterRng rng(model.seed, stream);
  boost::random::normal_distribution<double> normal(0.0, model.sigma);
  for (auto& v : out) v += normal(rng);
  return out;
}

AveragingMode averaging_mode_from_string(std::string_view name) {
  if (name == "coherent") return AveragingMode::coherent;
  if (name == "spectral") return AveragingMode::spectral;
  throw std::invalid_argument("unknown averaging mode '" + std::string(name) + "'");
}

std::string_view to_string(AveragingMode mode) {
  return mode == AveragingMode::coherent ? "coherent" : "spectral";
}

ProjectionMode projection_mode_from_string(std::string_view name) {
  if (name == "exact") return ProjectionMode::exact;
  if (name == "fft_bin" || name == "fft-bin") return ProjectionMode::fft_bin;
  throw std::invalid_argument("unknown projection mode '" + std::string(name) + "'");
}

std::string_view to_string(ProjectionMode mode) {
  return mode == ProjectionMode::exact ? "exact" : "fft_bin";
}

RecoveryReport spectral_filter_recover(const Grid1D& grid,
                                       const std::vector<std::vector<cdouble>>& records,
                                       const CombSpec& comb, const RecoverOptions& options) {
  if (records.empty()) throw std::invalid_argument("recover: need at least one record");
  if (comb.frequencies.empty()) throw std::invalid_argument("recover: comb has no teeth");
  if (comb.size() > grid.size()) throw std::invalid_argument("recover: more teeth than samples");
  for (const auto& r : records)
    if (r.size() != grid.size()) throw std::invalid_argument("recover: record length does not match grid");

  const auto& w = comb.frequencies;
  auto project = [&](std::span<const cdouble> y) {
    return options.projection == ProjectionMode::exact ? project_exact(grid, y, w)
                                                       : project_fft(grid, y, w);
  };

  std::vector<cdouble> a(w.size());
  if (options.averaging == AveragingMode::coherent || records.size() == 1) {
    std::vector<cdouble> mean(grid.size(), 0.0);
    for (const auto& r : records)
      for (std::size_t i = 0; i < r.size(); ++i) mean[i] += r[i];
    for (auto& v : mean) v /= static_cast<double>(records.size());
    a = project(mean);
  } else {
    std::vector<double> mag(w.size(), 0.0);
    std::vector<cdouble> phasor(w.size(), 0.0);
    for (const auto& r : records) {
      const auto ar = project(r);
      for (std::size_t k = 0; k < w.size(); ++k) {
        mag[k] += std::abs(ar[k]);
        phasor[k] += ar[k];
      }
    }
    for (std::size_t k = 0; k < w.size(); ++k)
      a[k] = std::polar(mag[k] / static_cast<double>(records.size()), std::arg(phasor[k]));
  }

  RecoveryReport report;
  report.comb = comb;
  report.comb.amplitudes = a;
  report.comb.delays.assign(w.size(), 0.0);
  report.reconstructed = report.comb.sample(grid);
  report.averages = records.size();
  report.leakage = gram_leakage(grid, w);
  return report;
}

double reconstruction_mse(const CombSpec& recovered, const CombSpec& truth, double x1, double x2,
                          std::size_t samples) {
  if (!(x2 > x1) || samples < 2) throw std::invalid_argument("mse: need x1 < x2 and >= 2 samples");
  double err = 0.0, power = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = x1 + (x2 - x1) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double wt = (i == 0 || i + 1 == samples) ? 0.5 : 1.0;
    const cdouble t = truth(x);
    err += wt * std::norm(recovered(x) - t);
    power += wt * std::norm(t);
  }
  if (!(power > 0.0)) throw std::invalid_argument("mse: truth vanishes on the window");
  return err / power;
}

CombSpec experiment_comb(const RecoveryExperiment& e) {
  if (!e.comb.frequencies.empty()) {
    if (e.comb.amplitudes.size() != e.comb.size())
      throw std::invalid_argument("recover experiment: comb needs one amplitude per frequency");
    return e.comb;
  }
  if (e.fit_points < 2) throw std::invalid_argument("recover experiment: need >= 2 fit points");
  const double half = kPi / e.Omega;
  std::vector<double> x(e.fit_points);
  std::vector<cdouble> F(e.fit_points);
  for (std::size_t i = 0; i < e.fit_points; ++i) {
    x[i] = -half + 2 * half * static_cast<double>(i) / static_cast<double>(e.fit_points - 1);
    const double u = e.target_bandwidth * x[i];
    F[i] = u == 0.0 ? 1.0 : std::sin(u) / u;
  }
  return comb_fit(x, F, e.K, e.omega_min, e.Omega).comb;
}

namespace {

// Comb period from equally spaced teeth.
double comb_period(const CombSpec& comb) {
  if (comb.size() < 2) throw std::invalid_argument("recover experiment: comb needs >= 2 teeth");
  auto w = comb.frequencies;
  std::sort(w.begin(), w.end());
  const double dw = w[1] - w[0];
  if (!(dw > 0.0)) throw std::invalid_argument("recover experiment: repeated comb frequency");
  for (std::size_t k = 2; k < w.size(); ++k)
    if (std::abs(w[k] - w[k - 1] - dw) > 1e-9 * std::max(1.0, std::abs(dw)))
      throw std::invalid_argument("recover experiment: comb teeth must be equally spaced");
  return 2 * kPi / dw;
}

}  // namespace

ExperimentResult run_recovery_experiment(const RecoveryExperiment& e, std::uint64_t trial) {
  if (e.comb.frequencies.empty() && e.K < 2) throw std::invalid_argument("recover experiment: K must be >= 2");
  if (e.periods < 1 || e.samples_per_period < 2 || e.averages < 1)
    throw std::invalid_argument("recover experiment: periods, samples and averages must be positive");
  if (!(e.Omega > 0.0) || !(e.window >= 0.0))
    throw std::invalid_argument("recover experiment: Omega must be positive and window >= 0");
  ExperimentResult out;
  out.truth = experiment_comb(e);
  const double half = e.window > 0.0 ? e.window : kPi / e.Omega;
  for (std::size_t i = 0; i < 2049; ++i)
    out.a_so = std::max(out.a_so, std::abs(out.truth(-half + 2 * half * i / 2048.0)));

  const double period = comb_period(out.truth);
  const std::size_t n = static_cast<std::size_t>(e.periods) * e.samples_per_period;
  const Grid1D grid(n, period / static_cast<double>(e.samples_per_period), -0.5 * e.periods * period);
  const auto clean = out.truth.sample(grid);
  const auto model = NoiseModel::relative_db(e.noise_db, out.a_so, e.seed);
  out.sigma = model.sigma;
  std::vector<std::vector<cdouble>> records;
  for (int j = 0; j < e.averages; ++j) {
    auto r = add_noise(clean, model, (trial << 24) | static_cast<std::uint64_t>(j), out.a_so);
    if (j == 0) out.achieved_db = r.achieved_db;
    records.push_back(std::move(r.values));
  }
  out.report = spectral_filter_recover(grid, records, out.truth, e.options);
  out.mse = reconstruction_mse(out.report.comb, out.truth, -half, half);
  return out;
}

std::vector<double> run_recovery_trials(const RecoveryExperiment& e, std::size_t count,
                                        unsigned threads) {
  std::vector<double> mse(count);
  parallel_for(count, threads, [&](std::size_t t) { mse[t] = run_recovery_experiment(e, t).mse; });
  return mse;
}

}  // namespace superwave

#include "superwave/optimize.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <string>

#include "superwave/error.hpp"
#include "superwave/linalg.hpp"
#include "superwave/parallel.hpp"
#include "superwave/random.hpp"
#include "superwave/special.hpp"

namespace superwave {

namespace {

constexpr unsigned kMaxDepth = 20;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Absolute tolerance; a depth-0 pass supplies the L1 scale that converts it into
// Boost's relative one. Below ~1e-14 of the L1 norm rounding dominates, so the
// acceptance test never asks for less than that.
template <typename F>
double integrate_real(F&& f, double a, double b, double tol, const char* what) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double error = 0.0, l1 = 0.0;
  GK::integrate(f, a, b, 0, 0.0, &error, &l1);
  if (l1 == 0.0) return 0.0;
  const double allowed = std::max(tol, 1e-14 * l1);
  const double value = GK::integrate(f, a, b, kMaxDepth, std::max(allowed / l1, 1e-15), &error, &l1);
  if (!(error <= 10.0 * allowed) || !std::isfinite(value))
    throw NumericError(std::string(what) + ": quadrature did not converge (achieved error " +
                       sci(error) + ", requested " + sci(allowed) + ")");
  return value;
}

template <typename F>
cdouble integrate_complex(F&& f, double a, double b, double tol, const char* what) {
  const double re = integrate_real([&](double x) { return f(x).real(); }, a, b, tol, what);
  const double im = integrate_real([&](double x) { return f(x).imag(); }, a, b, tol, what);
  return {re, im};
}

// ∫|Φ − f|² evaluates a difference of nearly equal sums whose coefficients can be
// large, so it is resolved relative to the target energy rather than absolutely.
template <typename Fit>
double residual_integral(const Target& target, const Fit& fit, double x1, double x2, double tol,
                         const char* what) {
  const double energy = integrate_real([&](double x) { return std::norm(target(x)); }, x1, x2, tol, what);
  return integrate_real([&](double x) { return std::norm(target(x) - fit(x)); }, x1, x2,
                        std::max(tol, 1e-9 * energy), what);
}

void check_interval(double x1, double x2) {
  if (!(x1 < x2) || !std::isfinite(x1) || !std::isfinite(x2))
    throw std::invalid_argument("interval must satisfy x1 < x2 (finite)");
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

// ---- interval approximation ----------------------------------------------

cdouble IntervalApproxDesign::operator()(double x) const {
  cdouble s = 0.0;
  for (std::size_t n = 0; n < C.size(); ++n) s += C[n] * std::polar(1.0, k[n] * x);
  return s;
}

CMatrix interval_gram(const std::vector<double>& k, double x1, double x2) {
  check_interval(x1, x2);
  const auto m = static_cast<Eigen::Index>(k.size());
  CMatrix alpha(m, m);
  const cdouble I(0.0, 1.0);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      const double delta = k[c] - k[r];
      alpha(r, c) = delta == 0.0 ? cdouble(x2 - x1)
                                 : (std::polar(1.0, delta * x2) - std::polar(1.0, delta * x1)) /
                                       (I * delta);
    }
  return alpha;
}

IntervalApproxDesign interval_approx(const Target& target, double x1, double x2, int N,
                                     double band, const SolveOptions& options) {
  check_interval(x1, x2);
  if (N < 1) throw std::invalid_argument("interval_approx: N must be >= 1");
  if (!(band > 0.0)) throw std::invalid_argument("interval_approx: band must be positive");
  IntervalApproxDesign d;
  d.N = N;
  d.x1 = x1;
  d.x2 = x2;
  d.band = band;
  for (int n = 0; n <= N; ++n) d.k.push_back(band * (1.0 - 2.0 * n / N));
  const int m = N + 1;
  const CMatrix alpha = interval_gram(d.k, x1, x2);
  CVector b(m);
  for (int r = 0; r < m; ++r) {
    const double kr = d.k[r];
    b(r) = integrate_complex([&](double x) { return target(x) * std::polar(1.0, -kr * x); }, x1,
                             x2, options.quad_tolerance, "interval_approx b_n");
  }
  const auto sol = pinv_solve(alpha, b, options.pinv_cutoff);
  d.C.assign(sol.x.data(), sol.x.data() + m);
  d.rank = sol.rank;
  d.singular_values = to_std(sol.singular_values);
  d.residual = residual_integral(target, d, x1, x2, options.quad_tolerance, "interval_approx residual");
  return d;
}

// ---- Bessel approximation ------------------------------------------------

cdouble BesselApproxDesign::operator()(double x) const {
  const auto j = spherical_bessel_j(n_terms - 1, x);
  cdouble s = 0.0;
  for (int n = 0; n < n_terms; ++n) s += beta[n] * j[n];
  return s * std::sqrt(2.0 / std::numbers::pi);
}

BesselApproxDesign bessel_line_approx(const Target& target, double x1, double x2, int n_terms,
                                      const SolveOptions& options) {
  check_interval(x1, x2);
  if (n_terms < 1) throw std::invalid_argument("bessel_line_approx: n_terms must be >= 1");
  const int nmax = n_terms - 1;
  BesselApproxDesign d;
  d.n_terms = n_terms;
  d.x1 = x1;
  d.x2 = x2;
  CMatrix A(n_terms, n_terms);
  CVector B(n_terms);
  const double root = std::sqrt(std::numbers::pi / 2.0);
  for (int r = 0; r < n_terms; ++r) {
    for (int c = r; c < n_terms; ++c) {
      const double v = integrate_real(
          [&](double x) {
            const auto j = spherical_bessel_j(nmax, x);
            return j[r] * j[c];
          },
          x1, x2, options.quad_tolerance, "bessel_line_approx A_nm");
      A(r, c) = A(c, r) = v;
    }
    B(r) = root * integrate_complex(
                      [&](double x) { return target(x) * spherical_bessel_j(nmax, x)[r]; }, x1,
                      x2, options.quad_tolerance, "bessel_line_approx B_n");
  }
  const auto sol = pinv_solve(A, B, options.pinv_cutoff);
  d.beta.assign(sol.x.data(), sol.x.data() + n_terms);
  cdouble phase = 1.0;
  for (int n = 0; n < n_terms; ++n, phase *= cdouble(0.0, -1.0)) d.D.push_back(phase * d.beta[n]);
  d.rank = sol.rank;
  d.singular_values = to_std(sol.singular_values);
  d.residual = residual_integral(target, d, x1, x2, options.quad_tolerance, "bessel_line_approx residual");
  return d;
}

// ---- combs -----------------------------------------------------------------

cdouble CombSpec::operator()(double x) const {
  cdouble s = 0.0;
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    const double tau = k < delays.size() ? delays[k] : 0.0;
    s += amplitudes[k] * std::polar(1.0, frequencies[k] * (x - tau));
  }
  return s;
}

std::vector<cdouble> CombSpec::sample(const Grid1D& grid) const {
  std::vector<cdouble> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = (*this)(grid.coord(i));
  return v;
}

std::vector<double> equally_spaced(int K, double omega_min, double Omega) {
  if (K < 1) throw std::invalid_argument("comb: K must be >= 1");
  if (!(Omega > 0.0)) throw std::invalid_argument("comb: Omega must be positive");
  if (K == 1) return {omega_min};
  std::vector<double> w(K);
  for (int k = 0; k < K; ++k) w[k] = static_cast<double>(k) / (K - 1) * Omega + omega_min;
  return w;
}

CombFit comb_fit(const std::vector<double>& x, const std::vector<cdouble>& F, int K,
                 double omega_min, double Omega, const SolveOptions& options) {
  if (x.size() != F.size() || x.empty())
    throw std::invalid_argument("comb_fit: need matching, nonempty sample and target lists");
  CombFit out;
  out.comb.frequencies = equally_spaced(K, omega_min, Omega);
  out.comb.omega_min = omega_min;
  out.comb.Omega = Omega;
  const auto rows = static_cast<Eigen::Index>(x.size());
  CMatrix M(rows, K);
  CVector f(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int k = 0; k < K; ++k) M(i, k) = std::polar(1.0, out.comb.frequencies[k] * x[i]);
    f(i) = F[i];
  }
  const auto sol = pinv_solve(M, f, options.pinv_cutoff);
  out.comb.amplitudes.assign(sol.x.data(), sol.x.data() + K);
  out.comb.delays.assign(K, 0.0);
  out.rank = sol.rank;
  out.singular_values = to_std(sol.singular_values);
  out.residual = (M * sol.x - f).squaredNorm();
  return out;
}

// ---- phase descent ---------------------------------------------------------

namespace {

double overlap(double wi, double wj, double T) {
  const double d = wi - wj;
  return d == 0.0 ? 2.0 * T : 2.0 * std::sin(d * T) / d;
}

void check_descent_inputs(const std::vector<double>& omegas, const std::vector<double>& delays,
                          double T) {
  if (omegas.empty()) throw std::invalid_argument("interference: need at least one frequency");
  if (delays.size() != omegas.size())
    throw std::invalid_argument("interference: one delay per frequency required");
  if (!(T > 0.0)) throw std::invalid_argument("interference: T_SO must be positive");
}

}  // namespace

double interference_objective(double A, const std::vector<double>& omegas,
                              const std::vector<double>& delays, double T_SO) {
  check_descent_inputs(omegas, delays, T_SO);
  double s = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i)
    for (std::size_t j = 0; j < omegas.size(); ++j)
      s += overlap(omegas[i], omegas[j], T_SO) *
           std::cos(omegas[i] * delays[i] - omegas[j] * delays[j]);
  return A * A * s;
}

std::vector<double> interference_gradient(double A, const std::vector<double>& omegas,
                                          const std::vector<double>& delays, double T_SO) {
  check_descent_inputs(omegas, delays, T_SO);
  std::vector<double> g(omegas.size(), 0.0);
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < omegas.size(); ++j)
      if (j != k)
        s += overlap(omegas[k], omegas[j], T_SO) *
             std::sin(omegas[k] * delays[k] - omegas[j] * delays[j]);
    g[k] = -2.0 * omegas[k] * A * A * s;
  }
  return g;
}

PhaseDescentResult phase_descent(double A, const std::vector<double>& omegas,
                                 const PhaseDescentConfig& cfg) {
  if (omegas.empty()) throw std::invalid_argument("phase_descent: need at least one frequency");
  if (!(cfg.T_SO > 0.0) || !(cfg.step > 0.0) || cfg.max_iterations < 1 || cfg.restarts < 1)
    throw std::invalid_argument("phase_descent: T_SO, step, iterations and restarts must be positive");
  for (double w : omegas)
    if (!(w > 0.0)) throw std::invalid_argument("phase_descent: frequencies must be positive");
  const std::size_t n = omegas.size();

  struct Run {
    std::vector<double> tau;
    std::vector<double> history;
    double objective = 0;
    bool converged = false;
  };
  std::vector<Run> runs(cfg.restarts);

  parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
    CounterRng rng(cfg.seed, r);
    Run run;
    run.tau.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) run.tau[i] = rng.uniform() * 2.0 * std::numbers::pi / omegas[i];
    double f = interference_objective(A, omegas, run.tau, cfg.T_SO);
    run.history.push_back(f);
    double step = cfg.step;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      auto g = interference_gradient(A, omegas, run.tau, cfg.T_SO);
      g[0] = 0.0;  // τ_0 is the time-shift gauge
      double g2 = 0.0;
      for (double v : g) g2 += v * v;
      if (g2 == 0.0) {
        run.converged = true;
        break;
      }
      std::vector<double> trial(n);
      double ft = f;
      bool accepted = false;
      while (step > 1e-300) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = run.tau[i] - step * g[i];
        ft = interference_objective(A, omegas, trial, cfg.T_SO);
        if (ft <= f - 1e-4 * step * g2) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        run.converged = true;
        break;
      }
      const double change = f - ft;
      run.tau = trial;
      f = ft;
      run.history.push_back(f);
      step *= 2.0;
      if (change <= cfg.tolerance * std::max(std::abs(f), A * A * cfg.T_SO)) {
        run.converged = true;
        break;
      }
    }
    run.objective = f;
    runs[r] = std::move(run);
  });

  PhaseDescentResult out;
  std::size_t best = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    out.restart_objectives.push_back(runs[r].objective);
    if (runs[r].objective < runs[best].objective) best = r;
  }
  out.best_restart = static_cast<int>(best);
  out.objective = runs[best].objective;
  out.converged = runs[best].converged;
  out.history = runs[best].history;
  out.comb.frequencies = omegas;
  out.comb.amplitudes.assign(n, cdouble(A));
  out.comb.delays = runs[best].tau;
  out.comb.omega_min = *std::min_element(omegas.begin(), omegas.end());
  out.comb.Omega = *std::max_element(omegas.begin(), omegas.end()) - out.comb.omega_min;
  return out;
}

}  // namespace superwave

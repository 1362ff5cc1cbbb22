#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "superwave/field.hpp"
#include "superwave/linalg.hpp"

namespace superwave {

using Target = std::function<cdouble(double)>;

struct SolveOptions {
  double pinv_cutoff = 1e-12;  // relative to σ_max
  double quad_tolerance = 1e-12;
};

// ---- interval Fourier approximation ----------------------------------------

struct IntervalApproxDesign {
  int N = 0;
  double x1 = 0, x2 = 0;
  double band = 0;
  std::vector<double> k;   // band·(1 − 2n/N), n = 0..N
  std::vector<cdouble> C;  // ψ_N = Σ C_n e^{i k_n x}
  double residual = 0;     // ∫|Φ − ψ_N|² over (x1, x2)
  long rank = 0;
  std::vector<double> singular_values;

  cdouble operator()(double x) const;
};

/// α_nm = ∫_{x1}^{x2} e^{i(k_m−k_n)x} dx in closed form.
CMatrix interval_gram(const std::vector<double>& k, double x1, double x2);

/// C = α⁺b with α_nm = ∫e^{i(k_m−k_n)x} (closed form) and b_n = ∫Φ e^{−ik_n x}
/// (adaptive Gauss–Kronrod).
IntervalApproxDesign interval_approx(const Target& target, double x1, double x2, int N,
                                     double band = 2.0 * std::numbers::pi,
                                     const SolveOptions& options = {});

// ---- whole-line Legendre / spherical Bessel approximation -------------------

struct BesselApproxDesign {
  int n_terms = 0;
  double x1 = 0, x2 = 0;
  /// β = A⁺B with B_n = √(π/2)∫g j_n and A_nm = ∫j_n j_m.
  std::vector<cdouble> beta;
  /// D_n = (−i)ⁿ β_n, so f_N = √(2/π) Σ iⁿ D_n j_n(x) is the least-squares fit.
  std::vector<cdouble> D;
  double residual = 0;
  long rank = 0;
  std::vector<double> singular_values;

  cdouble operator()(double x) const;
};

BesselApproxDesign bessel_line_approx(const Target& target, double x1, double x2, int n_terms,
                                      const SolveOptions& options = {});

// ---- frequency combs --------------------------------------------------------

struct CombSpec {
  std::vector<double> frequencies;
  std::vector<cdouble> amplitudes;
  std::vector<double> delays;  // τ_k; zero unless set by phase descent
  double omega_min = 0;
  double Omega = 0;

  std::size_t size() const noexcept { return frequencies.size(); }
  /// Σ A_k e^{iω_k(x − τ_k)}
  cdouble operator()(double x) const;
  std::vector<cdouble> sample(const Grid1D& grid) const;
};

/// ω_k = k/(K−1)·Ω + ω_min for K ≥ 2; K = 1 gives the single tooth ω_min.
std::vector<double> equally_spaced(int K, double omega_min, double Omega);

struct CombFit {
  CombSpec comb;
  long rank = 0;
  double residual = 0;  // Σ|ψ(x_i) − F_i|²
  std::vector<double> singular_values;
};

/// A = M⁺F with M_ik = e^{iω_k x_i}. Rank deficiency is reported, not rejected.
CombFit comb_fit(const std::vector<double>& x, const std::vector<cdouble>& F, int K,
                 double omega_min, double Omega, const SolveOptions& options = {});

// ---- interference minimization ---------------------------------------------

struct PhaseDescentConfig {
  double T_SO = 0.5;
  double step = 1.0;  // initial trial step of the backtracking line search
  int max_iterations = 2000;
  int restarts = 16;
  double tolerance = 1e-12;  // relative objective change that counts as converged
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// I({τ}) = ∫_{−T}^{T} |Σ A e^{iω_i(t−τ_i)}|² dt in closed form.
double interference_objective(double A, const std::vector<double>& omegas,
                              const std::vector<double>& delays, double T_SO);
std::vector<double> interference_gradient(double A, const std::vector<double>& omegas,
                                          const std::vector<double>& delays, double T_SO);

struct PhaseDescentResult {
  CombSpec comb;  // equal amplitudes A, optimized delays (τ_0 = 0)
  double objective = 0;
  bool converged = false;
  int best_restart = 0;
  std::vector<double> history;            // objective per iteration of the best restart
  std::vector<double> restart_objectives;
};

PhaseDescentResult phase_descent(double A, const std::vector<double>& omegas,
                                 const PhaseDescentConfig& config = {});

}  // namespace superwave

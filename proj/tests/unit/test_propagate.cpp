#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "superwave/propagate.hpp"

using namespace superwave;
using std::numbers::pi;

namespace {

SampledField random_field(const Grid2D& g, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n;
  std::vector<cdouble> v(g.size());
  for (auto& x : v) x = {n(gen), n(gen)};
  return SampledField(g, v);
}

double power(const SampledField& f) {
  double s = 0;
  for (auto v : f.values()) s += std::norm(v);
  return s;
}

double max_diff(const SampledField& a, const SampledField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SampledField gaussian(const Grid2D& g, double w0) {
  std::vector<cdouble> v(g.size());
  for (std::size_t iy = 0; iy < g.ny(); ++iy)
    for (std::size_t ix = 0; ix < g.nx(); ++ix)
      v[g.index(ix, iy)] = std::exp(-(g.x(ix) * g.x(ix) + g.y(iy) * g.y(iy)) / (w0 * w0));
  return SampledField(g, v);
}

// 1/e² irradiance radius from the second moment: ⟨x²⟩ = w²/4.
double beam_width(const SampledField& f) {
  const auto& g = f.grid2d();
  double s = 0, sx2 = 0;
  for (std::size_t iy = 0; iy < g.ny(); ++iy)
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const double p = std::norm(f[g.index(ix, iy)]);
      s += p;
      sx2 += p * g.x(ix) * g.x(ix);
    }
  return 2 * std::sqrt(sx2 / s);
}

}  // namespace

TEST_CASE("periodic propagation is unitary, a semigroup and reversible") {
  const auto g = Grid2D::centered(64, 64, 0.4, 0.4);
  const auto f = random_field(g, 1);
  for (auto kernel : {PropagationKernel::paraxial, PropagationKernel::helmholtz}) {
    PropagationSetup s;
    s.wavelength = 0.5;
    s.pad_factor = 1;
    s.kernel = kernel;
    // Helmholtz is unitary only when no component is evanescent: π/dx < k here.
    REQUIRE(pi / 0.4 * std::sqrt(2.0) < 2 * pi / 0.5);
    for (double z : {0.0, 0.7, -3.0, 55.0}) {
      s.z = z;
      const auto r = propagate_field(f, s);
      CHECK(std::abs(power(r.field) - power(f)) <= 1e-9 * power(f));
      if (z == 0.0) CHECK(max_diff(r.field, f) < 1e-12);
    }
    s.z = 1.3;
    const auto a = propagate_field(propagate_field(f, s).field, [&] { auto t = s; t.z = 2.2; return t; }()).field;
    s.z = 3.5;
    const auto b = propagate_field(f, s).field;
    CHECK(max_diff(a, b) < 1e-9);
    s.z = -3.5;
    CHECK(max_diff(propagate_field(b, s).field, f) < 1e-9);
  }
}

TEST_CASE("plane wave keeps its modulus and advances its phase") {
  const auto g = Grid2D::centered(32, 32, 0.25, 0.25);
  const double kx = 2 * pi / (32 * 0.25) * 3;
  std::vector<cdouble> v(g.size());
  for (std::size_t iy = 0; iy < 32; ++iy)
    for (std::size_t ix = 0; ix < 32; ++ix) v[g.index(ix, iy)] = std::polar(1.0, kx * g.x(ix));
  PropagationSetup s;
  s.wavelength = 0.6;
  s.z = 4.0;
  s.pad_factor = 1;
  const auto r = propagate_field(SampledField(g, v), s);
  const double k = 2 * pi / 0.6;
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(r.field[i] - v[i] * std::polar(1.0, -s.z * kx * kx / (2 * k))) < 1e-12);
  s.kernel = PropagationKernel::helmholtz;
  const auto h = propagate_field(SampledField(g, v), s);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(h.field[i] - v[i] * std::polar(1.0, s.z * (std::sqrt(k * k - kx * kx) - k))) < 1e-12);
}

TEST_CASE("Gaussian beam width follows the paraxial law") {
  const double lambda = 0.5, w0 = 4.0;
  const double zr = pi * w0 * w0 / lambda;
  const auto g = Grid2D::centered(256, 256, 0.25, 0.25);
  const auto f = gaussian(g, w0);
  CHECK(beam_width(f) == doctest::Approx(w0).epsilon(1e-6));
  PropagationSetup s;
  s.wavelength = lambda;
  for (double z : {0.5 * zr, zr, 2 * zr}) {
    s.z = z;
    const auto r = propagate_field(f, s);
    const double expect = w0 * std::sqrt(1 + (z / zr) * (z / zr));
    CHECK(std::abs(beam_width(r.field) / expect - 1) < 0.005);
    CHECK(r.warnings.empty());
  }
}

TEST_CASE("band limit is unchanged by propagation") {
  const auto g = Grid2D::centered(64, 64, 0.5, 0.5);
  const auto f = gaussian(g, 1.5);
  PropagationSetup s;
  s.wavelength = 1.0;
  s.z = 7.0;
  s.pad_factor = 1;
  const auto r = propagate_field(f, s);
  CHECK(measured_bandlimit(r.field, 1e-9) == measured_bandlimit(f, 1e-9));
}

TEST_CASE("leakage warnings") {
  const auto g = Grid2D::centered(64, 64, 0.5, 0.5);
  // Checkerboard: all power at Nyquist.
  std::vector<cdouble> v(g.size());
  for (std::size_t iy = 0; iy < 64; ++iy)
    for (std::size_t ix = 0; ix < 64; ++ix) v[g.index(ix, iy)] = (ix + iy) % 2 ? 1.0 : -1.0;
  PropagationSetup s;
  s.z = 1.0;
  const auto r = propagate_field(SampledField(g, v), s);
  CHECK(r.nyquist_leakage > 0.99);
  CHECK_FALSE(r.warnings.empty());
  // A narrow beam propagated far spreads past the window.
  s.z = 200.0;
  const auto w = propagate_field(gaussian(g, 1.0), s);
  CHECK(w.window_leakage > 0.01);
}

TEST_CASE("1D propagation") {
  const Grid1D g = Grid1D::centered(512, 64.0);
  std::vector<cdouble> v(512);
  for (std::size_t i = 0; i < 512; ++i) v[i] = std::exp(-g.coord(i) * g.coord(i) / 4.0);
  PropagationSetup s;
  s.wavelength = 0.5;
  s.z = 10.0;
  s.pad_factor = 1;
  const SampledField f(g, v);
  const auto r = propagate_field(f, s);
  CHECK(std::abs(power(r.field) - power(f)) < 1e-9 * power(f));
  // Closed-form 1D Gaussian: amplitude e^{−x²/(w0²(1+iz/z_R))}/√(1+iz/z_R), z_R = k w0²/2.
  const double zr = (2 * pi / 0.5) * 4.0 / 2;
  const cdouble q(1, s.z / zr);
  for (std::size_t i = 0; i < 512; i += 7) {
    const double x = g.coord(i);
    CHECK(std::abs(r.field[i] - std::exp(-x * x / (4.0 * q)) / std::sqrt(q)) < 1e-9);
  }
}

TEST_CASE("quasiperiodic mask") {
  const auto g = Grid2D::centered(512, 512, 0.05, 0.05);
  HoleArraySpec spec;
  spec.hole_diameter = 0.4;
  spec.min_separation = 1.2;
  spec.aperture_diameter = 24.0;
  const auto a = quasiperiodic_mask(spec, g);
  for (auto v : a.mask.values()) CHECK((v == cdouble(0) || v == cdouble(1)));
  CHECK(a.x.size() > 100);
  CHECK(a.min_pairwise_separation >= spec.min_separation * (1 - 1e-12));
  for (std::size_t i = 0; i < a.x.size(); ++i)
    CHECK(std::hypot(a.x[i], a.y[i]) + spec.hole_diameter / 2 <= spec.aperture_diameter / 2 + 1e-12);
  // Brute-force separation oracle.
  double m = INFINITY;
  for (std::size_t i = 0; i < a.x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) m = std::min(m, std::hypot(a.x[i] - a.x[j], a.y[i] - a.y[j]));
  CHECK(m == a.min_pairwise_separation);
  // Open area matches hole count × disk area within the rasterization error.
  double open = 0;
  for (auto v : a.mask.values()) open += v.real();
  open *= 0.05 * 0.05;
  CHECK(open == doctest::Approx(a.x.size() * pi * 0.04).epsilon(0.1));

  const auto b = quasiperiodic_mask(spec, g);
  CHECK(b.x == a.x);
  spec.seed = 2;
  CHECK(quasiperiodic_mask(spec, g).x != a.x);

  spec.hole_count = 50;
  CHECK(quasiperiodic_mask(spec, g).x.size() == 50);
  spec.hole_count = 100000;
  CHECK_THROWS_AS(quasiperiodic_mask(spec, g), std::invalid_argument);
  spec.hole_count = 0;
  spec.hole_diameter = 0.2;  // 4 samples
  CHECK_THROWS_AS(quasiperiodic_mask(spec, g), std::invalid_argument);
  spec.hole_diameter = 1.5;
  CHECK_THROWS_AS(quasiperiodic_mask(spec, g), std::invalid_argument);
}

TEST_CASE("tenfold symmetry of the vertex set's structure factor") {
  // |S(q)|² of the hole centers is nearly invariant under 36° rotations.
  const auto g = Grid2D::centered(1024, 1024, 0.05, 0.05);
  HoleArraySpec spec;
  spec.hole_diameter = 0.32;
  spec.min_separation = 0.8;
  spec.aperture_diameter = 50.0;
  const auto a = quasiperiodic_mask(spec, g);
  auto S = [&](double qx, double qy) {
    cdouble s = 0;
    for (std::size_t i = 0; i < a.x.size(); ++i) s += std::polar(1.0, qx * a.x[i] + qy * a.y[i]);
    return std::norm(s) / a.x.size();
  };
  // Brightest peak on a ring search, then its 36° rotations.
  const double edge = a.edge_length;
  double best = 0, bq = 0, bt = 0;
  for (double q = 2.0 / edge; q < 8.0 / edge; q += 0.02 / edge)
    for (double t = 0; t < pi / 5; t += pi / 400) {
      const double v = S(q * std::cos(t), q * std::sin(t));
      if (v > best) best = v, bq = q, bt = t;
    }
  CHECK(best > 0.2 * a.x.size());  // a Bragg peak, not diffuse scattering
  for (int r = 1; r < 10; ++r) {
    const double t = bt + r * pi / 5;
    CHECK(S(bq * std::cos(t), bq * std::sin(t)) > 0.5 * best);
  }
}

TEST_CASE("hot spots: constructed Gaussians and a flat field") {
  const auto g = Grid2D::centered(256, 256, 0.05, 0.05);
  const double w = 0.3;  // FWHM
  const double sig = w / (2 * std::sqrt(2 * std::log(2.0)));
  std::vector<cdouble> v(g.size());
  for (std::size_t iy = 0; iy < 256; ++iy)
    for (std::size_t ix = 0; ix < 256; ++ix) {
      const double x = g.x(ix), y = g.y(iy);
      v[g.index(ix, iy)] = std::exp(-((x + 1.5) * (x + 1.5) + y * y) / (2 * sig * sig)) +
                           0.8 * std::exp(-((x - 1.5) * (x - 1.5) + y * y) / (2 * sig * sig));
    }
  const auto rep = find_hotspots(SampledField(g, v), 0.1, 0.5, 0.5);
  REQUIRE(rep.spots.size() == 2);
  CHECK(rep.spots[0].x == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(rep.spots[1].peak == doctest::Approx(0.8).epsilon(1e-6));
  for (const auto& s : rep.spots) {
    CHECK(s.fwhm == doctest::Approx(w).epsilon(0.01));
    CHECK(s.sub_diffraction);  // 0.3 < 0.5/(2·0.5)
  }
  CHECK(find_hotspots(SampledField(g, std::vector<cdouble>(g.size(), 2.0)), 0.5, 0.5, 0.5).spots.empty());
  v[3] = -1.0;
  CHECK_THROWS_AS(find_hotspots(SampledField(g, v), 0.5, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("Airy focus of a uniform circular pupil") {
  // Focal field = inverse transform of a disk of radius k·NA in the pupil plane.
  const double lambda = 0.5, na = 0.5, k = 2 * pi / lambda;
  const std::size_t n = 512;
  const double dx = 0.025;
  const auto g = Grid2D::centered(n, n, dx, dx);
  const double dk = 2 * pi / (n * dx);
  std::vector<cdouble> pupil(n * n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double kx = signed_bin(ix, n) * dk, ky = signed_bin(iy, n) * dk;
      // The phase puts the focus at x = 0 rather than at the grid's first sample.
      if (std::hypot(kx, ky) <= k * na) pupil[iy * n + ix] = std::polar(1.0, kx * g.origin_x() + ky * g.origin_y());
    }
  const auto focus = inverse_transform(Spectrum(g, pupil));
  const auto rep = find_hotspots(irradiance(focus), 0.5, lambda, na);
  REQUIRE(rep.spots.size() >= 1);
  const auto& s = rep.spots[0];
  CHECK(std::hypot(s.x, s.y) < dx);
  CHECK(std::abs(s.fwhm / (1.029 * rep.diffraction_limit) - 1) < 0.05);
  CHECK_FALSE(s.sub_diffraction);
}

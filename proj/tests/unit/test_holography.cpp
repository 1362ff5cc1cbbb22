#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "superwave/holography.hpp"
#include "superwave/special.hpp"

using namespace superwave;
using std::numbers::pi;

namespace {

HologramPlan uniform_plan(const Grid2D& g, double A, double chi, double pitch,
                          GratingKind kind = GratingKind::blazed) {
  std::vector<double> a(g.size(), A), c(g.size(), chi);
  return encode_hologram(g, a, c, pitch, kind);
}

// Smooth random target: random complex spectrum on |k| < kcut.
SampledField smooth_target(const Grid2D& g, double kcut, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::pair<std::array<double, 2>, cdouble>> waves;
  const double dk = 2 * pi / (g.nx() * g.dx());
  const int m = static_cast<int>(kcut / dk);
  for (int a = -m; a <= m; ++a)
    for (int b = -m; b <= m; ++b)
      if (std::hypot(a, b) * dk < kcut) waves.push_back({{a * dk, b * dk}, cdouble(n(gen), n(gen))});
  std::vector<cdouble> v(g.size());
  for (std::size_t iy = 0; iy < g.ny(); ++iy)
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      cdouble s = 0;
      for (const auto& [k, c] : waves) s += c * std::polar(1.0, k[0] * g.x(ix) + k[1] * g.y(iy));
      v[g.index(ix, iy)] = s;
    }
  return SampledField(g, std::move(v));
}

// Amplitude in [0.2, 0.9] and phase in [−2, 2], both smooth and periodic.
SampledField smooth_amplitude_phase(const Grid2D& g, double kcut, unsigned seed) {
  const auto u = smooth_target(g, kcut, seed), w = smooth_target(g, kcut, seed + 1);
  double mu = 0, mw = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    mu = std::max(mu, std::abs(u[i].real()));
    mw = std::max(mw, std::abs(w[i].real()));
  }
  std::vector<cdouble> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    v[i] = std::polar(0.55 + 0.35 * u[i].real() / mu, 2.0 * w[i].real() / mw);
  return SampledField(g, std::move(v));
}

double rms_relative(const SampledField& a, const SampledField& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("encode: inverse sinc branch") {
  const auto g = Grid2D::centered(8, 8, 1.0, 1.0);
  auto p = uniform_plan(g, 1.0, 0.3, 8.0);
  CHECK(p.M[0] == 1.0);
  CHECK(p.Phi[0] == doctest::Approx(0.3 - pi));
  p = uniform_plan(g, 0.0, 0.3, 8.0);
  CHECK(std::abs(p.M[0]) < 1e-12);

  // Newton oracle on sin(u)/u = 1/2 over [−π, 0].
  double u = -1.9;
  for (int i = 0; i < 50; ++i) u -= (std::sin(u) / u - 0.5) / ((u * std::cos(u) - std::sin(u)) / (u * u));
  p = uniform_plan(g, 0.5, 0.0, 8.0);
  CHECK(std::abs(p.M[0] - (1 + u / pi)) < 1e-12);

  std::vector<double> bad(g.size(), 1.2), chi(g.size(), 0.0);
  CHECK_THROWS_AS(encode_hologram(g, bad, chi, 8.0), std::invalid_argument);
  bad.assign(g.size(), -0.1);
  CHECK_THROWS_AS(encode_hologram(g, bad, chi, 8.0), std::invalid_argument);
}

TEST_CASE("closed-form first order") {
  const auto g = Grid2D::centered(8, 8, 1.0, 1.0);
  std::vector<double> M(g.size(), 1.0), Phi(g.size(), 0.0);
  HologramPlan plan{g, M, Phi, 8.0, GratingKind::blazed, 1.0};
  auto f = first_order_field(plan);
  CHECK(std::abs(f[0] - cdouble(1.0, 0.0)) < 1e-15);
  plan.M.assign(g.size(), 0.0);
  f = first_order_field(plan);
  CHECK(std::abs(f[0]) < 1e-15);
  plan.kind = GratingKind::binary;
  CHECK_THROWS_AS(first_order_field(plan), std::invalid_argument);

  // Magnitude sinc(πM − π) is monotone in M.
  double prev = -1;
  for (int i = 0; i <= 1000; ++i) {
    const double m = i / 1000.0;
    const double a = sinc(pi * m - pi);
    CHECK(a >= prev);
    prev = a;
  }
}

TEST_CASE("round trip recovers the target up to a global sign") {
  const auto g = Grid2D::centered(64, 64, 1.0, 1.0);
  const auto t = smooth_target(g, 0.2, 3);
  const auto plan = encode_hologram(t, 8.0);
  CHECK(plan.amplitude_scale == doctest::Approx(t.max_abs()));
  const auto f = first_order_field(plan);
  double worst = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cdouble target = t[i] / plan.amplitude_scale;
    worst = std::max(worst, std::abs(-f[i] - target));
    CHECK(plan.M[i] >= 0.0);
    CHECK(plan.M[i] <= 1.0);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("grating maps") {
  const auto g = Grid2D(64, 4, 0.5, 1.0);
  const double pitch = 4.0;  // 8 px
  auto plan = uniform_plan(g, 1.0, pi + 0.1, pitch);  // M = 1, Φ = 0.1 keeps sin θ off zero
  auto map = render_grating(plan);
  for (std::size_t ix = 0; ix < g.nx(); ++ix) {
    double expect = std::fmod(0.1 + 2 * pi * g.x(ix) / pitch, 2 * pi);
    if (expect > 2 * pi - 1e-9) expect = 0;
    CHECK(std::abs(map[ix] - expect) < 1e-9);
    CHECK(map[ix] >= 0.0);
    CHECK(map[ix] < 2 * pi);
    if (ix + 8 < g.nx()) CHECK(std::abs(map[ix + 8] - map[ix]) < 1e-9);
  }
  const auto q = quantize_8bit(map);
  const auto back = dequantize_8bit(q);
  for (std::size_t i = 0; i < map.size(); ++i) CHECK(std::abs(back[i] - map[i]) <= pi / 255 + 1e-15);

  plan.kind = GratingKind::binary;
  map = render_grating(plan);
  for (std::size_t i = 0; i < map.size(); ++i) CHECK((map[i] == 0.0 || map[i] == 2 * pi));
  for (std::size_t ix = 0; ix + 8 < g.nx(); ++ix) CHECK(map[ix + 8] == map[ix]);

  plan.kind = GratingKind::sinusoidal;
  map = render_grating(plan);
  for (std::size_t ix = 0; ix < g.nx(); ++ix)
    CHECK(std::abs(map[ix] - pi * (1 + std::sin(0.1 + 2 * pi * g.x(ix) / pitch)) / 2) < 1e-12);

  // Under-resolved pitch.
  plan.pitch = 1.5;
  CHECK_THROWS_AS(render_grating(plan), std::invalid_argument);
}

TEST_CASE("pgm export") {
  const auto path = std::filesystem::temp_directory_path() / "superwave_test.pgm";
  const std::vector<std::uint8_t> lv{0, 10, 255, 3, 4, 5};
  write_pgm(path, 3, 2, lv);
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  std::size_t w, h, mx;
  in >> magic >> w >> h >> mx;
  in.get();
  std::vector<char> body(6);
  in.read(body.data(), 6);
  CHECK(magic == "P5");
  CHECK(w == 3);
  CHECK(h == 2);
  CHECK(mx == 255);
  for (int i = 0; i < 6; ++i) CHECK(static_cast<std::uint8_t>(body[i]) == lv[i]);
  std::filesystem::remove(path);
}

TEST_CASE("simulated first order: pure grating") {
  const auto g = Grid2D::centered(128, 128, 1.0, 1.0);
  const auto plan = uniform_plan(g, 1.0, pi, 8.0);
  for (int s : {1, 9}) {
    SimulationOptions o;
    o.oversample = s;
    const auto f = simulate_first_order(plan, o);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f[i] - cdouble(1.0, 0.0)) < 1e-12);
  }
  // All the transmitted power sits in the carrier bin.
  const auto map = render_grating(plan);
  std::vector<cdouble> t(map.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::polar(1.0, map[i]);
  const auto spec = forward_transform(SampledField(g, t));
  double total = 0, carrier = 0;
  for (std::size_t iy = 0; iy < spec.ny(); ++iy)
    for (std::size_t ix = 0; ix < spec.nx(); ++ix) {
      const double p = std::norm(spec.values()[iy * spec.nx() + ix]);
      total += p;
      if (std::abs(spec.kx(ix) - 2 * pi / 8.0) < 1e-12 && spec.ky(iy) == 0.0) carrier += p;
    }
  CHECK(carrier / total > 1 - 1e-12);
}

TEST_CASE("simulated against closed form on smooth targets") {
  const auto g = Grid2D::centered(256, 256, 1.0, 1.0);
  for (unsigned seed : {11u, 21u}) {
    const auto t = smooth_amplitude_phase(g, 0.03, seed);
    for (double pitch : {8.0, 16.0}) {
      const auto plan = encode_hologram(t, pitch);
      const auto closed = first_order_field(plan);
      const double err = rms_relative(simulate_first_order(plan), closed);
      SimulationOptions q;
      q.quantize = true;
      const double errq = rms_relative(simulate_first_order(plan, q), closed);
      MESSAGE("seed " << seed << " pitch " << pitch << " px: rms " << err << ", 8-bit " << errq);
      CHECK(err <= 0.02);
      CHECK(errq <= 0.02);
    }
  }
}

TEST_CASE("order overlap is rejected") {
  const auto g = Grid2D::centered(128, 128, 1.0, 1.0);
  const auto t = smooth_target(g, 0.5, 5);
  const auto plan = encode_hologram(t, 8.0);  // window half-width π/8 < 0.5
  try {
    simulate_first_order(plan);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("pitch <") != std::string::npos);
  }
}

TEST_CASE("Laguerre-Gauss p=5 m=1: six rings and a unit vortex") {
  const auto g = Grid2D::centered(512, 512, 1.0, 1.0);
  const auto lg = laguerre_gauss(g, 5, 1, 40.0);
  const auto plan = encode_hologram(lg, 4.0);
  const auto f = simulate_first_order(plan);

  // Azimuthally averaged intensity on unit-width radial bins.
  std::vector<double> sum(260, 0.0), cnt(260, 0.0);
  for (std::size_t iy = 0; iy < g.ny(); ++iy)
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const auto r = static_cast<std::size_t>(std::hypot(g.x(ix), g.y(iy)));
      if (r < sum.size()) {
        sum[r] += std::norm(f[g.index(ix, iy)]);
        cnt[r] += 1;
      }
    }
  std::vector<double> prof(sum.size());
  double top = 0;
  for (std::size_t r = 0; r < sum.size(); ++r) top = std::max(top, prof[r] = sum[r] / cnt[r]);
  int rings = 0;
  for (std::size_t r = 1; r + 1 < prof.size(); ++r)
    if (prof[r] > prof[r - 1] && prof[r] >= prof[r + 1] && prof[r] > 1e-2 * top) ++rings;
  CHECK(rings == 6);
  // The encoding leaks some zeroth order into the dark core (3.7% measured).
  CHECK(std::norm(f[g.index(g.nx() / 2, g.ny() / 2)]) < 0.05 * top);

  // Phase winding around the center.
  const std::size_t cx = g.nx() / 2, cy = g.ny() / 2;
  const int ring[][2] = {{3, 0}, {3, 3}, {0, 3}, {-3, 3}, {-3, 0}, {-3, -3}, {0, -3}, {3, -3}};
  double wind = 0;
  for (int i = 0; i < 8; ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % 8];
    const cdouble fa = f[g.index(cx + a[0], cy + a[1])], fb = f[g.index(cx + b[0], cy + b[1])];
    wind += std::arg(fb / fa);
  }
  CHECK(std::abs(wind / (2 * pi) - 1.0) < 1e-6);
}

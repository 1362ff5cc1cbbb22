#include <doctest.h>

#include <cmath>
#include <numbers>

#include "superwave/local_analysis.hpp"

using namespace superwave;
using std::numbers::pi;

namespace {

template <typename F>
SampledField sample(const Grid1D& g, F f) {
  std::vector<cdouble> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.coord(i));
  return SampledField(g, v);
}

std::size_t index_of_zero(const Grid1D& g) {
  const auto i = static_cast<std::size_t>(std::llround(-g.origin() / g.spacing()));
  REQUIRE(g.coord(i) == doctest::Approx(0.0).epsilon(1e-14));
  return i;
}

cdouble eq1(double x, int N, double a) {
  return std::pow(cdouble(std::cos(x / N), a * std::sin(x / N)), N);
}

}  // namespace

TEST_CASE("pure exponential has constant local wavenumber") {
  const auto g = Grid1D::centered(256, 2 * pi);
  const auto m = local_analysis(sample(g, [](double x) { return std::polar(1.0, 3 * x); }));
  CHECK(m.valid_count() == 256);
  for (std::size_t i = 0; i < 256; ++i) {
    CHECK(std::abs(m.k_local[i] - 3.0) < 1e-8);
    CHECK(std::abs(m.kappa_local[i]) < 1e-8);
  }
}

TEST_CASE("product function N=20 a=6 at the origin") {
  const auto g = Grid1D::centered(4096, 20.0);
  const auto f = sample(g, [](double x) { return eq1(x, 20, 6.0); });
  LocalOptions opt;
  opt.scheme = DerivativeScheme::central4;
  opt.reference_bandlimit = 1.0;
  const auto m = local_analysis(f, opt);
  const auto i0 = index_of_zero(g);
  REQUIRE(m.valid[i0]);
  CHECK(std::abs(m.k_local[i0] - 6.0) < 1e-6);
  CHECK(std::abs(m.kappa_local[i0]) < 1e-6);

  const auto rep = super_regions(m, 1.0);
  bool contains_origin = false;
  for (const auto& r : rep.superoscillating)
    if (r.x_min <= 0.0 && r.x_max >= 0.0) contains_origin = true;
  CHECK(contains_origin);
  CHECK(rep.superoscillating_fraction > 0.0);
}

TEST_CASE("real Gaussian: zero wavenumber and linear growth rate") {
  const auto g = Grid1D::centered(1024, 40.0);
  const auto m = local_analysis(sample(g, [](double x) { return std::exp(-x * x / 2); }));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!m.valid[i]) continue;
    CHECK(std::abs(m.k_local[i]) < 1e-8);
    CHECK(std::abs(m.kappa_local[i] + g.coord(i)) < 1e-6);
    ++checked;
  }
  // Valid where e^{-x²/2} > 1e-6, i.e. |x| < 5.26.
  CHECK(checked > 2 * 5 * 1024 / 40);
}

TEST_CASE("exponential growth with central differences") {
  const auto g = Grid1D::centered(400, 4.0);
  LocalOptions opt;
  opt.scheme = DerivativeScheme::central4;
  const auto m = local_analysis(sample(g, [](double x) { return std::exp(2 * x); }), opt);
  CHECK_FALSE(m.valid[0]);
  CHECK_FALSE(m.valid[399]);
  for (std::size_t i = 2; i + 2 < 400; ++i) {
    REQUIRE(m.valid[i]);
    CHECK(std::abs(m.kappa_local[i] - 2.0) < 1e-6);
  }
}

TEST_CASE("all-zero field gives an all-invalid map with a warning") {
  const auto m = local_analysis(SampledField(Grid1D(64, 0.1), std::vector<cdouble>(64)));
  CHECK(m.valid_count() == 0);
  CHECK_FALSE(m.warnings.empty());
  CHECK_THROWS_AS(super_regions(m, 1.0), std::invalid_argument);
}

TEST_CASE("supergrowth strength of an irradiance") {
  const auto g = Grid1D::centered(2048, 40.0);
  const auto irr = sample(g, [](double x) { return std::exp(-x * x); });
  const auto m = supergrowth_strength(irr, 4.0, FieldKind::irradiance);
  std::size_t above = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!m.valid[i]) continue;
    const double x = g.coord(i);
    // Spectral errors are global, so the relative accuracy degrades as I → 0.
    const double tol = irr[i].real() > 1e-6 ? 1e-8 : 1e-2;
    CHECK(std::abs(m.gamma[i] - std::abs(2 * x) / 4) < tol);
    if (m.gamma[i] > 1) {
      ++above;
      CHECK(std::abs(x) > 2.0);
    } else {
      CHECK(std::abs(x) <= 2.0 + 1e-9);
    }
  }
  CHECK(above > 0);

  const auto flat = supergrowth_strength(sample(g, [](double) { return 2.5; }), 4.0,
                                         FieldKind::irradiance);
  for (double v : flat.gamma) CHECK(v == 0.0);

  CHECK_THROWS_AS(supergrowth_strength(sample(g, [](double x) { return x; }), 4.0,
                                       FieldKind::irradiance),
                  std::invalid_argument);
}

TEST_CASE("designed supergrowth versus control") {
  // I = (cos(x/N) + b sin(x/N))^{2N}: Γ(0) = b with irradiance band 2.
  // b = 0 gives cos^{2N}, whose Γ = tan(|x|/N) stays ≤ 1 on |x| ≤ Nπ/4.
  const int N = 10;
  const auto g = Grid1D::centered(2001, N * pi / 2);
  LocalOptions opt;
  opt.scheme = DerivativeScheme::central4;
  for (double b : {3.0, 0.0}) {
    const auto f = sample(g, [&](double x) { return std::pow(std::cos(x / N) + b * std::sin(x / N), N); });
    const auto m = supergrowth_strength(f, 2.0, FieldKind::amplitude, opt);
    const auto i0 = index_of_zero(g);
    REQUIRE(m.valid[i0]);
    CHECK(m.gamma[i0] == doctest::Approx(b).epsilon(1e-8));
    double gmax = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (m.valid[i]) gmax = std::max(gmax, m.gamma[i]);
    if (b == 0.0)
      CHECK(gmax <= 1.0 + 1e-6);
    else
      CHECK(gmax > 1.0);
  }
}

TEST_CASE("tone at the band limit is not superoscillating") {
  const auto g = Grid1D::centered(512, 8 * pi);
  const auto m = local_analysis(sample(g, [](double x) { return std::polar(1.0, x); }));
  const auto rep = super_regions(m, 1.0);
  CHECK(rep.superoscillating_fraction == 0.0);
  CHECK(rep.superoscillating.empty());
}

TEST_CASE("logarithmic derivative matches a central-difference oracle") {
  // f = exp(i sin x + cos(2x)/2) is nowhere zero; evaluate the oracle on the closed form.
  auto f = [](double x) { return std::exp(cdouble(std::cos(2 * x) / 2, std::sin(x))); };
  const auto g = Grid1D::centered(256, 2 * pi);
  const auto m = local_analysis(sample(g, f));
  const double h = 1e-4;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(i);
    const cdouble oracle = (f(x + h) - f(x - h)) / (2 * h) / f(x);
    CHECK(std::abs(cdouble(m.kappa_local[i], m.k_local[i]) - oracle) < 1e-6);
  }
}

TEST_CASE("invariances") {
  auto f = [](double x) { return std::exp(cdouble(std::cos(2 * x) / 2, std::sin(x))); };
  const auto g = Grid1D::centered(256, 2 * pi);
  const auto base = local_analysis(sample(g, f));

  const auto scaled = local_analysis(sample(g, [&](double x) { return 4.0 * f(x); }));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(scaled.k_local[i] == base.k_local[i]);
    CHECK(scaled.kappa_local[i] == base.kappa_local[i]);
    CHECK(scaled.gamma[i] == base.gamma[i]);
  }
  const auto shifted = local_analysis(sample(g, [&](double x) { return f(x) * std::polar(1.0, 5 * x); }));
  const auto conj = local_analysis(sample(g, [&](double x) { return std::conj(f(x)); }));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(shifted.k_local[i] - base.k_local[i] - 5.0) < 1e-8);
    CHECK(std::abs(shifted.kappa_local[i] - base.kappa_local[i]) < 1e-8);
    CHECK(std::abs(conj.k_local[i] + base.k_local[i]) < 1e-12);
    CHECK(std::abs(conj.kappa_local[i] - base.kappa_local[i]) < 1e-12);
  }
}

TEST_CASE("2D plane wave and connected regions") {
  const Grid2D g(64, 64, 0.25, 0.25, -8.0, -8.0);
  const double dk = 2 * pi / 16.0;
  std::vector<cdouble> v(g.size());
  for (std::size_t iy = 0; iy < 64; ++iy)
    for (std::size_t ix = 0; ix < 64; ++ix)
      v[g.index(ix, iy)] = std::polar(1.0, 3 * dk * g.x(ix) - 4 * dk * g.y(iy));
  const auto m = local_analysis(SampledField(g, v));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(m.k_local[i] == doctest::Approx(5 * dk).epsilon(1e-10));
    CHECK(m.k_x[i] == doctest::Approx(3 * dk).epsilon(1e-10));
    CHECK(m.k_y[i] == doctest::Approx(-4 * dk).epsilon(1e-10));
  }

  // Two separate blobs above the limit give two components.
  LocalMap blob = m;
  for (std::size_t i = 0; i < g.size(); ++i) blob.k_local[i] = 0.0;
  for (std::size_t iy = 10; iy < 14; ++iy)
    for (std::size_t ix = 10; ix < 13; ++ix) blob.k_local[g.index(ix, iy)] = 2.0;
  for (std::size_t iy = 40; iy < 42; ++iy)
    for (std::size_t ix = 50; ix < 60; ++ix) blob.k_local[g.index(ix, iy)] = -3.0;
  const auto rep = super_regions(blob, 1.0);
  REQUIRE(rep.superoscillating.size() == 2);
  CHECK(rep.superoscillating[0].samples == 12);
  CHECK(rep.superoscillating[0].x_min == doctest::Approx(g.x(10)));
  CHECK(rep.superoscillating[0].y_max == doctest::Approx(g.y(13)));
  CHECK(rep.superoscillating[1].samples == 20);
  CHECK(rep.superoscillating_fraction == doctest::Approx(32.0 / 4096));
}

TEST_CASE("zero crossings and zero-spacing frequency") {
  const auto g = Grid1D::centered(4000, 20.0);
  std::vector<double> v;
  for (std::size_t i = 0; i < g.size(); ++i) v.push_back(std::sin(3 * g.coord(i) + 0.2));
  const auto z = zero_crossings(g, v);
  REQUIRE(z.size() > 10);
  for (double x : z) CHECK(std::abs(std::sin(3 * x + 0.2)) < 1e-4);
  CHECK(zero_spacing_frequency(g, v, -10, 10) == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(zero_spacing_frequency(g, v, 0.0, 0.5) == 0.0);

  std::vector<double> exact{1.0, 0.0, -1.0, 0.0, 0.0, 2.0};
  const auto ze = zero_crossings(Grid1D(6, 1.0), exact);
  REQUIRE(ze.size() == 2);
  CHECK(ze[0] == 1.0);
  CHECK(ze[1] == 3.0);
}

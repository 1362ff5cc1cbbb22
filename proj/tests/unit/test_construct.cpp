#include <doctest.h>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "superwave/construct.hpp"
#include "superwave/local_analysis.hpp"

using namespace superwave;
using std::numbers::pi;

namespace {

std::size_t index_of_zero(const Grid1D& g) {
  const auto i = static_cast<std::size_t>(std::llround(-g.origin() / g.spacing()));
  REQUIRE(std::abs(g.coord(i)) < 1e-12);
  return i;
}

}  // namespace

TEST_CASE("product function basics") {
  for (int N : {1, 4, 7, 20})
    for (double a : {0.0, 2.0, 6.0}) {
      const auto g = Grid1D::centered(64, 10.0);
      const auto f = product_function({N, a}, g);
      CHECK(f[index_of_zero(g)] == cdouble(1.0, 0.0));
      REQUIRE(f.band());
      CHECK(f.band()->k_max() == 1.0);
      // |f|² = (cos² + a² sin²)^N
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = g.coord(i) / N;
        const double irr = std::pow(std::cos(t) * std::cos(t) + a * a * std::sin(t) * std::sin(t), N);
        CHECK(std::abs(std::norm(f[i]) / irr - 1) < 1e-10);
      }
    }
}

TEST_CASE("product function Fourier coefficients") {
  const auto s1 = product_fourier_coeffs({1, 0.0});
  REQUIRE(s1.terms.size() == 2);
  CHECK(s1.terms[0].k == 1.0);
  CHECK(s1.terms[1].k == -1.0);
  CHECK(s1.terms[0].c == cdouble(0.5));
  CHECK(s1.terms[1].c == cdouble(0.5));

  const auto s = product_fourier_coeffs({20, 6.0});
  CHECK(std::abs(s.coefficient_sum - 1.0) < 1e-12);
  CHECK(s.coefficient_abs_sum == doctest::Approx(std::pow(6.0, 20)).epsilon(1e-12));

  const auto g = product_period_grid(20, 512);
  const auto f = product_function({20, 6.0}, g);
  const auto r = resum(s.terms, g);
  double err = 0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(r[i] - f[i]));
  CHECK(err / f.max_abs() < 1e-10);
}

TEST_CASE("product function spectrum matches the binomial expansion") {
  for (int N : {4, 10, 20}) {
    const auto g = product_period_grid(N, 4096);
    const auto spec = forward_transform(product_function({N, 6.0}, g));
    const auto series = product_fourier_coeffs({N, 6.0});
    for (const auto& t : series.terms) {
      const long s = std::lround(t.k / spec.dkx());
      const auto c = spec.series_coefficient(bin_of(s, spec.nx()));
      CHECK(std::abs(c - t.c) / std::abs(t.c) < 1e-9);
    }
    const double bin = spec.dkx();
    CHECK(std::abs(measured_bandlimit(product_function({N, 6.0}, g), 1e-9) - 1.0) <= bin);
  }
}

TEST_CASE("product function overflow guard") {
  const auto g = Grid1D::centered(256, 400 * pi);
  const auto f = product_function({400, 10.0}, g);
  CHECK(f.log_scale() > 690.0);
  CHECK(f.max_abs() == doctest::Approx(1.0));
}

TEST_CASE("product function local wavenumber at the origin") {
  const auto g = Grid1D::centered(4096, 20.0);
  LocalOptions opt;
  opt.scheme = DerivativeScheme::central4;
  const auto m = local_analysis(product_function({20, 6.0}, g), opt);
  const auto i0 = index_of_zero(g);
  CHECK(std::abs(m.k_local[i0] - 6.0) < 1e-6);
  CHECK(m.reference_bandlimit == 1.0);
}

TEST_CASE("canvas function") {
  const auto g = Grid1D::centered(8192, 400.0);
  SUBCASE("constant polynomial gives the canvas itself") {
    for (int m : {3, 5, 8}) {
      const auto f = canvas_function({2.0, m, {1.0}}, g);
      CHECK(f[index_of_zero(g)] == cdouble(1.0));
      for (std::size_t i = 0; i < g.size(); i += 97)
        CHECK(f[i].real() == doctest::Approx(canvas_envelope(2.0, m, g.coord(i))));
    }
  }
  SUBCASE("square integrability is enforced") {
    CanvasDesign d{2.0, 3, {1.0, 0.5}};
    CHECK_THROWS_WITH_AS(canvas_function(d, g), doctest::Contains("a square-integrable function"),
                         std::invalid_argument);
    d.allow_non_square_integrable = true;
    CHECK_NOTHROW(canvas_function(d, g));
    CHECK(canvas_function({2.0, 1, {1.0}, true}, g)[index_of_zero(g)] == cdouble(1.0));
  }
  SUBCASE("c5 band limit against a numerically convolved spectrum") {
    // Oracle: the spectrum of sinc(Ωx/5) is a rect of half-width Ω/5; convolving
    // it with itself 5 times on a fine k grid gives the support edge.
    const double omega = 2.0, dk = 1e-3;
    const int half = static_cast<int>(std::lround(omega / 5 / dk));
    std::vector<double> rect(2 * half + 1, 1.0), conv = rect;
    for (int r = 1; r < 5; ++r) {
      std::vector<double> next(conv.size() + rect.size() - 1, 0.0);
      for (std::size_t i = 0; i < conv.size(); ++i)
        for (std::size_t j = 0; j < rect.size(); ++j) next[i + j] += conv[i] * rect[j];
      conv = std::move(next);
    }
    const double support = (static_cast<double>(conv.size()) - 1) / 2 * dk;
    CHECK(support == doctest::Approx(omega).epsilon(1e-9));

    // Window 128π puts the band edge Ω = 2 exactly on a bin.
    const auto gc = Grid1D::centered(8192, 128 * pi);
    const auto c5 = canvas_function({omega, 5, {1.0}}, gc);
    const double bin = 2 * pi / gc.length();
    CHECK(std::abs(measured_bandlimit(c5, 1e-20) - support) <= bin);
    CHECK(measured_bandlimit(c5, 1e-9) <= omega + bin);
  }
  SUBCASE("fitted polynomial imprints a superoscillation") {
    // Target e^{4ix} on |x| < 1 with Ω = 1: local wavenumber 4 exceeds the band.
    const int n = 20, m = 22;
    const auto coeffs = fit_canvas_polynomial([](double x) { return std::polar(1.0, 4 * x); },
                                              -1.0, 1.0, n, 1.0, m);
    const auto g2 = Grid1D::centered(16384, 2000.0);
    const auto f = canvas_function({1.0, m, coeffs}, g2);
    LocalOptions opt;
    opt.scheme = DerivativeScheme::central4;
    const auto map = local_analysis(f, opt);
    for (std::size_t i = 0; i < g2.size(); ++i) {
      if (std::abs(g2.coord(i)) > 0.9) continue;
      REQUIRE(map.valid[i]);
      CHECK(map.k_local[i] > 1.0);
      CHECK(std::abs(map.k_local[i] - 4.0) < 0.05);
    }
    CHECK(measured_bandlimit(f, 1e-9) <= 1.0 + 2 * pi / g2.length());
  }
}

TEST_CASE("forced zeros") {
  const double omega = 1.0;
  const Grid2D g = Grid2D::centered(256, 256, pi / (2 * omega), pi / (2 * omega));
  ForcedZeroDesign d;
  d.omega = omega;

  SUBCASE("empty zero list is the pure cosine-power transform") {
    const auto f = forced_zero_field(d, g);
    CHECK(std::abs(f[g.index(128, 128)] - 1.0) < 1e-12);
    // Independent evaluation as a sum over in-band bins.
    const double dk = 2 * pi / (256 * g.dx());
    for (std::size_t ix : {0u, 100u, 131u})
      for (std::size_t iy : {5u, 128u}) {
        cdouble acc = 0, dc = 0;
        for (int sy = -128; sy < 128; ++sy)
          for (int sx = -128; sx < 128; ++sx) {
            const double kx = sx * dk, ky = sy * dk;
            if (std::abs(kx) > omega / 2 || std::abs(ky) > omega / 2) continue;
            const double w = std::pow(std::cos(pi * kx / omega), 6) * std::pow(std::cos(pi * ky / omega), 6);
            acc += w * std::polar(1.0, kx * g.x(ix) + ky * g.y(iy));
            dc += w;
          }
        CHECK(std::abs(f[g.index(ix, iy)] - acc / dc) < 1e-12);
      }
  }
  SUBCASE("prescribed lines vanish and the band is kept") {
    d.zeros = {{g.x(126), g.y(127)}, {g.x(132), g.y(116)}};
    const auto f = forced_zero_field(d, g);
    const double peak = f.max_abs();
    for (std::size_t k = 0; k < 256; ++k) {
      CHECK(std::abs(f[g.index(126, k)]) < 1e-12 * peak);
      CHECK(std::abs(f[g.index(132, k)]) < 1e-12 * peak);
      CHECK(std::abs(f[g.index(k, 127)]) < 1e-12 * peak);
      CHECK(std::abs(f[g.index(k, 116)]) < 1e-12 * peak);
    }
    const auto band = measured_bandlimit_axes(f, 1e-9);
    const double bin = 2 * pi / (256 * g.dx());
    CHECK(band[0] <= omega / 2 + bin);
    CHECK(band[1] <= omega / 2 + bin);
  }
  SUBCASE("three zeros inside the central lobe") {
    const double x0 = 1 / omega;
    const Grid2D fine = Grid2D::centered(128, 128, x0 / 4, x0 / 4);
    d.zeros = {{-x0, -x0}, {0.0, 0.0}, {x0, x0}};
    const auto f0 = forced_zero_field(ForcedZeroDesign{omega, 6, 6, {}}, fine);
    const auto gz = forced_zero_field(d, fine);
    for (std::size_t ix = 0; ix < 128; ++ix) {
      const double x = fine.x(ix);
      if (std::abs(x) > x0 + 1e-12) continue;
      // The unmodified field is still near its peak where the zeros sit.
      CHECK(f0[fine.index(ix, 64)].real() > 0.9);
    }
    for (std::size_t ix : {60u, 64u, 68u}) CHECK(std::abs(gz[fine.index(ix, 70)]) == 0.0);
  }
  SUBCASE("rejections") {
    d.zeros = {{1e6, 0.0}};
    CHECK_THROWS_AS(forced_zero_field(d, g), std::invalid_argument);
    d.zeros.clear();
    CHECK_THROWS_AS(forced_zero_field(d, Grid2D::centered(32, 32, 2.0, 2.0)), std::invalid_argument);
  }
}

TEST_CASE("Taylor matching coefficients") {
  SUBCASE("degenerate a = k_m") {
    const auto d = taylor_match_coeffs(8, 1.0 - 2.0 * 3 / 8);
    for (int j = 0; j <= 8; ++j) CHECK(d.X[j] == (j == 3 ? 1.0 : 0.0));
  }
  SUBCASE("N=4 a=2 against a Vandermonde solve") {
    const auto d = taylor_match_coeffs(4, 2.0);
    double s0 = 0, s1 = 0;
    for (int j = 0; j <= 4; ++j) s0 += d.X[j], s1 += d.X[j] * d.k[j];
    CHECK(std::abs(s0 - 1) < 1e-10);
    CHECK(std::abs(s1 - 2) < 1e-10);
    Eigen::MatrixXd v(5, 5);
    Eigen::VectorXd rhs(5);
    for (int r = 0; r < 5; ++r) {
      for (int j = 0; j < 5; ++j) v(r, j) = std::pow(d.k[j], r);
      rhs(r) = std::pow(2.0, r);
    }
    const Eigen::VectorXd x = v.fullPivLu().solve(rhs);
    for (int j = 0; j < 5; ++j) CHECK(std::abs(x(j) - d.X[j]) < 1e-10 * (1 + std::abs(x(j))));
  }
  SUBCASE("50-digit route for large coefficient sums") {
    // Double moment sums lose ~eps·Σ|X_j| here, so the identity is checked in
    // 50 digits and the library values against it to a few ulps.
    using mp = boost::multiprecision::cpp_bin_float_50;
    for (double a : {2.0, 3.0})
      for (int N : {8, 12, 16}) {
        const auto d = taylor_match_coeffs(N, a);
        std::vector<mp> k(N + 1), X(N + 1);
        for (int j = 0; j <= N; ++j) k[j] = 1 - mp(2 * j) / N;
        for (int j = 0; j <= N; ++j) {
          X[j] = 1;
          for (int i = 0; i <= N; ++i)
            if (i != j) X[j] *= (k[i] - a) / (k[i] - k[j]);
          CHECK(std::abs(d.X[j] - static_cast<double>(X[j])) <= 1e-14 * std::abs(static_cast<double>(X[j])));
        }
        for (int r = 0; r <= N; ++r) {
          mp s = 0;
          for (int j = 0; j <= N; ++j) s += X[j] * pow(k[j], r);
          CHECK(static_cast<double>(abs(s / pow(mp(a), r) - 1)) < 1e-30);
        }
      }
  }
  SUBCASE("f_N mimics e^{iax} near the origin") {
    const auto d = taylor_match_coeffs(12, 3.0);
    const auto g = product_period_grid(12, 2048);
    // Σ|X_j| ≈ 1e7 here, so the global mask must sit well below the default.
    LocalOptions opt;
    opt.mask_threshold = 1e-12;
    const auto m = local_analysis(taylor_field(d, g), opt);
    REQUIRE(m.valid[index_of_zero(g)]);
    const auto i0 = index_of_zero(g);
    CHECK(std::abs(m.k_local[i0] - 3.0) < 1e-4);
    CHECK(measured_bandlimit(taylor_field(d, g), 1e-9) <= 1.0 + 2 * pi / g.length());
  }
}

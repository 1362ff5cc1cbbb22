#include "superwave/propagate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "fft.hpp"
#include "superwave/parallel.hpp"
#include "superwave/random.hpp"

namespace superwave {

namespace {
constexpr double kPi = std::numbers::pi;
}

PropagationKernel propagation_kernel_from_string(std::string_view name) {
  if (name == "paraxial") return PropagationKernel::paraxial;
  if (name == "helmholtz") return PropagationKernel::helmholtz;
  throw std::invalid_argument("unknown propagation kernel '" + std::string(name) + "'");
}

std::string_view to_string(PropagationKernel kernel) {
  return kernel == PropagationKernel::paraxial ? "paraxial" : "helmholtz";
}

PropagationResult propagate_field(const SampledField& field, const PropagationSetup& setup) {
  if (!(setup.wavelength > 0.0)) throw std::invalid_argument("propagate: wavelength must be positive");
  if (!std::isfinite(setup.z)) throw std::invalid_argument("propagate: z must be finite");
  if (setup.pad_factor < 1) throw std::invalid_argument("propagate: pad factor must be >= 1");

  const std::size_t nx = field.nx(), ny = field.ny();
  const bool two = field.is_2d();
  const std::size_t px = nx * setup.pad_factor, py = two ? ny * setup.pad_factor : 1;
  const std::size_t ox = (px - nx) / 2, oy = (py - ny) / 2;
  const double dx = field.dx();
  const double dy = two ? field.grid2d().dy() : dx;

  std::vector<cdouble> data(px * py);
  const auto v = field.values();
  for (std::size_t iy = 0; iy < ny; ++iy)
    std::copy_n(v.begin() + iy * nx, nx, data.begin() + (iy + oy) * px + ox);

  detail::fft_inplace(data, px, py, detail::FftDirection::forward);

  const double k = 2 * kPi / setup.wavelength;
  const double dkx = 2 * kPi / (px * dx), dky = 2 * kPi / (py * dy);
  const double nyq_x = 0.9 * kPi / dx, nyq_y = 0.9 * kPi / dy;
  double total = 0.0, near_nyquist = 0.0;
  for (std::size_t iy = 0; iy < py; ++iy) {
    const double ky = two ? signed_bin(iy, py) * dky : 0.0;
    for (std::size_t ix = 0; ix < px; ++ix) {
      const double kx = signed_bin(ix, px) * dkx;
      cdouble& c = data[iy * px + ix];
      const double p = std::norm(c);
      total += p;
      if (std::abs(kx) > nyq_x || (two && std::abs(ky) > nyq_y)) near_nyquist += p;
      const double kt2 = kx * kx + ky * ky;
      if (setup.kernel == PropagationKernel::paraxial) {
        c *= std::polar(1.0, -setup.z * kt2 / (2 * k));
      } else if (kt2 <= k * k) {
        c *= std::polar(1.0, setup.z * (std::sqrt(k * k - kt2) - k));
      } else {
        c *= std::exp(-std::abs(setup.z) * std::sqrt(kt2 - k * k)) * std::polar(1.0, -setup.z * k);
      }
    }
  }

  detail::fft_inplace(data, px, py, detail::FftDirection::backward);
  const double norm = 1.0 / static_cast<double>(px * py);
  std::vector<cdouble> out(nx * ny);
  double inside = 0.0, all = 0.0;
  for (std::size_t iy = 0; iy < py; ++iy)
    for (std::size_t ix = 0; ix < px; ++ix) {
      const cdouble c = data[iy * px + ix] * norm;
      const double p = std::norm(c);
      all += p;
      if (iy >= oy && iy < oy + ny && ix >= ox && ix < ox + nx) {
        out[(iy - oy) * nx + (ix - ox)] = c;
        inside += p;
      }
    }

  PropagationResult r{field.with_values(std::move(out)), 0.0, 0.0, {}};
  r.nyquist_leakage = total > 0 ? near_nyquist / total : 0.0;
  r.window_leakage = all > 0 ? (all - inside) / all : 0.0;
  if (r.window_leakage < 0) r.window_leakage = 0;
  char buf[160];
  if (r.nyquist_leakage > 0.01) {
    std::snprintf(buf, sizeof buf, "aliasing risk: %.3g of the power lies within 10%% of Nyquist",
                  r.nyquist_leakage);
    r.warnings.emplace_back(buf);
  }
  if (r.window_leakage > 0.01) {
    std::snprintf(buf, sizeof buf, "wraparound risk: %.3g of the propagated power left the window",
                  r.window_leakage);
    r.warnings.emplace_back(buf);
  }
  return r;
}

Spectrum far_field(const SampledField& aperture) { return forward_transform(aperture); }

std::vector<PropagationResult> propagate_planes(const SampledField& field,
                                                const PropagationSetup& setup,
                                                const std::vector<double>& z_values,
                                                unsigned threads) {
  std::vector<std::optional<PropagationResult>> tmp(z_values.size());
  parallel_for(z_values.size(), threads, [&](std::size_t i) {
    auto s = setup;
    s.z = z_values[i];
    tmp[i] = propagate_field(field, s);
  });
  std::vector<PropagationResult> out;
  out.reserve(tmp.size());
  for (auto& t : tmp) out.push_back(std::move(*t));
  return out;
}

// ---- quasiperiodic hole arrays ---------------------------------------------

namespace {

// Vertices (in edge units) of the de Bruijn tiling within radius r_max.
std::vector<std::array<double, 2>> multigrid_vertices(int m, const std::vector<double>& gamma,
                                                      double r_max) {
  std::vector<std::array<double, 2>> e(m);
  for (int j = 0; j < m; ++j) e[j] = {std::cos(kPi * j / m), std::sin(kPi * j / m)};
  // v(x) = Σ K_j e_j ≈ (m/2)x, so grid-space radius 2r/m plus margin covers r.
  const double rg = 2.0 * r_max / m + 2.0;
  std::map<std::pair<long long, long long>, std::array<double, 2>> found;
  for (int j = 0; j < m; ++j)
    for (int l = j + 1; l < m; ++l) {
      const double det = e[j][0] * e[l][1] - e[j][1] * e[l][0];
      const long lo_j = static_cast<long>(std::floor(-rg + gamma[j])), hi_j = static_cast<long>(std::ceil(rg + gamma[j]));
      const long lo_l = static_cast<long>(std::floor(-rg + gamma[l])), hi_l = static_cast<long>(std::ceil(rg + gamma[l]));
      for (long nj = lo_j; nj <= hi_j; ++nj)
        for (long nl = lo_l; nl <= hi_l; ++nl) {
          // x·e_j = nj − γ_j, x·e_l = nl − γ_l
          const double a = nj - gamma[j], b = nl - gamma[l];
          const double x = (a * e[l][1] - b * e[j][1]) / det;
          const double y = (e[j][0] * b - e[l][0] * a) / det;
          std::vector<long> K(m);
          for (int q = 0; q < m; ++q)
            K[q] = static_cast<long>(std::ceil(x * e[q][0] + y * e[q][1] + gamma[q]));
          for (int dj = 0; dj < 2; ++dj)
            for (int dl = 0; dl < 2; ++dl) {
              K[j] = nj + dj;
              K[l] = nl + dl;
              double vx = 0, vy = 0;
              for (int q = 0; q < m; ++q) {
                vx += K[q] * e[q][0];
                vy += K[q] * e[q][1];
              }
              if (std::hypot(vx, vy) > r_max) continue;
              found.emplace(std::pair{std::llround(vx * 1e6), std::llround(vy * 1e6)},
                            std::array<double, 2>{vx, vy});
            }
        }
    }
  std::vector<std::array<double, 2>> out;
  out.reserve(found.size());
  for (const auto& [key, v] : found) out.push_back(v);
  return out;
}

}  // namespace

HoleArray quasiperiodic_mask(const HoleArraySpec& spec, const Grid2D& grid) {
  if (spec.symmetry_order < 4 || spec.symmetry_order % 2 != 0)
    throw std::invalid_argument("hole array: symmetry order must be even and >= 4");
  if (!(spec.hole_diameter > 0) || !(spec.hole_diameter < spec.min_separation))
    throw std::invalid_argument("hole array: need 0 < hole diameter < minimum separation");
  if (!(spec.aperture_diameter > spec.hole_diameter))
    throw std::invalid_argument("hole array: aperture must be wider than one hole");
  if (spec.hole_diameter < 6 * grid.dx() || spec.hole_diameter < 6 * grid.dy())
    throw std::invalid_argument("hole array: grid must resolve the hole diameter with >= 6 samples");

  const int m = spec.symmetry_order / 2;
  CounterRng rng(spec.seed, 0);
  std::vector<double> gamma(m);
  for (auto& g : gamma) g = rng.uniform();

  const double edge = spec.min_separation / (2.0 * std::sin(kPi / (2.0 * m)));
  const double reach = (spec.aperture_diameter - spec.hole_diameter) / 2.0;
  auto verts = multigrid_vertices(m, gamma, reach / edge);

  // Fisher–Yates with the counter generator keeps the order portable.
  for (std::size_t i = verts.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(verts[i - 1], verts[std::min(j, i - 1)]);
  }
  std::vector<std::array<double, 2>> kept;
  const double sep2 = spec.min_separation * spec.min_separation * (1 - 1e-12);
  for (const auto& v : verts) {
    const double x = v[0] * edge, y = v[1] * edge;
    bool ok = std::hypot(x, y) <= reach;
    for (std::size_t i = 0; ok && i < kept.size(); ++i) {
      const double ddx = kept[i][0] - x, ddy = kept[i][1] - y;
      ok = ddx * ddx + ddy * ddy >= sep2;
    }
    if (ok) kept.push_back({x, y});
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return std::hypot(a[0], a[1]) < std::hypot(b[0], b[1]);
  });
  if (spec.hole_count > 0) {
    if (kept.size() < spec.hole_count)
      throw std::invalid_argument("hole array: infeasible packing, only " + std::to_string(kept.size()) +
                                  " holes fit the aperture at this separation");
    kept.resize(spec.hole_count);
  }
  if (kept.empty()) throw std::invalid_argument("hole array: infeasible packing, no hole fits");

  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j)
      min_sep = std::min(min_sep, std::hypot(kept[i][0] - kept[j][0], kept[i][1] - kept[j][1]));

  std::vector<double> xs, ys;
  std::vector<cdouble> v(grid.size());
  const double r = spec.hole_diameter / 2.0, r2 = r * r;
  for (const auto& c : kept) {
    xs.push_back(c[0]);
    ys.push_back(c[1]);
    const long ix0 = std::max(0L, static_cast<long>(std::floor((c[0] - r - grid.origin_x()) / grid.dx())));
    const long ix1 = std::min(static_cast<long>(grid.nx()) - 1, static_cast<long>(std::ceil((c[0] + r - grid.origin_x()) / grid.dx())));
    const long iy0 = std::max(0L, static_cast<long>(std::floor((c[1] - r - grid.origin_y()) / grid.dy())));
    const long iy1 = std::min(static_cast<long>(grid.ny()) - 1, static_cast<long>(std::ceil((c[1] + r - grid.origin_y()) / grid.dy())));
    for (long iy = iy0; iy <= iy1; ++iy)
      for (long ix = ix0; ix <= ix1; ++ix) {
        const double ddx = grid.x(ix) - c[0], ddy = grid.y(iy) - c[1];
        if (ddx * ddx + ddy * ddy <= r2) v[grid.index(ix, iy)] = 1.0;
      }
  }
  return HoleArray{std::move(xs), std::move(ys), edge, min_sep, SampledField(grid, std::move(v))};
}

// ---- hot spots -------------------------------------------------------------

SampledField irradiance(const SampledField& field) {
  std::vector<cdouble> v(field.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::norm(field[i]);
  return SampledField(field.grid(), std::move(v), std::nullopt, 2.0 * field.log_scale());
}

HotspotReport find_hotspots(const SampledField& irr, double threshold, double wavelength,
                            double na) {
  if (!irr.is_2d()) throw std::invalid_argument("hotspots: irradiance must be 2D");
  if (!(threshold > 0 && threshold <= 1)) throw std::invalid_argument("hotspots: threshold must lie in (0, 1]");
  if (!(wavelength > 0) || !(na > 0)) throw std::invalid_argument("hotspots: wavelength and NA must be positive");
  const auto& g = irr.grid2d();
  const std::size_t nx = g.nx(), ny = g.ny();
  std::vector<double> I(irr.size());
  for (std::size_t i = 0; i < I.size(); ++i) {
    I[i] = irr[i].real();
    if (I[i] < 0 || !std::isfinite(I[i])) throw std::invalid_argument("hotspots: irradiance must be nonnegative");
  }
  HotspotReport rep;
  rep.wavelength = wavelength;
  rep.diffraction_limit = wavelength / (2 * na);
  const auto [mn, mx] = std::minmax_element(I.begin(), I.end());
  if (*mx == *mn) return rep;
  const double floor = threshold * *mx;
  const double scale = std::exp(irr.log_scale());

  auto at = [&](double fx, double fy) {  // bilinear, fx/fy in index units
    const auto ix = static_cast<std::size_t>(fx), iy = static_cast<std::size_t>(fy);
    const double tx = fx - ix, ty = fy - iy;
    const std::size_t jx = std::min(ix + 1, nx - 1), jy = std::min(iy + 1, ny - 1);
    return (1 - ty) * ((1 - tx) * I[iy * nx + ix] + tx * I[iy * nx + jx]) +
           ty * ((1 - tx) * I[jy * nx + ix] + tx * I[jy * nx + jx]);
  };

  for (std::size_t iy = 1; iy + 1 < ny; ++iy)
    for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
      const std::size_t i = iy * nx + ix;
      const double p = I[i];
      if (p < floor) continue;
      // Strict against earlier neighbours, non-strict against later ones, so a
      // plateau yields one maximum.
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1 && is_max; ++dx) {
          if (!dx && !dy) continue;
          const double q = I[(iy + dy) * nx + ix + dx];
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          is_max = earlier ? p > q : p >= q;
        }
      if (!is_max) continue;

      double sum_r = 0.0;
      bool clipped = false;
      for (int ray = 0; ray < 16 && !clipped; ++ray) {
        const double c = std::cos(2 * kPi * ray / 16), s = std::sin(2 * kPi * ray / 16);
        const double step = 0.05;
        double prev_r = 0.0, prev_v = p, r = step;
        for (;; r += step) {
          const double fx = ix + r * c, fy = iy + r * s;
          if (fx < 0 || fy < 0 || fx > nx - 1 || fy > ny - 1) {
            clipped = true;
            break;
          }
          const double v = at(fx, fy);
          if (v <= p / 2) {
            const double t = (prev_v - p / 2) / (prev_v - v);
            sum_r += (prev_r + t * (r - prev_r)) * std::hypot(c * g.dx(), s * g.dy());
            break;
          }
          prev_r = r;
          prev_v = v;
        }
      }
      if (clipped) continue;
      Hotspot h;
      h.x = g.x(ix);
      h.y = g.y(iy);
      h.peak = p * scale;
      h.fwhm = 2.0 * sum_r / 16.0;
      h.sub_diffraction = h.fwhm < rep.diffraction_limit;
      rep.spots.push_back(h);
    }
  std::stable_sort(rep.spots.begin(), rep.spots.end(),
                   [](const Hotspot& a, const Hotspot& b) { return a.peak > b.peak; });
  return rep;
}

}  // namespace superwave

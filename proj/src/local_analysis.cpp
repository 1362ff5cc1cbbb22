#include "superwave/local_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace superwave {

DerivativeScheme derivative_scheme_from_string(std::string_view name) {
  if (name == "spectral") return DerivativeScheme::spectral;
  if (name == "central4") return DerivativeScheme::central4;
  throw std::invalid_argument("unknown derivative scheme '" + std::string(name) + "'");
}

std::string_view to_string(DerivativeScheme scheme) {
  return scheme == DerivativeScheme::spectral ? "spectral" : "central4";
}

std::size_t LocalMap::valid_count() const noexcept {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

namespace {

struct Gradient {
  std::vector<cdouble> dx, dy;  // dy empty in 1D
  std::vector<std::uint8_t> valid;
};

std::vector<cdouble> central4(std::span<const cdouble> f, std::size_t nx, std::size_t ny,
                              bool along_x, double h) {
  std::vector<cdouble> d(f.size());
  const std::size_t n = along_x ? nx : ny;
  const std::size_t stride = along_x ? 1 : nx;
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t pos = along_x ? ix : iy;
      if (pos < 2 || pos + 2 >= n) continue;
      const std::size_t i = iy * nx + ix;
      d[i] = (f[i - 2 * stride] - 8.0 * f[i - stride] + 8.0 * f[i + stride] - f[i + 2 * stride]) /
             (12.0 * h);
    }
  return d;
}

Gradient gradient(const SampledField& field, const LocalOptions& opt) {
  if (!(opt.mask_threshold >= 0.0 && opt.mask_threshold < 1.0))
    throw std::invalid_argument("local analysis: mask threshold must lie in [0, 1)");
  const auto f = field.values();
  const std::size_t nx = field.nx(), ny = field.ny();
  const bool two = field.is_2d();
  Gradient g;
  g.valid.assign(f.size(), 1);
  if (opt.scheme == DerivativeScheme::spectral) {
    g.dx = spectral_derivative(field, Axis::x);
    if (two) g.dy = spectral_derivative(field, Axis::y);
    const double ref = field.max_abs();
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!(std::abs(f[i]) > opt.mask_threshold * ref)) g.valid[i] = 0;
    return g;
  }
  if (nx < 5 || (two && ny < 5))
    throw std::invalid_argument("local analysis: central4 needs at least 5 samples per axis");
  g.dx = central4(f, nx, ny, true, field.dx());
  if (two) g.dy = central4(f, nx, ny, false, field.grid2d().dy());
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t i = iy * nx + ix;
      const bool edge = ix < 2 || ix + 2 >= nx || (two && (iy < 2 || iy + 2 >= ny));
      if (edge) {
        g.valid[i] = 0;
        continue;
      }
      double ref = 0.0;
      for (int s = -2; s <= 2; ++s) {
        ref = std::max(ref, std::abs(f[i + s]));
        if (two) ref = std::max(ref, std::abs(f[i + s * static_cast<long>(nx)]));
      }
      if (!(std::abs(f[i]) > opt.mask_threshold * ref)) g.valid[i] = 0;
    }
  return g;
}

double resolve_reference(const SampledField& field, const LocalOptions& opt,
                         std::vector<std::string>& warnings) {
  if (opt.reference_bandlimit) {
    if (!(*opt.reference_bandlimit > 0.0))
      throw std::invalid_argument("local analysis: reference band limit must be positive");
    return *opt.reference_bandlimit;
  }
  if (field.band()) return field.band()->k_max();
  if (field.max_abs() == 0.0) return 0.0;
  warnings.push_back("no band descriptor; gamma uses the measured band limit at floor 1e-9");
  return measured_bandlimit(field, 1e-9);
}

LocalMap build_map(const SampledField& field, const Gradient& g, double reference,
                   double kappa_factor, bool keep_phase) {
  const auto f = field.values();
  const std::size_t n = f.size();
  const bool two = field.is_2d();
  LocalMap m;
  m.grid = field.grid();
  m.valid = g.valid;
  m.reference_bandlimit = reference;
  m.k_local.assign(n, 0.0);
  m.kappa_local.assign(n, 0.0);
  m.gamma.assign(n, 0.0);
  m.k_x.assign(n, 0.0);
  m.kappa_x.assign(n, 0.0);
  if (two) {
    m.k_y.assign(n, 0.0);
    m.kappa_y.assign(n, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.valid[i]) continue;
    const cdouble qx = g.dx[i] / f[i];
    m.k_x[i] = keep_phase ? qx.imag() : 0.0;
    m.kappa_x[i] = kappa_factor * qx.real();
    if (two) {
      const cdouble qy = g.dy[i] / f[i];
      m.k_y[i] = keep_phase ? qy.imag() : 0.0;
      m.kappa_y[i] = kappa_factor * qy.real();
      m.k_local[i] = std::hypot(m.k_x[i], m.k_y[i]);
      m.kappa_local[i] = std::hypot(m.kappa_x[i], m.kappa_y[i]);
    } else {
      m.k_local[i] = m.k_x[i];
      m.kappa_local[i] = m.kappa_x[i];
    }
    if (!std::isfinite(m.k_local[i]) || !std::isfinite(m.kappa_local[i])) {
      m.valid[i] = 0;
      m.k_local[i] = m.kappa_local[i] = 0.0;
      continue;
    }
    if (reference > 0.0) m.gamma[i] = std::abs(m.kappa_local[i]) / reference;
  }
  if (m.valid_count() == 0) m.warnings.push_back("no valid samples: field is zero or below the mask");
  return m;
}

}  // namespace

LocalMap local_analysis(const SampledField& field, const LocalOptions& options) {
  std::vector<std::string> warnings;
  const double reference = resolve_reference(field, options, warnings);
  auto map = build_map(field, gradient(field, options), reference, 1.0, true);
  map.warnings.insert(map.warnings.begin(), warnings.begin(), warnings.end());
  return map;
}

LocalMap supergrowth_strength(const SampledField& field, double irradiance_bandlimit,
                              FieldKind kind, const LocalOptions& options) {
  if (!(irradiance_bandlimit > 0.0) || !std::isfinite(irradiance_bandlimit))
    throw std::invalid_argument("supergrowth_strength: irradiance band limit must be positive");
  const double reference = irradiance_bandlimit / 2.0;
  if (kind == FieldKind::amplitude)
    return build_map(field, gradient(field, options), reference, 1.0, true);

  double peak = 0.0;
  for (auto v : field.values()) peak = std::max(peak, std::abs(v));
  std::vector<cdouble> rho(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const cdouble v = field[i];
    if (v.real() < 0.0 || std::abs(v.imag()) > 1e-12 * peak)
      throw std::invalid_argument("supergrowth_strength: irradiance sample " + std::to_string(i) +
                                  " is negative or complex");
    rho[i] = v.real();
  }
  // Differentiate I itself; ln I = 2 ln ρ, so the amplitude growth rate is half.
  const SampledField irradiance = field.with_values(std::move(rho));
  LocalOptions opt = options;
  opt.mask_threshold = options.mask_threshold * options.mask_threshold;
  return build_map(irradiance, gradient(irradiance, opt), reference, 0.5, false);
}

SuperRegionReport super_regions(const LocalMap& map, double bandlimit) {
  if (!(bandlimit > 0.0)) throw std::invalid_argument("super_regions: band limit must be positive");
  const std::size_t n = map.size();
  SuperRegionReport rep;
  rep.reference_bandlimit = bandlimit;
  rep.valid_samples = map.valid_count();
  if (rep.valid_samples == 0) throw std::invalid_argument("super_regions: map has no valid samples");
  const double limit = bandlimit * (1.0 + kSuperSlack);
  std::vector<std::uint8_t> so(n, 0), sg(n, 0);
  std::size_t n_so = 0, n_sg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!map.valid[i]) continue;
    if (std::abs(map.k_local[i]) > limit) so[i] = 1, ++n_so;
    if (std::abs(map.kappa_local[i]) > limit) sg[i] = 1, ++n_sg;
  }
  rep.superoscillating_fraction = static_cast<double>(n_so) / static_cast<double>(rep.valid_samples);
  rep.supergrowing_fraction = static_cast<double>(n_sg) / static_cast<double>(rep.valid_samples);

  auto components = [&](std::vector<std::uint8_t> flag) {
    std::vector<Region> out;
    if (const auto* g1 = std::get_if<Grid1D>(&map.grid)) {
      for (std::size_t i = 0; i < n;) {
        if (!flag[i]) {
          ++i;
          continue;
        }
        Region r;
        r.x_min = g1->coord(i);
        while (i < n && flag[i]) ++r.samples, ++i;
        r.x_max = g1->coord(i - 1);
        out.push_back(r);
      }
      return out;
    }
    const auto& g2 = std::get<Grid2D>(map.grid);
    const std::size_t nx = g2.nx(), ny = g2.ny();
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
      if (!flag[s]) continue;
      Region r;
      r.x_min = r.y_min = std::numeric_limits<double>::infinity();
      r.x_max = r.y_max = -std::numeric_limits<double>::infinity();
      flag[s] = 0;
      queue.push_back(s);
      while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        const std::size_t ix = i % nx, iy = i / nx;
        ++r.samples;
        r.x_min = std::min(r.x_min, g2.x(ix));
        r.x_max = std::max(r.x_max, g2.x(ix));
        r.y_min = std::min(r.y_min, g2.y(iy));
        r.y_max = std::max(r.y_max, g2.y(iy));
        auto visit = [&](std::size_t j) {
          if (flag[j]) flag[j] = 0, queue.push_back(j);
        };
        if (ix > 0) visit(i - 1);
        if (ix + 1 < nx) visit(i + 1);
        if (iy > 0) visit(i - nx);
        if (iy + 1 < ny) visit(i + nx);
      }
      out.push_back(r);
    }
    return out;
  };
  rep.superoscillating = components(std::move(so));
  rep.supergrowing = components(std::move(sg));
  return rep;
}

std::vector<double> zero_crossings(const Grid1D& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    throw std::invalid_argument("zero_crossings: sample count does not match the grid");
  std::vector<double> z;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) {
      if (i == 0 || values[i - 1] != 0.0) z.push_back(grid.coord(i));
      continue;
    }
    if (i + 1 < values.size() && values[i + 1] != 0.0 && (values[i] < 0) != (values[i + 1] < 0)) {
      const double t = values[i] / (values[i] - values[i + 1]);
      z.push_back(grid.coord(i) + t * grid.spacing());
    }
  }
  return z;
}

double zero_spacing_frequency(const Grid1D& grid, std::span<const double> values, double a,
                              double b) {
  const auto z = zero_crossings(grid, values);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < z.size(); ++i)
    if (z[i - 1] >= a && z[i] <= b) gap = std::min(gap, z[i] - z[i - 1]);
  return std::isfinite(gap) ? std::numbers::pi / gap : 0.0;
}

}  // namespace superwave

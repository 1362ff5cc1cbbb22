#include "superwave/holography.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "superwave/error.hpp"
#include "superwave/propagate.hpp"
#include "superwave/special.hpp"

namespace superwave {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

void check_pitch(const Grid2D& grid, double pitch) {
  if (!(pitch > 0.0) || !std::isfinite(pitch))
    throw std::invalid_argument("hologram: pitch must be positive");
  if (grid.dx() > pitch / 4 * (1 + 1e-12))
    throw std::invalid_argument("hologram: pixel pitch " + std::to_string(grid.dx()) +
                                " exceeds pitch/4 = " + std::to_string(pitch / 4));
}
}  // namespace

GratingKind grating_kind_from_string(std::string_view name) {
  if (name == "binary") return GratingKind::binary;
  if (name == "sinusoidal") return GratingKind::sinusoidal;
  if (name == "blazed") return GratingKind::blazed;
  throw std::invalid_argument("unknown grating kind '" + std::string(name) + "'");
}

std::string_view to_string(GratingKind kind) {
  switch (kind) {
    case GratingKind::binary: return "binary";
    case GratingKind::sinusoidal: return "sinusoidal";
    default: return "blazed";
  }
}

HologramPlan encode_hologram(const Grid2D& grid, std::span<const double> A,
                             std::span<const double> chi, double pitch, GratingKind kind) {
  if (A.size() != grid.size() || chi.size() != grid.size())
    throw std::invalid_argument("encode_hologram: amplitude/phase size does not match grid");
  if (!(pitch > 0.0) || !std::isfinite(pitch))
    throw std::invalid_argument("encode_hologram: pitch must be positive");
  HologramPlan plan{grid, std::vector<double>(A.size()), std::vector<double>(A.size()), pitch, kind, 1.0};
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!(A[i] >= 0.0 && A[i] <= 1.0))
      throw std::invalid_argument("encode_hologram: amplitude " + std::to_string(A[i]) +
                                  " at pixel " + std::to_string(i) + " outside [0, 1]");
    if (!std::isfinite(chi[i])) throw std::invalid_argument("encode_hologram: non-finite phase");
    plan.M[i] = 1.0 + inverse_sinc(A[i]) / kPi;
    plan.Phi[i] = chi[i] - kPi * plan.M[i];
  }
  return plan;
}

HologramPlan encode_hologram(const SampledField& target, double pitch, GratingKind kind) {
  if (!target.is_2d()) throw std::invalid_argument("encode_hologram: target must be 2D");
  const double scale = target.max_abs();
  if (!(scale > 0.0)) throw std::invalid_argument("encode_hologram: target is identically zero");
  std::vector<double> A(target.size()), chi(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    A[i] = std::min(1.0, std::abs(target[i]) / scale);
    chi[i] = std::arg(target[i]);
  }
  auto plan = encode_hologram(target.grid2d(), A, chi, pitch, kind);
  plan.amplitude_scale = scale * std::exp(target.log_scale());
  return plan;
}

SampledField first_order_field(const HologramPlan& plan) {
  if (plan.kind != GratingKind::blazed)
    throw std::invalid_argument("first_order_field: closed form exists only for blazed gratings, got " +
                                std::string(to_string(plan.kind)));
  std::vector<cdouble> v(plan.M.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = -sinc(kPi * plan.M[i] - kPi) * std::polar(1.0, plan.Phi[i] + kPi * plan.M[i]);
  return SampledField(plan.grid, std::move(v));
}

std::vector<double> render_grating(const HologramPlan& plan) { return render_grating(plan, plan.grid); }

std::vector<double> render_grating(const HologramPlan& plan, const Grid2D& grid) {
  check_pitch(grid, plan.pitch);
  const auto& pg = plan.grid;
  auto nearest = [](double t, std::size_t n) {
    const double r = std::floor(t + 0.5);
    return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n - 1)));
  };
  std::vector<double> out(grid.size());
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const std::size_t py = nearest((grid.y(iy) - pg.origin_y()) / pg.dy(), pg.ny());
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const std::size_t i = pg.index(nearest((grid.x(ix) - pg.origin_x()) / pg.dx(), pg.nx()), py);
      const double theta = plan.Phi[i] + kTwoPi * grid.x(ix) / plan.pitch;
      const double M = plan.M[i];
      double& o = out[grid.index(ix, iy)];
      switch (plan.kind) {
        case GratingKind::binary:
          // sign(0) taken as +1 so the map stays two-level
          o = M * kPi * (std::sin(theta) >= 0.0 ? 2.0 : 0.0);
          break;
        case GratingKind::sinusoidal:
          o = M * kPi * (1.0 + std::sin(theta)) / 2;
          break;
        case GratingKind::blazed: {
          double w = std::fmod(theta, kTwoPi);
          if (w < 0) w += kTwoPi;
          if (w >= kTwoPi) w = 0.0;
          o = M * w;
          break;
        }
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> quantize_8bit(std::span<const double> phase) {
  std::vector<std::uint8_t> out(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) {
    if (!(phase[i] >= 0.0 && phase[i] <= kTwoPi * (1 + 1e-12)))
      throw std::invalid_argument("quantize_8bit: phase outside [0, 2π]");
    out[i] = static_cast<std::uint8_t>(std::min(255.0, std::round(phase[i] * 255.0 / kTwoPi)));
  }
  return out;
}

std::vector<double> dequantize_8bit(std::span<const std::uint8_t> levels) {
  std::vector<double> out(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) out[i] = levels[i] * kTwoPi / 255.0;
  return out;
}

void write_pgm(const std::filesystem::path& path, std::size_t nx, std::size_t ny,
               std::span<const std::uint8_t> levels) {
  if (levels.size() != nx * ny) throw std::invalid_argument("write_pgm: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << nx << ' ' << ny << "\n255\n";
  out.write(reinterpret_cast<const char*>(levels.data()), static_cast<std::streamsize>(levels.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

double max_pitch_for(const SampledField& target, double floor) {
  const double kx = measured_bandlimit_axes(target, floor)[0];
  return kx > 0.0 ? kPi / kx : std::numeric_limits<double>::infinity();
}

SampledField simulate_first_order(std::span<const double> phase_map, const Grid2D& grid,
                                  double pitch, const SampledField* illumination) {
  if (phase_map.size() != grid.size())
    throw std::invalid_argument("simulate_first_order: phase map size does not match grid");
  check_pitch(grid, pitch);
  std::vector<cdouble> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::polar(1.0, phase_map[i]);
  if (illumination) {
    if (!illumination->is_2d() || !(illumination->grid2d() == grid))
      throw std::invalid_argument("simulate_first_order: illumination grid differs from the map");
    const double bound = max_pitch_for(*illumination);
    if (pitch >= bound)
      throw std::invalid_argument("simulate_first_order: orders overlap; illumination band needs pitch < " +
                                  std::to_string(bound));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] *= illumination->values()[i];
  }

  const auto far = far_field(SampledField(grid, std::move(t)));
  const double kc = kTwoPi / pitch, half = kPi / pitch;
  std::vector<cdouble> win(far.values().begin(), far.values().end());
  for (std::size_t iy = 0; iy < far.ny(); ++iy)
    for (std::size_t ix = 0; ix < far.nx(); ++ix) {
      const double d = far.kx(ix) - kc;
      if (!(d >= -half && d < half)) win[iy * far.nx() + ix] = 0.0;
    }
  const auto near = inverse_transform(Spectrum(far.source_grid(), std::move(win), far.log_scale()));
  std::vector<cdouble> out(near.values().begin(), near.values().end());
  for (std::size_t iy = 0; iy < grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < grid.nx(); ++ix)
      out[grid.index(ix, iy)] *= std::polar(1.0, -kc * grid.x(ix));
  return SampledField(grid, std::move(out));
}

SampledField simulate_first_order(const HologramPlan& plan, const SimulationOptions& options) {
  const int s = options.oversample;
  if (s < 1 || s % 2 == 0) throw std::invalid_argument("simulate_first_order: oversample must be odd and >= 1");
  // The encoded target A e^{iχ}, rebuilt from (M, Φ) whatever the grating kind.
  std::vector<cdouble> target(plan.M.size());
  for (std::size_t i = 0; i < target.size(); ++i)
    target[i] = sinc(kPi * plan.M[i] - kPi) * std::polar(1.0, plan.Phi[i] + kPi * plan.M[i]);
  const double bound = max_pitch_for(SampledField(plan.grid, std::move(target)), options.band_floor);
  if (plan.pitch >= bound)
    throw std::invalid_argument("simulate_first_order: orders overlap; target band needs pitch < " +
                                std::to_string(bound) + ", got " + std::to_string(plan.pitch));

  const auto& pg = plan.grid;
  const double fdx = pg.dx() / s;
  const Grid2D fine(pg.nx() * s, pg.ny(), fdx, pg.dy(), pg.origin_x() - (s - 1) / 2 * fdx, pg.origin_y());
  auto map = render_grating(plan, fine);
  if (options.quantize) map = dequantize_8bit(quantize_8bit(map));
  const auto f = simulate_first_order(map, fine, plan.pitch);
  if (s == 1) return f;
  // Re-centered, the first order occupies |k_x| ≤ π/Λx, well inside the pixel band.
  std::vector<cdouble> out(pg.size());
  for (std::size_t iy = 0; iy < pg.ny(); ++iy)
    for (std::size_t ix = 0; ix < pg.nx(); ++ix)
      out[pg.index(ix, iy)] = f[fine.index(ix * s + (s - 1) / 2, iy)];
  return SampledField(pg, std::move(out));
}

SampledField laguerre_gauss(const Grid2D& grid, int p, int m, double waist) {
  if (p < 0) throw std::invalid_argument("laguerre_gauss: p must be >= 0");
  if (!(waist > 0.0)) throw std::invalid_argument("laguerre_gauss: waist must be positive");
  const unsigned am = static_cast<unsigned>(std::abs(m));
  std::vector<cdouble> v(grid.size());
  for (std::size_t iy = 0; iy < grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double x = grid.x(ix), y = grid.y(iy);
      const double r2 = (x * x + y * y) / (waist * waist);
      const double radial = std::pow(std::sqrt(2 * r2), am) *
                            std::assoc_laguerre(static_cast<unsigned>(p), am, 2 * r2) * std::exp(-r2);
      v[grid.index(ix, iy)] = radial * std::polar(1.0, m * std::atan2(y, x));
    }
  return SampledField(grid, std::move(v));
}

}  // namespace superwave

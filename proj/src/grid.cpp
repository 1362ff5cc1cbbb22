#include "superwave/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace superwave {

Grid1D::Grid1D(std::size_t n_samples, double spacing, double origin)
    : n_(n_samples), spacing_(spacing), origin_(origin) {
  if (n_ < 2) throw std::invalid_argument("Grid1D: n_samples must be at least 2");
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
    throw std::invalid_argument("Grid1D: spacing must be positive and finite");
  if (!std::isfinite(origin_)) throw std::invalid_argument("Grid1D: origin must be finite");
}

Grid1D Grid1D::centered(std::size_t n_samples, double length) {
  const double dx = length / static_cast<double>(n_samples);
  return Grid1D(n_samples, dx, -static_cast<double>(n_samples / 2) * dx);
}

Grid2D::Grid2D(std::size_t nx, std::size_t ny, double dx, double dy, double origin_x,
               double origin_y)
    : nx_(nx), ny_(ny), dx_(dx), dy_(dy), origin_x_(origin_x), origin_y_(origin_y) {
  if (nx_ < 2 || ny_ < 2) throw std::invalid_argument("Grid2D: nx and ny must be at least 2");
  if (!(dx_ > 0.0) || !(dy_ > 0.0) || !std::isfinite(dx_) || !std::isfinite(dy_))
    throw std::invalid_argument("Grid2D: dx and dy must be positive and finite");
  if (!std::isfinite(origin_x_) || !std::isfinite(origin_y_))
    throw std::invalid_argument("Grid2D: origin must be finite");
}

Grid2D Grid2D::centered(std::size_t nx, std::size_t ny, double dx, double dy) {
  return Grid2D(nx, ny, dx, dy, -static_cast<double>(nx / 2) * dx,
                -static_cast<double>(ny / 2) * dy);
}

}  // namespace superwave

#pragma once

#include <cstddef>

namespace superwave {

/// Uniform 1D sample positions origin + i*spacing, i in [0, n).
class Grid1D {
 public:
  Grid1D(std::size_t n_samples, double spacing, double origin = 0.0);

  /// n samples covering [-length/2, length/2) with x=0 on sample n/2.
  static Grid1D centered(std::size_t n_samples, double length);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  double origin() const noexcept { return origin_; }
  double length() const noexcept { return static_cast<double>(n_) * spacing_; }
  double coord(std::size_t i) const noexcept { return origin_ + static_cast<double>(i) * spacing_; }

  bool operator==(const Grid1D&) const = default;

 private:
  std::size_t n_;
  double spacing_;
  double origin_;
};

/// Uniform 2D grid; samples are stored row-major with x fastest: index = iy*nx + ix.
class Grid2D {
 public:
  Grid2D(std::size_t nx, std::size_t ny, double dx, double dy, double origin_x = 0.0,
         double origin_y = 0.0);

  static Grid2D centered(std::size_t nx, std::size_t ny, double dx, double dy);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return nx_ * ny_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  double origin_x() const noexcept { return origin_x_; }
  double origin_y() const noexcept { return origin_y_; }
  double x(std::size_t ix) const noexcept { return origin_x_ + static_cast<double>(ix) * dx_; }
  double y(std::size_t iy) const noexcept { return origin_y_ + static_cast<double>(iy) * dy_; }
  std::size_t index(std::size_t ix, std::size_t iy) const noexcept { return iy * nx_ + ix; }

  bool operator==(const Grid2D&) const = default;

 private:
  std::size_t nx_, ny_;
  double dx_, dy_;
  double origin_x_, origin_y_;
};

}  // namespace superwave

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace superwave::detail {

enum class FftDirection { forward, backward };

/// Unnormalized in-place DFT; forward uses e^{-i...}. 2D when ny > 1 (row-major, x fastest).
void fft_inplace(std::vector<std::complex<double>>& data, std::size_t nx, std::size_t ny,
                 FftDirection direction);

}  // namespace superwave::detail

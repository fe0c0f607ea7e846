#pragma once

#include <cmath>
#include <vector>

#include "stairbot/perception.hpp"

namespace stairbot::kernels::detail {

// Central-difference gradients of one row; zero on the outermost pixels.
inline void gradient_row(const perception::Frame& f, int y, double* gx, double* gy) {
  const int w = f.width();
  const int h = f.height();
  for (int x = 0; x < w; ++x) {
    if (x == 0 || y == 0 || x == w - 1 || y == h - 1) {
      gx[x] = gy[x] = 0.0;
      continue;
    }
    gx[x] = 0.5 * (static_cast<double>(f.at(x + 1, y)) - f.at(x - 1, y));
    gy[x] = 0.5 * (static_cast<double>(f.at(x, y + 1)) - f.at(x, y - 1));
  }
}

// Smaller eigenvalue of the structure tensor summed over the 3x3 block
// centred on (x, y).
inline double min_eigen_at(const std::vector<double>& gx, const std::vector<double>& gy,
                           int w, int x, int y) {
  double a = 0, b = 0, c = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const std::size_t row = static_cast<std::size_t>(y + dy) * w;
    for (int dx = -1; dx <= 1; ++dx) {
      const double ix = gx[row + x + dx];
      const double iy = gy[row + x + dx];
      a += ix * ix;
      b += ix * iy;
      c += iy * iy;
    }
  }
  const double half_diff = 0.5 * (a - c);
  const double e = 0.5 * (a + c) - std::sqrt(half_diff * half_diff + b * b);
  return e > 0 ? e : 0.0;
}

}  // namespace stairbot::kernels::detail

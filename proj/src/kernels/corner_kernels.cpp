#include "corner_common.hpp"
#include "stairbot/kernels.hpp"

namespace stairbot::kernels {

namespace serial {

std::vector<double> corner_scores(const perception::Frame& f) {
  const int w = f.width();
  const int h = f.height();
  const auto n = static_cast<std::size_t>(w) * h;
  std::vector<double> gx(n), gy(n), score(n, 0.0);
  for (int y = 0; y < h; ++y) {
    detail::gradient_row(f, y, &gx[static_cast<std::size_t>(y) * w],
                         &gy[static_cast<std::size_t>(y) * w]);
  }
  for (int y = 2; y < h - 2; ++y) {
    for (int x = 2; x < w - 2; ++x) {
      score[static_cast<std::size_t>(y) * w + x] = detail::min_eigen_at(gx, gy, w, x, y);
    }
  }
  return score;
}

}  // namespace serial

namespace omp {

std::vector<double> corner_scores(const perception::Frame& f) {
  const int w = f.width();
  const int h = f.height();
  const auto n = static_cast<std::size_t>(w) * h;
  std::vector<double> gx(n), gy(n), score(n, 0.0);
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      detail::gradient_row(f, y, &gx[static_cast<std::size_t>(y) * w],
                           &gy[static_cast<std::size_t>(y) * w]);
    }
#pragma omp for schedule(static)
    for (int y = 2; y < h - 2; ++y) {
      for (int x = 2; x < w - 2; ++x) {
        score[static_cast<std::size_t>(y) * w + x] = detail::min_eigen_at(gx, gy, w, x, y);
      }
    }
  }
  return score;
}

}  // namespace omp

}  // namespace stairbot::kernels

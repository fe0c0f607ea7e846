#include <algorithm>
#include <cmath>
#include <limits>

#include "stairbot/kernels.hpp"
#include "stairbot/perception.hpp"

namespace stairbot::perception {

std::vector<Corner> detect_corners(const Frame& f, std::size_t max_count,
                                   const CornerConfig& cfg) {
  const int w = f.width();
  const int h = f.height();
  const std::vector<double> score = kernels::omp::corner_scores(f);
  const double best = *std::max_element(score.begin(), score.end());
  // Intensities are O(1..255); anything this small is a flat patch.
  if (!(best > 1e-9)) return {};
  const double floor_score = std::max(cfg.quality * best, 1e-9);

  struct Candidate {
    int x, y;
    double s;
  };
  std::vector<Candidate> cand;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const double s = score[static_cast<std::size_t>(y) * w + x];
      if (s < floor_score) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx || dy) && score[static_cast<std::size_t>(y + dy) * w + x + dx] > s) {
            peak = false;
            break;
          }
        }
      }
      if (peak) cand.push_back({x, y, s});
    }
  }
  // Raster order already breaks ties; stable_sort keeps it.
  std::stable_sort(cand.begin(), cand.end(),
                   [](const Candidate& a, const Candidate& b) { return a.s > b.s; });

  std::vector<Corner> out;
  const double min_d2 = cfg.min_distance * cfg.min_distance;
  for (const auto& c : cand) {
    if (out.size() >= max_count) break;
    const bool crowded = std::any_of(out.begin(), out.end(), [&](const Corner& k) {
      const double dx = k.point.x - c.x;
      const double dy = k.point.y - c.y;
      return dx * dx + dy * dy < min_d2;
    });
    if (!crowded) out.push_back({{static_cast<double>(c.x), static_cast<double>(c.y)}, c.s});
  }
  return out;
}

Point2 select_corner(const std::vector<Corner>& corners, Point2 touch) {
  if (corners.empty()) throw NoCornersError("select_corner: no corners detected");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const double dx = corners[i].point.x - touch.x;
    const double dy = corners[i].point.y - touch.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2 || (d2 == best_d2 && corners[i].score > corners[best].score)) {
      best = i;
      best_d2 = d2;
    }
  }
  return corners[best].point;
}

double pixel_to_bearing(double px, int width, double hfov) {
  if (width < 2) throw PreconditionError("pixel_to_bearing: width must be >= 2");
  if (px < 0 || px > width - 1) throw PreconditionError("pixel_to_bearing: pixel outside image");
  const double half = (width - 1) / 2.0;
  return (px - half) / half * (hfov / 2.0);
}

}  // namespace stairbot::perception

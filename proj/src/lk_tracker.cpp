#include <algorithm>
#include <cmath>
#include <vector>

#include "stairbot/perception.hpp"

namespace stairbot::perception {

namespace {

Frame downsample(const Frame& f) {
  static constexpr double kTap[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  const int w = (f.width() + 1) / 2;
  const int h = (f.height() + 1) / 2;
  Frame out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -2; j <= 2; ++j) {
        for (int i = -2; i <= 2; ++i) {
          acc += kTap[i + 2] * kTap[j + 2] * f.clamped(2 * x + i, 2 * y + j);
        }
      }
      out.at(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

std::vector<Frame> build_pyramid(const Frame& f, const LkConfig& cfg) {
  std::vector<Frame> pyr{f};
  while (static_cast<int>(pyr.size()) < cfg.levels) {
    const Frame& top = pyr.back();
    if (std::min((top.width() + 1) / 2, (top.height() + 1) / 2) < cfg.window) break;
    pyr.push_back(downsample(top));
  }
  return pyr;
}

// Displacement of p from pyramid a to pyramid b (level-0 pixels).
bool pyramid_flow(const std::vector<Frame>& a, const std::vector<Frame>& b, Point2 p,
                  const LkConfig& cfg, Point2& out) {
  const int half = cfg.window / 2;
  const auto levels = static_cast<int>(std::min(a.size(), b.size()));
  const double npix = static_cast<double>(cfg.window) * cfg.window;
  std::vector<double> tmpl, gx, gy;
  tmpl.reserve(static_cast<std::size_t>(npix));
  gx.reserve(static_cast<std::size_t>(npix));
  gy.reserve(static_cast<std::size_t>(npix));

  double gux = 0.0, guy = 0.0;  // guess carried down the pyramid
  for (int level = levels - 1; level >= 0; --level) {
    const Frame& fa = a[static_cast<std::size_t>(level)];
    const Frame& fb = b[static_cast<std::size_t>(level)];
    const double scale = std::ldexp(1.0, -level);
    const double px = p.x * scale;
    const double py = p.y * scale;

    tmpl.clear();
    gx.clear();
    gy.clear();
    double g11 = 0, g12 = 0, g22 = 0;
    for (int j = -half; j <= half; ++j) {
      for (int i = -half; i <= half; ++i) {
        const double x = px + i;
        const double y = py + j;
        const double ix = 0.5 * (fa.sample(x + 1, y) - fa.sample(x - 1, y));
        const double iy = 0.5 * (fa.sample(x, y + 1) - fa.sample(x, y - 1));
        tmpl.push_back(fa.sample(x, y));
        gx.push_back(ix);
        gy.push_back(iy);
        g11 += ix * ix;
        g12 += ix * iy;
        g22 += iy * iy;
      }
    }
    const double half_diff = 0.5 * (g11 - g22);
    const double min_eig = 0.5 * (g11 + g22) - std::sqrt(half_diff * half_diff + g12 * g12);
    const double det = g11 * g22 - g12 * g12;
    if (min_eig / npix < cfg.min_eigen || det <= 0) return false;

    double nux = 0.0, nuy = 0.0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      double b1 = 0, b2 = 0;
      std::size_t k = 0;
      for (int j = -half; j <= half; ++j) {
        for (int i = -half; i <= half; ++i, ++k) {
          const double e = tmpl[k] - fb.sample(px + i + gux + nux, py + j + guy + nuy);
          b1 += e * gx[k];
          b2 += e * gy[k];
        }
      }
      const double ex = (g22 * b1 - g12 * b2) / det;
      const double ey = (g11 * b2 - g12 * b1) / det;
      nux += ex;
      nuy += ey;
      if (std::hypot(ex, ey) < cfg.epsilon) break;
    }
    gux += nux;
    guy += nuy;
    if (!std::isfinite(gux) || !std::isfinite(guy)) return false;
    if (level > 0) {
      gux *= 2.0;
      guy *= 2.0;
    }
  }
  out = {p.x + gux, p.y + guy};
  return true;
}

}  // namespace

bool lk_flow(const Frame& prev, const Frame& next, Point2 p, const LkConfig& cfg,
             Point2& out) {
  return pyramid_flow(build_pyramid(prev, cfg), build_pyramid(next, cfg), p, cfg, out);
}

TrackedPoint fb_track(const Frame& prev, const Frame& next, const TrackedPoint& p,
                      double fb_threshold, const LkConfig& cfg) {
  TrackedPoint lost{p.position, TrackStatus::Lost};
  if (p.status != TrackStatus::Tracking) return lost;
  const int half = cfg.window / 2;
  const Point2 q = p.position;
  if (q.x < half || q.y < half || q.x > prev.width() - 1 - half ||
      q.y > prev.height() - 1 - half) {
    return lost;
  }

  const auto pyr_prev = build_pyramid(prev, cfg);
  const auto pyr_next = build_pyramid(next, cfg);
  Point2 fwd, back;
  if (!pyramid_flow(pyr_prev, pyr_next, q, cfg, fwd)) return lost;
  if (!next.contains(fwd.x, fwd.y)) return lost;
  if (!pyramid_flow(pyr_next, pyr_prev, fwd, cfg, back)) return lost;
  if (std::hypot(back.x - q.x, back.y - q.y) > fb_threshold) return lost;
  return {fwd, TrackStatus::Tracking};
}

}  // namespace stairbot::perception

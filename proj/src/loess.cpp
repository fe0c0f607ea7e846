#include <algorithm>
#include <cmath>

#include "stairbot/signal.hpp"

namespace stairbot::signal {

void LoessConfig::validate() const {
  if (!(span > 0) || span > 1) throw PreconditionError("loess: span must be in (0, 1]");
  if (degree != 1) throw PreconditionError("loess: only degree 1 is supported");
}

std::size_t LoessConfig::window_size(std::size_t n) const {
  const auto min_points = static_cast<std::size_t>(degree + 2);
  const auto q = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n) - 1e-9));
  return std::clamp(q, min_points, std::max(n, min_points));
}

double loess_point(std::span<const Sample> series, std::size_t index, std::size_t window) {
  const std::size_t n = series.size();
  const double ti = series[index].t;

  // Start with the window ending at `index` and slide right while the next
  // sample is strictly closer than the leftmost one.
  std::size_t lo = index + 1 >= window ? index + 1 - window : 0;
  lo = std::min(lo, n - window);
  while (lo + window < n && series[lo + window].t - ti < ti - series[lo].t) ++lo;
  const std::size_t hi = lo + window;  // exclusive

  const double dmax = std::max(ti - series[lo].t, series[hi - 1].t - ti);

  double sw = 0, swt = 0, swy = 0;
  for (std::size_t j = lo; j < hi; ++j) {
    const double u = std::abs(series[j].t - ti) / dmax;
    if (u >= 1) continue;
    const double c = 1 - u * u * u;
    const double w = c * c * c;
    sw += w;
    swt += w * series[j].t;
    swy += w * series[j].value;
  }
  const double tbar = swt / sw;
  const double ybar = swy / sw;

  double var = 0, cov = 0;
  for (std::size_t j = lo; j < hi; ++j) {
    const double u = std::abs(series[j].t - ti) / dmax;
    if (u >= 1) continue;
    const double c = 1 - u * u * u;
    const double w = c * c * c;
    const double dt = series[j].t - tbar;
    var += w * dt * dt;
    cov += w * dt * (series[j].value - ybar);
  }
  // A single effective point carries no slope information; fall back to the
  // weighted mean.
  if (var <= 1e-12 * dmax * dmax * sw) return ybar;
  return ybar + cov / var * (ti - tbar);
}

namespace {

void check_series(std::span<const Sample> series, const LoessConfig& cfg) {
  cfg.validate();
  if (series.size() < static_cast<std::size_t>(cfg.degree + 2)) {
    throw TooFewPointsError("loess: need at least degree + 2 points");
  }
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (!(series[i].t > series[i - 1].t)) {
      throw PreconditionError("loess: sample times must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<Sample> loess_smooth(std::span<const Sample> series, const LoessConfig& cfg) {
  check_series(series, cfg);
  const std::size_t q = cfg.window_size(series.size());
  std::vector<Sample> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    out[i] = {series[i].t, loess_point(series, i, q)};
  }
  return out;
}

}  // namespace stairbot::signal

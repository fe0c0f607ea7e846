#include "stairbot/kernels.hpp"

namespace stairbot::kernels {

namespace {

void check_series(std::span<const signal::Sample> series, const signal::LoessConfig& cfg) {
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

namespace serial {

std::vector<signal::Sample> loess_smooth(std::span<const signal::Sample> series,
                                         const signal::LoessConfig& cfg) {
  return signal::loess_smooth(series, cfg);
}

}  // namespace serial

namespace omp {

std::vector<signal::Sample> loess_smooth(std::span<const signal::Sample> series,
                                         const signal::LoessConfig& cfg) {
  check_series(series, cfg);
  const std::size_t q = cfg.window_size(series.size());
  const auto n = static_cast<long>(series.size());
  std::vector<signal::Sample> out(series.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = {series[idx].t, signal::loess_point(series, idx, q)};
  }
  return out;
}

}  // namespace omp

}  // namespace stairbot::kernels

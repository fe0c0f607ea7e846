#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "stairbot/common.hpp"

namespace stairbot::perception {

// --- sonar -----------------------------------------------------------------

struct SonarTriple {
  double left = 4.0;
  double front = 4.0;
  double right = 4.0;
  double max_range = 4.0;
  double threshold = 0.5;

  void validate() const;
};

/// Sensor bits used to name the overlap cells of the three sonar cones.
enum SensorBit : std::uint8_t { kLeft = 1, kFront = 2, kRight = 4 };

/// Occupancy of the 7 cells formed by the three cones: 3 singletons, 3 pairs
/// and the triple, each named by its sensor mask (1..7). A cell is occupied
/// iff every sensor covering it reports an obstacle inside the threshold.
class RegionOccupancy {
 public:
  RegionOccupancy() = default;
  explicit RegionOccupancy(std::uint8_t blocked_sensors) : blocked_(blocked_sensors & 7u) {}

  std::uint8_t blocked_sensors() const { return blocked_; }
  bool occupied(std::uint8_t cell_mask) const {
    return cell_mask != 0 && (blocked_ & cell_mask) == cell_mask;
  }
  int occupied_count() const;
  bool all_occupied() const { return blocked_ == 7u; }
  bool none_occupied() const { return blocked_ == 0u; }
  /// Occupied cells as masks in ascending order.
  std::vector<std::uint8_t> occupied_cells() const;
  static std::string cell_name(std::uint8_t cell_mask);

  bool operator==(const RegionOccupancy&) const = default;

 private:
  std::uint8_t blocked_ = 0;
};

RegionOccupancy region_map(const SonarTriple& s);

// --- frames ----------------------------------------------------------------

/// Grayscale image with float intensities (0..255 for 8-bit sources).
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, float fill = 0.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  double timestamp() const { return timestamp_; }
  void set_timestamp(double t) { timestamp_ = t; }

  float& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  float at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  /// Border-clamped pixel access.
  float clamped(int x, int y) const;
  /// Bilinear interpolation with border clamping.
  double sample(double x, double y) const;

  const std::vector<float>& pixels() const { return pixels_; }
  bool contains(double x, double y) const {
    return x >= 0 && y >= 0 && x <= width_ - 1 && y <= height_ - 1;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  double timestamp_ = 0.0;
  std::vector<float> pixels_;
};

/// Binary 8-bit PGM (P5). Intensities are rounded and clamped on write.
void write_pgm(std::ostream& os, const Frame& f);
Frame read_pgm(std::istream& is);
void write_pgm_file(const std::string& path, const Frame& f);
Frame read_pgm_file(const std::string& path);

/// Band-limited random texture: a sum of low-frequency plane waves, so a
/// translated rendering is exact at sub-pixel shifts.
class SmoothTexture {
 public:
  explicit SmoothTexture(std::uint64_t seed, int waves = 24, double min_period = 8.0,
                         double max_period = 32.0);
  double value(double x, double y) const;
  /// Renders the texture shifted by (dx, dy): out(x, y) = value(x - dx, y - dy).
  Frame render(int width, int height, double dx = 0.0, double dy = 0.0) const;

 private:
  struct Wave {
    double kx, ky, phase, amplitude;
  };
  std::vector<Wave> waves_;
};

/// Filled axis-aligned square of `size` pixels with its top-left pixel at (x0, y0).
Frame render_square(int width, int height, int x0, int y0, int size, float fg = 255.0f,
                    float bg = 0.0f);

// --- corners ---------------------------------------------------------------

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Corner {
  Point2 point;
  double score;
};

struct CornerConfig {
  double quality = 0.01;      // relative to the strongest response
  double min_distance = 3.0;  // px between accepted corners
};

/// Minimum-eigenvalue corners (3x3 structure tensor), locally maximal,
/// sorted by descending score.
std::vector<Corner> detect_corners(const Frame& f, std::size_t max_count,
                                   const CornerConfig& cfg = {});

/// Corner nearest to the touch point; ties go to the higher score, then the
/// lower index. Throws NoCornersError on an empty list.
Point2 select_corner(const std::vector<Corner>& corners, Point2 touch);

// --- tracking --------------------------------------------------------------

enum class TrackStatus { Tracking, Lost };

struct TrackedPoint {
  Point2 position;
  TrackStatus status = TrackStatus::Tracking;
};

struct LkConfig {
  int window = 15;
  int levels = 3;
  int max_iterations = 30;
  double epsilon = 0.01;
  double min_eigen = 1e-3;  // per-pixel min eigenvalue of the gradient matrix
};

/// Pyramidal Lucas-Kanade displacement of `p` from `prev` to `next`.
/// Returns false if the gradient matrix is degenerate at any level.
bool lk_flow(const Frame& prev, const Frame& next, Point2 p, const LkConfig& cfg,
             Point2& out);

/// Forward-backward checked tracking step. Lost when either solve is
/// degenerate, the forward result leaves the frame, or the round trip misses
/// the start by more than `fb_threshold` pixels.
TrackedPoint fb_track(const Frame& prev, const Frame& next, const TrackedPoint& p,
                      double fb_threshold = 1.0, const LkConfig& cfg = {});

/// Horizontal bearing of a pixel column; positive to the right.
double pixel_to_bearing(double px, int width, double hfov);

inline constexpr double kDefaultHfov = deg_to_rad(53.5);

}  // namespace stairbot::perception

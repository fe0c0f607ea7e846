#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace stairbot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kStandardGravity = 9.81;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Base for every recoverable failure raised by the library. The kind string
// is stable and used by the CLI when mapping failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class NoRootError : public Error {
 public:
  NoRootError(const std::string& what, double lo, double hi)
      : Error("NoRoot", what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

struct SingularGammaError : Error {
  explicit SingularGammaError(const std::string& w) : Error("SingularGamma", w) {}
};
struct InvalidGeometryError : Error {
  explicit InvalidGeometryError(const std::string& w) : Error("InvalidGeometry", w) {}
};
struct TooFewPointsError : Error {
  explicit TooFewPointsError(const std::string& w) : Error("TooFewPoints", w) {}
};
struct NoCornersError : Error {
  explicit NoCornersError(const std::string& w) : Error("NoCorners", w) {}
};
struct UnclimbableError : Error {
  explicit UnclimbableError(const std::string& w) : Error("Unclimbable", w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("Config", w) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error("Precondition", w) {}
};

}  // namespace stairbot

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "stairbot/common.hpp"

namespace stairbot::support {

/// Lengths and angles of the seat-lifting cantilever linkage.
///
/// `a` is the hinge-to-load offset along the arm, `b` the hinge-to-actuator
/// attachment, `h` the actuator base offset. `theta` is the arm angle above
/// horizontal and `gamma` the angle between actuator and arm (radians).
struct SupportGeometry {
  double a = 0.335;
  double b = 0.225;
  double h = 0.60;
  double theta = 0.0;
  double gamma = kPi / 2;

  void validate() const;
};

struct SupportLoad {
  double mass = 120.0;
  double gravity = kStandardGravity;
  double hinge_shear_limit = 1130.0;
  double safety_factor = 1.25;
  // Divisor applied to the lifting moment. 1.0 reproduces the closed-form
  // force expression verbatim (which is dimensionally a moment in N*m).
  double moment_arm = 1.0;

  void validate() const;
};

/// Signed residual of the actuator/arm angle constraint at (theta, gamma).
double angle_residual(double theta, double gamma, const SupportGeometry& geom);

/// Actuator/arm angle for a given arm angle, by bisection over (1 deg, 179 deg).
/// Throws NoRootError if the residual does not change sign over the bracket.
double solve_gamma(double theta, const SupportGeometry& geom);

/// Lifting-actuator force (a+b)*m*g*cos(theta)/sin(gamma), divided by
/// `load.moment_arm`. Throws SingularGammaError when |sin(gamma)| < 1e-12.
double actuator_force(double theta, double gamma, const SupportGeometry& geom,
                      const SupportLoad& load);

struct ForceSample {
  double theta;
  double gamma;
  double force;
};

struct ForceProfile {
  std::vector<ForceSample> samples;
  // True when forces never increase along the grid. Reported, not enforced.
  bool monotone_decreasing = true;
};

ForceProfile force_profile(const SupportGeometry& geom, const SupportLoad& load,
                           std::span<const double> theta_grid);

struct StructuralReport {
  bool pass;
  // limit / (load * safety_factor); +inf when the load is zero.
  double margin;
  bool unbounded() const { return margin == std::numeric_limits<double>::infinity(); }
};

StructuralReport check_structural(double peak_hinge_load, const SupportLoad& load);

}  // namespace stairbot::support

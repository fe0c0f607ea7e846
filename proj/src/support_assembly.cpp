#include "stairbot/support_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stairbot::support {

void SupportGeometry::validate() const {
  if (!(a > 0) || !(b > 0) || !(h > 0)) {
    throw PreconditionError("support geometry: a, b and h must be positive");
  }
  if (theta < 0 || theta > kPi / 2) {
    throw PreconditionError("support geometry: theta outside [0, 90] deg");
  }
  if (!(gamma > 0) || !(gamma < kPi)) {
    throw PreconditionError("support geometry: gamma outside (0, 180) deg");
  }
}

void SupportLoad::validate() const {
  if (!(mass > 0) || !(gravity > 0)) {
    throw PreconditionError("support load: mass and gravity must be positive");
  }
  if (!(safety_factor >= 1)) {
    throw PreconditionError("support load: safety factor must be >= 1");
  }
  if (!(moment_arm > 0)) {
    throw PreconditionError("support load: moment arm must be positive");
  }
}

double angle_residual(double theta, double gamma, const SupportGeometry& geom) {
  const double lhs = std::sin(theta + gamma - kPi / 2);
  const double rhs =
      2.0 * geom.b * std::sin(theta / 2) * std::cos(gamma + theta / 2) / geom.h;
  return lhs - rhs;
}

double solve_gamma(double theta, const SupportGeometry& geom) {
  if (theta < 0 || theta > kPi / 2 + 1e-12) {
    throw PreconditionError("solve_gamma: theta outside [0, 90] deg");
  }
  theta = std::min(theta, kPi / 2);
  double lo = deg_to_rad(1.0);
  double hi = deg_to_rad(179.0);
  double f_lo = angle_residual(theta, lo, geom);
  const double f_hi = angle_residual(theta, hi, geom);
  if (f_lo == 0) return lo;
  if (f_hi == 0) return hi;
  if ((f_lo > 0) == (f_hi > 0)) {
    std::ostringstream os;
    os << "no sign change of the angle residual for theta=" << rad_to_deg(theta)
       << " deg over gamma in [" << rad_to_deg(lo) << ", " << rad_to_deg(hi) << "] deg";
    throw NoRootError(os.str(), lo, hi);
  }

  // Bisect to machine resolution; the residual is O(1)-Lipschitz in gamma so a
  // sub-1e-13 bracket keeps |residual| far below 1e-9.
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = angle_residual(theta, mid, geom);
    if (f_mid == 0) return mid;
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double actuator_force(double theta, double gamma, const SupportGeometry& geom,
                      const SupportLoad& load) {
  const double s = std::sin(gamma);
  if (std::abs(s) < 1e-12) {
    throw SingularGammaError("actuator_force: sin(gamma) is zero");
  }
  const double c = std::cos(theta);
  // cos(pi/2) is 6e-17 in double; the vertical arm carries no lifting moment.
  const double cos_theta = std::abs(c) < 1e-15 ? 0.0 : c;
  return (geom.a + geom.b) * load.mass * load.gravity * cos_theta / s / load.moment_arm;
}

ForceProfile force_profile(const SupportGeometry& geom, const SupportLoad& load,
                           std::span<const double> theta_grid) {
  if (theta_grid.empty()) {
    throw PreconditionError("force_profile: empty grid");
  }
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (theta_grid[i] < 0 || theta_grid[i] > kPi / 2 + 1e-12) {
      throw PreconditionError("force_profile: grid values must lie in [0, 90] deg");
    }
    if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) {
      throw PreconditionError("force_profile: grid must be strictly increasing");
    }
  }

  ForceProfile out;
  out.samples.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    const double t = std::min(theta, kPi / 2);
    double gamma = 0;
    try {
      gamma = solve_gamma(t, geom);
    } catch (const NoRootError& e) {
      std::ostringstream os;
      os << "force_profile at theta=" << rad_to_deg(theta) << " deg: " << e.what();
      throw NoRootError(os.str(), e.bracket_lo(), e.bracket_hi());
    }
    const double f = actuator_force(t, gamma, geom, load);
    if (!out.samples.empty() && f > out.samples.back().force) {
      out.monotone_decreasing = false;
    }
    out.samples.push_back({theta, gamma, f});
  }
  return out;
}

StructuralReport check_structural(double peak_hinge_load, const SupportLoad& load) {
  if (peak_hinge_load < 0) {
    throw PreconditionError("check_structural: negative load");
  }
  const double demand = peak_hinge_load * load.safety_factor;
  if (demand == 0) {
    return {true, std::numeric_limits<double>::infinity()};
  }
  return {demand <= load.hinge_shear_limit, load.hinge_shear_limit / demand};
}

}  // namespace stairbot::support

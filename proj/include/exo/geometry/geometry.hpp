#pragma once

#include <span>
#include <vector>

namespace exo::geometry {

/// Analytic MTU path used as the fitting oracle. Angles are L5/S1 flexion in
/// radians; moment arms use the flexion-positive convention, so extensors
/// carry negative arms.
struct MtuGeometry {
  double rest_length = 0.0;      ///< length at 0 rad (m)
  double base_moment_arm = 0.0;  ///< moment arm at 0 rad (m)
  double arm_slope = 0.0;        ///< d(moment arm)/d(angle) (m/rad)
  double axial_dir = 0.0;        ///< projection of MTU force on the spine axis, [0, 1]

  double length(double angle) const {
    return rest_length - base_moment_arm * angle - 0.5 * arm_slope * angle * angle;
  }
  double moment_arm(double angle) const { return base_moment_arm + arm_slope * angle; }
};

struct SyntheticGeometry {
  std::vector<MtuGeometry> mtus;

  /// Throws ConfigError on a non-positive rest length, |arm| > 0.12 m or an
  /// axial coefficient outside [0, 1].
  void validate() const;
};

/// Per-MTU lengths and moment arms on a shared angle grid, indexed [mtu][node].
struct GeometrySampleGrid {
  std::vector<double> angles;
  std::vector<std::vector<double>> lengths;
  std::vector<std::vector<double>> moment_arms;
};

inline constexpr double kGridLowDeg = -30.0;
inline constexpr double kGridHighDeg = 90.0;
inline constexpr int kDefaultGridNodes = 25;

std::vector<double> uniform_grid(double lo, double hi, int nodes);

/// The L5/S1 fitting range [-30 deg, 90 deg] in radians with 25 nodes.
std::vector<double> default_angle_grid();

/// Throws ConfigError if any length is non-positive on the grid, or if an MTU
/// drops below 20% of its rest length.
GeometrySampleGrid sample_geometry(const SyntheticGeometry& model, std::span<const double> angles);

}  // namespace exo::geometry

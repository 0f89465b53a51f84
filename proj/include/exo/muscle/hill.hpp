#pragma once

#include <span>

namespace exo::muscle {

struct MtuParameters {
  double max_isometric_force = 0.0;   ///< N
  double optimal_fiber_length = 0.0;  ///< m
  double tendon_slack_length = 0.0;   ///< m
  double pennation_at_optimal = 0.0;  ///< rad, [0, 0.6]
  double damping = 0.1;               ///< normalized fiber damping

  void validate() const;
};

/// Normalized force-length, force-velocity and passive curves.
///
/// Active force-length is a Gaussian exp(-(l-1)^2 / width) with f(1) = 1.
/// Force-velocity is Hill's hyperbola on the concentric side, zero at
/// v = -1, and rises towards `eccentric_plateau` when lengthening; the
/// eccentric branch is chosen so the slope is continuous at v = 0.
/// Passive force is an exponential toe that is zero up to l = 1 and reaches
/// 1 at l = 1 + passive_strain.
struct HillCurves {
  double fl_width = 0.45;
  double hill_curvature = 0.25;
  double eccentric_plateau = 1.4;
  double passive_strain = 0.6;
  double passive_shape = 4.0;
  double max_velocity = 10.0;  ///< optimal fiber lengths per second

  double active_force_length(double norm_length) const;
  double force_velocity(double norm_velocity) const;
  double passive_force_length(double norm_length) const;
};

struct FiberKinematics {
  double norm_length = 0.0;
  double norm_velocity = 0.0;   ///< negative when shortening; -1 is maximum shortening speed
  double cos_pennation = 1.0;
};

/// Stiff-tendon fiber state with constant-thickness pennation. Throws
/// SingularConfiguration when the MTU is not longer than the tendon.
FiberKinematics fiber_kinematics(double mtu_length, double mtu_velocity, const MtuParameters& p,
                                 const HillCurves& curves = {});

struct MtuState {
  double length = 0.0;      ///< m
  double velocity = 0.0;    ///< m/s, positive when lengthening
  double activation = 0.0;  ///< [0, 1]
};

struct MtuForce {
  double active = 0.0;
  double passive = 0.0;  ///< elastic plus damping, floored at zero
  double total = 0.0;
};

MtuForce mtu_force(const MtuState& state, const MtuParameters& p, const HillCurves& curves = {});

/// Force components that do not depend on activation, so a caller can form
/// f_active = activation * active_unit for any number of activations.
struct ForceBasis {
  double active_unit = 0.0;  ///< f_max * f_l * f_v * cos(phi)
  double passive = 0.0;
};

ForceBasis force_basis(double mtu_length, double mtu_velocity, const MtuParameters& p,
                       const HillCurves& curves = {});

/// Net L5/S1 load. Moments are extension-positive.
struct JointLoad {
  double m_active = 0.0;
  double m_passive = 0.0;
  double m_total = 0.0;
  double compression = 0.0;
};

/// Project MTU forces onto the joint. `moment_arms` use the flexion-positive
/// convention of the geometry module, so the extension moment of one MTU is
/// -force * arm. Throws DataError when the spans differ in length.
JointLoad assemble_joint_load(std::span<const MtuForce> forces, std::span<const double> moment_arms,
                              std::span<const double> axial_dir, double external_axial);

}  // namespace exo::muscle

#include "exo/muscle/hill.hpp"

#include <algorithm>
#include <cmath>

#include "exo/error.hpp"

namespace exo::muscle {

void MtuParameters::validate() const {
  if (!(max_isometric_force > 0.0)) throw ConfigError("max isometric force must be positive");
  if (!(optimal_fiber_length > 0.0)) throw ConfigError("optimal fiber length must be positive");
  if (!(tendon_slack_length > 0.0)) throw ConfigError("tendon slack length must be positive");
  if (!(pennation_at_optimal >= 0.0 && pennation_at_optimal <= 0.6)) {
    throw ConfigError("pennation at optimal length must lie in [0, 0.6] rad");
  }
  if (!(damping >= 0.0)) throw ConfigError("damping must be non-negative");
}

double HillCurves::active_force_length(double l) const {
  const double d = l - 1.0;
  return std::exp(-d * d / fl_width);
}

double HillCurves::force_velocity(double v) const {
  if (v <= -1.0) return 0.0;
  if (v <= 0.0) return (1.0 + v) / (1.0 - v / hill_curvature);
  const double rise = eccentric_plateau - 1.0;
  const double knee = rise / (1.0 + 1.0 / hill_curvature);
  return eccentric_plateau - rise / (1.0 + v / knee);
}

double HillCurves::passive_force_length(double l) const {
  if (l <= 1.0) return 0.0;
  return std::expm1(passive_shape * (l - 1.0) / passive_strain) / std::expm1(passive_shape);
}

FiberKinematics fiber_kinematics(double mtu_length, double mtu_velocity, const MtuParameters& p,
                                 const HillCurves& curves) {
  const double along = mtu_length - p.tendon_slack_length;
  if (!(along > 0.0)) {
    throw SingularConfiguration("MTU length does not exceed tendon slack length");
  }
  const double width = p.optimal_fiber_length * std::sin(p.pennation_at_optimal);
  const double fiber = std::sqrt(along * along + width * width);
  FiberKinematics k;
  k.norm_length = fiber / p.optimal_fiber_length;
  k.cos_pennation = along / fiber;
  k.norm_velocity = mtu_velocity * k.cos_pennation / (curves.max_velocity * p.optimal_fiber_length);
  return k;
}

ForceBasis force_basis(double mtu_length, double mtu_velocity, const MtuParameters& p,
                       const HillCurves& curves) {
  const FiberKinematics k = fiber_kinematics(mtu_length, mtu_velocity, p, curves);
  const double scale = p.max_isometric_force * k.cos_pennation;
  ForceBasis b;
  b.active_unit = scale * curves.active_force_length(k.norm_length) *
                  curves.force_velocity(k.norm_velocity);
  b.passive = std::max(
      0.0, scale * (curves.passive_force_length(k.norm_length) + p.damping * k.norm_velocity));
  return b;
}

MtuForce mtu_force(const MtuState& state, const MtuParameters& p, const HillCurves& curves) {
  const ForceBasis b = force_basis(state.length, state.velocity, p, curves);
  MtuForce f;
  f.active = std::clamp(state.activation, 0.0, 1.0) * b.active_unit;
  f.passive = b.passive;
  f.total = f.active + f.passive;
  return f;
}

JointLoad assemble_joint_load(std::span<const MtuForce> forces, std::span<const double> moment_arms,
                              std::span<const double> axial_dir, double external_axial) {
  if (forces.size() != moment_arms.size() || forces.size() != axial_dir.size()) {
    throw DataError("force, moment arm and axial lists differ in length");
  }
  JointLoad load;
  load.compression = external_axial;
  for (std::size_t i = 0; i < forces.size(); ++i) {
    load.m_active -= forces[i].active * moment_arms[i];
    load.m_passive -= forces[i].passive * moment_arms[i];
    load.compression += forces[i].total * axial_dir[i];
  }
  load.m_total = load.m_active + load.m_passive;
  return load;
}

}  // namespace exo::muscle

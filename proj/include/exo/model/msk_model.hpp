#pragma once

#include <vector>

#include "exo/geometry/bspline.hpp"
#include "exo/model/roster.hpp"
#include "exo/muscle/hill.hpp"
#include "exo/signal/emg.hpp"

namespace exo::model {

using signal::ChannelArray;

/// Activation-independent quantities at one pose, summed per EMG channel.
/// Any joint load for that pose follows from these by a weighted sum over
/// channel activations.
struct PoseTerms {
  ChannelArray active_moment_unit{};  ///< extension moment at unit activation
  ChannelArray active_axial_unit{};   ///< compression at unit activation
  double passive_moment = 0.0;
  double passive_axial = 0.0;
};

/// Scratch buffers for the tick path; one per thread.
struct Workspace {
  std::vector<double> length;
  std::vector<double> moment_arm;
  std::vector<double> excitation;
  std::vector<muscle::MtuForce> forces;
  bool extrapolated = false;
};

/// EMG-driven trunk model: envelopes and L5/S1 kinematics in, joint load out.
class MskModel {
 public:
  MskModel(Roster roster, geometry::BSplineSurrogate surrogate,
           std::vector<muscle::MtuParameters> params, double activation_shape,
           const signal::EmgMtuMapping& mapping = signal::EmgMtuMapping::trunk_default(),
           muscle::HillCurves curves = {});

  /// Trunk roster for `body_mass` with a freshly fitted surrogate and nominal
  /// parameters.
  static MskModel build(double body_mass, double activation_shape);

  std::size_t size() const { return roster_.size(); }
  const Roster& roster() const { return roster_; }
  const geometry::BSplineSurrogate& surrogate() const { return surrogate_; }
  const std::vector<muscle::MtuParameters>& parameters() const { return params_; }
  void set_parameters(std::vector<muscle::MtuParameters> params);
  double activation_shape() const { return shape_; }
  void set_activation_shape(double shape);
  const signal::ExcitationMap& excitation_map() const { return map_; }
  const muscle::HillCurves& curves() const { return curves_; }
  const std::vector<double>& axial_dirs() const { return axial_; }

  Workspace make_workspace() const;

  ChannelArray activations(const ChannelArray& envelopes) const;

  /// Full per-MTU evaluation: surrogate, activation, Hill forces, projection.
  muscle::JointLoad evaluate(const ChannelArray& envelopes, double angle, double angular_velocity,
                             double external_axial, Workspace& ws) const;

  PoseTerms pose_terms(double angle, double angular_velocity, Workspace& ws) const;

  static muscle::JointLoad combine(const PoseTerms& terms, const ChannelArray& activations,
                                   double external_axial);

 private:
  Roster roster_;
  geometry::BSplineSurrogate surrogate_;
  std::vector<muscle::MtuParameters> params_;
  double shape_;
  signal::ExcitationMap map_;
  muscle::HillCurves curves_;
  std::vector<double> axial_;
};

}  // namespace exo::model

#include "exo/model/msk_model.hpp"

#include <algorithm>

#include "exo/error.hpp"

namespace exo::model {

MskModel::MskModel(Roster roster, geometry::BSplineSurrogate surrogate,
                   std::vector<muscle::MtuParameters> params, double activation_shape,
                   const signal::EmgMtuMapping& mapping, muscle::HillCurves curves)
    : roster_(std::move(roster)),
      surrogate_(std::move(surrogate)),
      shape_(0.0),
      curves_(curves),
      axial_(roster_.axial_dirs()) {
  if (surrogate_.num_mtus() != roster_.size()) {
    throw ConfigError("surrogate and roster disagree on MTU count");
  }
  const auto groups = roster_.groups();
  const auto sides = roster_.sides();
  map_ = signal::build_excitation_map(mapping, groups, sides);
  set_parameters(std::move(params));
  set_activation_shape(activation_shape);
}

MskModel MskModel::build(double body_mass, double activation_shape) {
  Roster roster = make_trunk_roster(body_mass);
  const auto grid = geometry::sample_geometry(roster.synthetic_geometry(),
                                              geometry::default_angle_grid());
  auto surrogate = geometry::fit_surrogate(grid);
  auto params = roster.nominal_parameters();
  return MskModel(std::move(roster), std::move(surrogate), std::move(params), activation_shape);
}

void MskModel::set_parameters(std::vector<muscle::MtuParameters> params) {
  if (params.size() != roster_.size()) throw ConfigError("parameter count does not match roster");
  for (const auto& p : params) p.validate();
  params_ = std::move(params);
}

void MskModel::set_activation_shape(double shape) {
  if (!(shape >= -3.0 && shape <= 0.0)) throw ConfigError("activation shape must lie in [-3, 0]");
  shape_ = shape;
}

Workspace MskModel::make_workspace() const {
  Workspace ws;
  ws.length.resize(size());
  ws.moment_arm.resize(size());
  ws.excitation.resize(size());
  ws.forces.resize(size());
  return ws;
}

ChannelArray MskModel::activations(const ChannelArray& envelopes) const {
  ChannelArray a{};
  for (std::size_t c = 0; c < a.size(); ++c) {
    a[c] = signal::excitation_to_activation(envelopes[c], shape_);
  }
  return a;
}

muscle::JointLoad MskModel::evaluate(const ChannelArray& envelopes, double angle,
                                     double angular_velocity, double external_axial,
                                     Workspace& ws) const {
  ws.extrapolated = surrogate_.eval(angle, ws.length, ws.moment_arm);
  const ChannelArray act = activations(envelopes);
  map_.apply(act, ws.excitation);
  for (std::size_t i = 0; i < size(); ++i) {
    const muscle::MtuState state{ws.length[i], -ws.moment_arm[i] * angular_velocity,
                                 ws.excitation[i]};
    ws.forces[i] = muscle::mtu_force(state, params_[i], curves_);
  }
  return muscle::assemble_joint_load(ws.forces, ws.moment_arm, axial_, external_axial);
}

PoseTerms MskModel::pose_terms(double angle, double angular_velocity, Workspace& ws) const {
  ws.extrapolated = surrogate_.eval(angle, ws.length, ws.moment_arm);
  PoseTerms t;
  for (std::size_t i = 0; i < size(); ++i) {
    const double arm = ws.moment_arm[i];
    const auto b = muscle::force_basis(ws.length[i], -arm * angular_velocity, params_[i], curves_);
    t.passive_moment -= b.passive * arm;
    t.passive_axial += b.passive * axial_[i];
    if (const auto& ch = map_.channel[i]) {
      t.active_moment_unit[*ch] -= b.active_unit * arm;
      t.active_axial_unit[*ch] += b.active_unit * axial_[i];
    }
  }
  return t;
}

muscle::JointLoad MskModel::combine(const PoseTerms& terms, const ChannelArray& activations,
                                    double external_axial) {
  muscle::JointLoad load;
  load.m_passive = terms.passive_moment;
  load.compression = external_axial + terms.passive_axial;
  for (std::size_t c = 0; c < activations.size(); ++c) {
    const double a = std::clamp(activations[c], 0.0, 1.0);
    load.m_active += a * terms.active_moment_unit[c];
    load.compression += a * terms.active_axial_unit[c];
  }
  load.m_total = load.m_active + load.m_passive;
  return load;
}

}  // namespace exo::model

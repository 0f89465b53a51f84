#include "exo/model/roster.hpp"

#include <cmath>
#include <random>

#include "exo/error.hpp"
#include "exo/rng.hpp"

namespace exo::model {

namespace {

struct GroupTemplate {
  const char* group;
  int count;
  double rest_length;
  double base_arm;
  double arm_slope;
  double axial_dir;
  double f_max;
  double l_opt;
  double upright_norm_length;  // normalized fiber length at 0 rad
  double pennation;
};

// Flexors carry positive arms, extensors negative.
constexpr GroupTemplate kTemplates[] = {
    {"rectus_abdominis", 1, 0.36, 0.085, -0.010, 0.85, 350.0, 0.30, 0.95, 0.00},
    {"external_oblique", 6, 0.26, 0.060, -0.008, 0.55, 70.0, 0.14, 0.95, 0.00},
    {"internal_oblique", 6, 0.20, 0.050, -0.006, 0.55, 60.0, 0.11, 0.95, 0.00},
    {"iliocostalis_lumborum", 4, 0.24, -0.060, 0.010, 0.95, 110.0, 0.10, 0.85, 0.15},
    {"longissimus_lumborum", 5, 0.22, -0.050, 0.008, 0.97, 100.0, 0.10, 0.85, 0.15},
    {"multifidus", 15, 0.12, -0.055, 0.010, 0.98, 60.0, 0.09, 0.85, 0.30},
    {"longissimus_thoracis", 10, 0.38, -0.060, 0.010, 0.95, 70.0, 0.12, 0.85, 0.10},
    {"iliocostalis_thoracis", 6, 0.36, -0.065, 0.010, 0.95, 80.0, 0.12, 0.85, 0.10},
    {"latissimus_dorsi", 10, 0.40, -0.070, 0.012, 0.80, 40.0, 0.25, 0.85, 0.00},
    {"quadratus_lumborum", 6, 0.14, -0.035, 0.006, 0.90, 50.0, 0.08, 0.85, 0.10},
    {"psoas_major", 13, 0.24, 0.015, -0.003, 0.95, 70.0, 0.12, 0.95, 0.15},
};

constexpr std::uint64_t kRosterSeed = 0x5eed164ULL;

double uniform(Rng& rng, double lo, double hi) { return rng.uniform(lo, hi); }

}  // namespace

std::vector<std::string> Roster::groups() const {
  std::vector<std::string> out;
  for (const auto& m : mtus) out.push_back(m.group);
  return out;
}

std::vector<Side> Roster::sides() const {
  std::vector<Side> out;
  for (const auto& m : mtus) out.push_back(m.side);
  return out;
}

std::vector<double> Roster::axial_dirs() const {
  std::vector<double> out;
  for (const auto& m : mtus) out.push_back(m.geometry.axial_dir);
  return out;
}

geometry::SyntheticGeometry Roster::synthetic_geometry() const {
  geometry::SyntheticGeometry g;
  for (const auto& m : mtus) g.mtus.push_back(m.geometry);
  return g;
}

std::vector<muscle::MtuParameters> Roster::nominal_parameters() const {
  std::vector<muscle::MtuParameters> out;
  for (const auto& m : mtus) out.push_back(m.nominal);
  return out;
}

Roster make_trunk_roster(double body_mass) {
  if (!(body_mass > 0.0)) throw ConfigError("body mass must be positive");
  const double force_scale = body_mass / kReferenceBodyMass;
  Rng rng(kRosterSeed);

  // Jitter is drawn once per fascicle and mirrored to both sides.
  std::vector<MtuDescriptor> left;
  for (const GroupTemplate& t : kTemplates) {
    for (int k = 0; k < t.count; ++k) {
      MtuDescriptor d;
      d.group = t.group;
      d.name = std::string(t.group) + "_" + std::to_string(k + 1);
      d.geometry.rest_length = t.rest_length * uniform(rng, 0.92, 1.08);
      d.geometry.base_moment_arm = t.base_arm * uniform(rng, 0.9, 1.1);
      d.geometry.arm_slope = t.arm_slope * uniform(rng, 0.8, 1.2);
      d.geometry.axial_dir = t.axial_dir;

      muscle::MtuParameters& p = d.nominal;
      p.max_isometric_force = t.f_max * uniform(rng, 0.85, 1.15) * force_scale;
      p.optimal_fiber_length = t.l_opt * uniform(rng, 0.95, 1.05);
      p.pennation_at_optimal = t.pennation;
      const double fiber = t.upright_norm_length * p.optimal_fiber_length;
      const double width = p.optimal_fiber_length * std::sin(p.pennation_at_optimal);
      p.tendon_slack_length = d.geometry.rest_length - std::sqrt(fiber * fiber - width * width);
      p.validate();
      left.push_back(d);
    }
  }

  Roster roster;
  for (Side side : {Side::left, Side::right}) {
    for (MtuDescriptor d : left) {
      d.side = side;
      d.name += side == Side::left ? "_l" : "_r";
      roster.mtus.push_back(std::move(d));
    }
  }
  return roster;
}

}  // namespace exo::model

#pragma once

#include <string>
#include <vector>

#include "exo/geometry/geometry.hpp"
#include "exo/muscle/hill.hpp"
#include "exo/signal/emg.hpp"

namespace exo::model {

using signal::Side;

struct MtuDescriptor {
  std::string name;
  std::string group;
  Side side = Side::left;
  geometry::MtuGeometry geometry;
  muscle::MtuParameters nominal;
};

/// Ordered MTU list of the trunk model.
struct Roster {
  std::vector<MtuDescriptor> mtus;

  std::size_t size() const { return mtus.size(); }
  std::vector<std::string> groups() const;
  std::vector<Side> sides() const;
  std::vector<double> axial_dirs() const;
  geometry::SyntheticGeometry synthetic_geometry() const;
  std::vector<muscle::MtuParameters> nominal_parameters() const;
};

/// Mass the nominal maximum isometric forces refer to.
inline constexpr double kReferenceBodyMass = 75.0;

/// Bilateral lumbar roster of 164 MTUs: eleven anatomical groups per side,
/// fascicles jittered around group templates with a fixed seed so every
/// build produces the same model. Forces are scaled linearly with body mass.
Roster make_trunk_roster(double body_mass = kReferenceBodyMass);

}  // namespace exo::model

#include "exo/geometry/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "exo/error.hpp"

namespace exo::geometry {

void SyntheticGeometry::validate() const {
  for (std::size_t i = 0; i < mtus.size(); ++i) {
    const MtuGeometry& g = mtus[i];
    const std::string tag = "MTU " + std::to_string(i);
    if (!(g.rest_length > 0.0)) throw ConfigError(tag + ": rest length must be positive");
    if (!(std::abs(g.base_moment_arm) <= 0.12)) throw ConfigError(tag + ": |moment arm| > 0.12 m");
    if (!(g.axial_dir >= 0.0 && g.axial_dir <= 1.0)) throw ConfigError(tag + ": axial_dir outside [0,1]");
  }
}

std::vector<double> uniform_grid(double lo, double hi, int nodes) {
  std::vector<double> out(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (nodes - 1);
  }
  return out;
}

std::vector<double> default_angle_grid() {
  constexpr double deg = std::numbers::pi / 180.0;
  return uniform_grid(kGridLowDeg * deg, kGridHighDeg * deg, kDefaultGridNodes);
}

GeometrySampleGrid sample_geometry(const SyntheticGeometry& model, std::span<const double> angles) {
  model.validate();
  GeometrySampleGrid grid;
  grid.angles.assign(angles.begin(), angles.end());
  grid.lengths.resize(model.mtus.size());
  grid.moment_arms.resize(model.mtus.size());
  for (std::size_t i = 0; i < model.mtus.size(); ++i) {
    const MtuGeometry& g = model.mtus[i];
    for (double a : angles) {
      const double len = g.length(a);
      if (!(len > 0.2 * g.rest_length)) {
        throw ConfigError("MTU " + std::to_string(i) + " length collapses at angle " +
                          std::to_string(a) + " rad");
      }
      grid.lengths[i].push_back(len);
      grid.moment_arms[i].push_back(g.moment_arm(a));
    }
  }
  return grid;
}

}  // namespace exo::geometry

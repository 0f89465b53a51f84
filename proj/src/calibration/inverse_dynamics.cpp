#include "exo/calibration/inverse_dynamics.hpp"

#include <cmath>

#include "exo/error.hpp"

namespace exo::calibration {

bool BoxContact::in_contact(double t) const {
  for (const auto& [a, b] : intervals) {
    if (t >= a && t <= b) return true;
  }
  return false;
}

BoxContact detect_box_contact(std::span<const double> t, std::span<const double> box_y,
                              double rest_y, double threshold, double box_mass, double merge_gap) {
  if (t.size() != box_y.size()) throw DataError("time and box_y streams differ in length");
  BoxContact out;
  out.box_mass = box_mass;
  bool inside = false;
  double start = 0.0, last = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(box_y[i])) throw StreamError("non-finite box_y sample", i);
    const bool up = box_y[i] > rest_y + threshold;
    if (up && !inside) {
      start = t[i];
      inside = true;
    }
    if (up) last = t[i];
    if (!up && inside) {
      out.intervals.emplace_back(start, last);
      inside = false;
    }
  }
  if (inside) out.intervals.emplace_back(start, last);

  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : out.intervals) {
    if (!merged.empty() && iv.first - merged.back().second < merge_gap) {
      merged.back().second = iv.second;
    } else {
      merged.push_back(iv);
    }
  }
  out.intervals = std::move(merged);
  return out;
}

std::vector<double> hand_forces(const BoxContact& contact, std::span<const double> t) {
  std::vector<double> f(t.size(), 0.0);
  const double per_hand = contact.box_mass * kGravity / 2.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (contact.in_contact(t[i])) f[i] = per_hand;
  }
  return f;
}

void Anthropometry::validate() const {
  if (!(body_mass > 0.0)) throw ConfigError("body mass must be positive");
  if (!(trunk_mass_fraction > 0.0 && trunk_mass_fraction < 1.0)) {
    throw ConfigError("trunk mass fraction must lie in (0, 1)");
  }
  if (!(trunk_com_distance > 0.0) || !(hand_lever_upright > 0.0) || hand_lever_gain < 0.0) {
    throw ConfigError("segment lengths must be positive");
  }
}

double Anthropometry::hand_lever(double inclination_rad) const {
  return hand_lever_upright + hand_lever_gain * std::sin(inclination_rad);
}

double static_moment(double inclination_rad, double hand_force_total, const Anthropometry& a) {
  const double trunk = a.trunk_mass_fraction * a.body_mass * kGravity * a.trunk_com_distance *
                       std::sin(inclination_rad);
  return trunk + hand_force_total * a.hand_lever(inclination_rad);
}

std::vector<double> inverse_dynamics_moment(std::span<const double> inclination_rad,
                                            std::span<const double> hand_force_per_hand,
                                            const Anthropometry& a) {
  if (inclination_rad.size() != hand_force_per_hand.size()) {
    throw DataError("kinematics and hand force streams are misaligned");
  }
  std::vector<double> m(inclination_rad.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = static_moment(inclination_rad[i], 2.0 * hand_force_per_hand[i], a);
  }
  return m;
}

double external_axial_load(double inclination_rad, double hand_force_total, const Anthropometry& a) {
  const double weight = a.trunk_mass_fraction * a.body_mass * kGravity + hand_force_total;
  return weight * std::cos(inclination_rad);
}

}  // namespace exo::calibration

#pragma once

#include <span>
#include <utility>
#include <vector>

namespace exo::calibration {

inline constexpr double kGravity = 9.81;

struct BoxContact {
  std::vector<std::pair<double, double>> intervals;  ///< [t_start, t_end] in s
  double box_mass = 0.0;                             ///< kg

  bool in_contact(double t) const;
};

/// Contact while box_y > rest_y + threshold; intervals separated by less
/// than `merge_gap` seconds are joined. A box that never moves gives an
/// empty list.
BoxContact detect_box_contact(std::span<const double> t, std::span<const double> box_y,
                              double rest_y, double threshold, double box_mass,
                              double merge_gap = 0.1);

/// Downward force on each hand: half the box weight during contact.
std::vector<double> hand_forces(const BoxContact& contact, std::span<const double> t);

/// Segment properties for the quasi-static top-down model.
struct Anthropometry {
  double body_mass = 75.0;
  double trunk_mass_fraction = 0.55;  ///< trunk, arms and head
  double trunk_com_distance = 0.25;   ///< m from L5/S1
  double hand_lever_upright = 0.30;   ///< horizontal hand distance at zero inclination, m
  double hand_lever_gain = 0.20;      ///< m per unit sin(inclination)

  void validate() const;
  double hand_lever(double inclination_rad) const;
};

/// Extension moment demand at L5/S1 for one pose; `hand_force_total` is the
/// sum over both hands.
double static_moment(double inclination_rad, double hand_force_total, const Anthropometry& a);

/// Reference moment stream from inclination and per-hand force streams.
/// Throws DataError if the streams are not the same length.
std::vector<double> inverse_dynamics_moment(std::span<const double> inclination_rad,
                                            std::span<const double> hand_force_per_hand,
                                            const Anthropometry& a);

/// Axial load from upper-body and box weight carried through L5/S1.
double external_axial_load(double inclination_rad, double hand_force_total, const Anthropometry& a);

}  // namespace exo::calibration

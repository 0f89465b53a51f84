#pragma once

#include <cstddef>
#include <vector>

#include "exo/signal/butterworth.hpp"

namespace exo::control {

/// Hardware ceiling on the summed cable force.
inline constexpr double kMaxCableForce = 400.0;

struct CableCommand {
  double f_total = 0.0;
  double f_left = 0.0;
  double f_right = 0.0;

  static CableCommand symmetric(double total) { return {total, total / 2.0, total / 2.0}; }
};

/// Fixed-length FIFO; a value pushed at tick k comes out at tick k + length.
class DelayLine {
 public:
  explicit DelayLine(std::size_t length = 0) : buf_(length, 0.0) {}

  double push(double x);
  std::size_t length() const { return buf_.size(); }
  void reset();

 private:
  std::vector<double> buf_;
  std::size_t head_ = 0;
};

struct NmbcConfig {
  double gain = 0.2;
  double cable_arm = 0.08;   ///< m
  double delay = 0.080;      ///< s
  double lp_cutoff = 10.0;   ///< Hz
  double tick_rate = 1000.0; ///< Hz
  double f_max_hw = kMaxCableForce;

  void validate() const;
  std::size_t delay_ticks() const;
};

/// Model-based controller: low-pass the estimated active extension moment,
/// scale by gain over cable arm, delay, and clamp to what cables can pull.
class NmbcController {
 public:
  explicit NmbcController(const NmbcConfig& cfg = {});

  /// A non-finite moment holds the previous command and counts a diagnostic.
  CableCommand step(double m_active);
  void reset();

  std::size_t diagnostics() const { return diagnostics_; }
  const NmbcConfig& config() const { return cfg_; }

 private:
  NmbcConfig cfg_;
  signal::SosFilter lowpass_;
  DelayLine delay_;
  CableCommand last_;
  std::size_t diagnostics_ = 0;
};

struct VsbcConfig {
  double k = 0.0;  ///< N per degree of trunk inclination
  double f_max_hw = kMaxCableForce;

  void validate() const;
};

/// Spring stiffness from the static L5/S1 moment in the reference pose
/// (30 degrees, holding 5 kg): 20 % of that moment over the cable arm, per
/// 30 degrees. Throws ConfigError for a non-positive moment.
VsbcConfig calibrate_spring(double static_moment, double gain = 0.2, double cable_arm = 0.08,
                            double reference_deg = 30.0);

/// Memoryless virtual spring on trunk inclination in degrees.
CableCommand vsbc_step(double inclination_deg, const VsbcConfig& cfg);

}  // namespace exo::control

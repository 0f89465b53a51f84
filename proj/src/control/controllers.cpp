#include "exo/control/controllers.hpp"

#include <algorithm>
#include <cmath>

#include "exo/error.hpp"

namespace exo::control {

double DelayLine::push(double x) {
  if (buf_.empty()) return x;
  const double out = buf_[head_];
  buf_[head_] = x;
  head_ = (head_ + 1) % buf_.size();
  return out;
}

void DelayLine::reset() {
  std::fill(buf_.begin(), buf_.end(), 0.0);
  head_ = 0;
}

void NmbcConfig::validate() const {
  if (!(gain > 0.0)) throw ConfigError("NMBC gain must be positive");
  if (!(cable_arm > 0.0)) throw ConfigError("cable moment arm must be positive");
  if (!(tick_rate > 0.0) || !(lp_cutoff > 0.0) || lp_cutoff >= tick_rate / 2.0) {
    throw ConfigError("NMBC filter cutoff must lie below Nyquist");
  }
  if (!(delay >= 0.0)) throw ConfigError("NMBC delay must be non-negative");
  const double ticks = delay * tick_rate;
  if (std::abs(ticks - std::round(ticks)) > 1e-9) {
    throw ConfigError("NMBC delay must be a whole number of ticks");
  }
  if (!(f_max_hw > 0.0)) throw ConfigError("hardware force limit must be positive");
}

std::size_t NmbcConfig::delay_ticks() const {
  return static_cast<std::size_t>(std::llround(delay * tick_rate));
}

NmbcController::NmbcController(const NmbcConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  lowpass_ = signal::SosFilter(
      signal::design_filter(signal::FilterSpec::lowpass(cfg_.lp_cutoff, cfg_.tick_rate)), false);
  delay_ = DelayLine(cfg_.delay_ticks());
}

CableCommand NmbcController::step(double m_active) {
  if (!std::isfinite(m_active)) {
    ++diagnostics_;
    return last_;
  }
  const double scaled = lowpass_.step(m_active) * cfg_.gain / cfg_.cable_arm;
  const double f = std::clamp(delay_.push(scaled), 0.0, cfg_.f_max_hw);
  last_ = CableCommand::symmetric(f);
  return last_;
}

void NmbcController::reset() {
  lowpass_.reset();
  delay_.reset();
  last_ = {};
  diagnostics_ = 0;
}

void VsbcConfig::validate() const {
  if (!(k >= 0.0)) throw ConfigError("spring stiffness must be non-negative");
  if (!(f_max_hw > 0.0)) throw ConfigError("hardware force limit must be positive");
}

VsbcConfig calibrate_spring(double static_moment, double gain, double cable_arm,
                            double reference_deg) {
  if (!(static_moment > 0.0)) throw ConfigError("static calibration moment must be positive");
  VsbcConfig cfg;
  cfg.k = gain * (static_moment / cable_arm) / reference_deg;
  return cfg;
}

CableCommand vsbc_step(double inclination_deg, const VsbcConfig& cfg) {
  return CableCommand::symmetric(std::clamp(cfg.k * inclination_deg, 0.0, cfg.f_max_hw));
}

}  // namespace exo::control

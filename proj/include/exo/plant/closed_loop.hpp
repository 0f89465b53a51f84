#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exo/control/controllers.hpp"
#include "exo/model/msk_model.hpp"
#include "exo/plant/actuator.hpp"
#include "exo/plant/emg_synth.hpp"
#include "exo/plant/kinematics.hpp"
#include "exo/plant/subject.hpp"

namespace exo::plant {

enum class ControllerKind { noexo, nmbc, vsbc };

std::string_view controller_name(ControllerKind kind);
/// Accepts NOEXO, NMBC and VSBC in any case; throws ConfigError otherwise.
ControllerKind controller_from_name(std::string_view name);

struct ClosedLoopConfig {
  double tick_rate = 1000.0;
  double record_rate = 100.0;
  control::NmbcConfig nmbc;
  double vsbc_gain = 0.2;
  double vsbc_reference_deg = 30.0;
  double vsbc_reference_box = 5.0;  ///< kg
  ActuatorModel actuator;
  signal::EnvelopeConfig envelope;
  double carrier_hz = 100.0;
  double latency_budget_us = 1000.0;
  bool keep_ticks = false;
  int tick_decimation = 1;

  void validate() const;
};

/// One logged tick.
struct TickRow {
  double t = 0.0;
  double inclination_deg = 0.0;
  double demand = 0.0;    ///< inverse-dynamics extension moment, N m
  double assist = 0.0;    ///< cable moment applied this tick, N m
  double residual = 0.0;  ///< active moment the subject must produce, N m
  double m_active = 0.0;  ///< controller-side model estimate, N m
  double m_passive = 0.0;
  double compression = 0.0;  ///< N
  double f_desired = 0.0;    ///< N
  double f_measured = 0.0;   ///< N
  double latency_us = 0.0;
  ChannelArray envelopes{};
};

struct TickLog {
  std::vector<TickRow> rows;
};

/// Decimated per-run record used by the analysis stage. Times start at 0
/// and the last sample sits on the final cycle boundary.
struct TrialRecord {
  std::string subject_id;
  ControllerKind controller = ControllerKind::noexo;
  double box_mass = 0.0;
  double body_mass = 0.0;
  int n_cycles = 0;
  double cycle_duration = 8.0;
  double sample_rate = 100.0;

  std::vector<double> t;
  std::vector<double> inclination_deg;
  std::vector<double> demand;
  std::vector<double> residual;
  std::vector<double> m_active;
  std::vector<double> m_passive;
  std::vector<double> compression;
  std::vector<double> f_desired;
  std::vector<double> f_measured;
  std::vector<double> emg_sum;  ///< sum of the eight processed envelopes

  long saturated_ticks = 0;
  long latency_violations = 0;
  long diagnostics = 0;

  std::size_t size() const { return t.size(); }
};

struct ClosedLoopResult {
  TrialRecord record;
  TickLog ticks;  ///< empty unless keep_ticks
};

/// Muscle model that generates the subject's EMG.
model::MskModel subject_model(const SyntheticSubject& subject);

/// VSBC stiffness for a subject from the static reference pose.
control::VsbcConfig subject_spring(const SyntheticSubject& subject, const ClosedLoopConfig& cfg);

/// Simulate `n_cycles` lifts at 1 kHz. `truth` synthesizes EMG from the
/// residual demand; `controller_model` is what the exosuit runs on.
ClosedLoopResult run_closed_loop(const SyntheticSubject& subject, const model::MskModel& truth,
                                 const model::MskModel& controller_model,
                                 const LiftingCycleSpec& spec, ControllerKind kind, int n_cycles,
                                 std::uint64_t seed, const ClosedLoopConfig& cfg = {});

}  // namespace exo::plant

#include "exo/plant/closed_loop.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numbers>

#include "exo/calibration/inverse_dynamics.hpp"
#include "exo/error.hpp"

namespace exo::plant {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::noexo: return "NOEXO";
    case ControllerKind::nmbc: return "NMBC";
    case ControllerKind::vsbc: return "VSBC";
  }
  return "?";
}

ControllerKind controller_from_name(std::string_view name) {
  const std::string u = upper(name);
  if (u == "NOEXO") return ControllerKind::noexo;
  if (u == "NMBC") return ControllerKind::nmbc;
  if (u == "VSBC") return ControllerKind::vsbc;
  throw ConfigError("unknown controller '" + std::string(name) + "'");
}

void ClosedLoopConfig::validate() const {
  if (!(tick_rate > 0.0)) throw ConfigError("tick rate must be positive");
  const double ratio = tick_rate / record_rate;
  if (!(record_rate > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw ConfigError("record rate must divide the tick rate");
  }
  if (tick_decimation < 1) throw ConfigError("tick decimation must be at least 1");
  if (!(vsbc_gain > 0.0) || !(vsbc_reference_deg > 0.0) || vsbc_reference_box < 0.0) {
    throw ConfigError("spring calibration constants must be positive");
  }
  nmbc.validate();
  actuator.validate();
}

model::MskModel subject_model(const SyntheticSubject& subject) {
  return model::MskModel::build(subject.anthro.body_mass, subject.activation_shape);
}

control::VsbcConfig subject_spring(const SyntheticSubject& subject, const ClosedLoopConfig& cfg) {
  const double m_static =
      calibration::static_moment(cfg.vsbc_reference_deg / kRadToDeg,
                                 cfg.vsbc_reference_box * calibration::kGravity, subject.anthro);
  auto spring = control::calibrate_spring(m_static, cfg.vsbc_gain, cfg.nmbc.cable_arm,
                                          cfg.vsbc_reference_deg);
  spring.f_max_hw = cfg.nmbc.f_max_hw;
  return spring;
}

ClosedLoopResult run_closed_loop(const SyntheticSubject& subject, const model::MskModel& truth,
                                 const model::MskModel& controller_model,
                                 const LiftingCycleSpec& spec, ControllerKind kind, int n_cycles,
                                 std::uint64_t seed, const ClosedLoopConfig& cfg) {
  cfg.validate();
  subject.validate();
  const TrialKinematics kin = generate_cycle(spec, n_cycles);

  Rng rng(seed);
  EmgSynthesizer synth(subject, cfg.carrier_hz, cfg.tick_rate);
  std::vector<signal::EmgProcessor> processors;
  for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
    processors.emplace_back(
        signal::EmgChannel{std::string(signal::channel_name(c)), subject.mvc[c], cfg.tick_rate},
        cfg.envelope);
  }
  control::NmbcConfig ncfg = cfg.nmbc;
  ncfg.tick_rate = cfg.tick_rate;
  control::NmbcController nmbc(ncfg);
  const control::VsbcConfig spring = subject_spring(subject, cfg);
  Actuator actuator(cfg.actuator, cfg.tick_rate);

  auto truth_ws = truth.make_workspace();
  auto ctrl_ws = controller_model.make_workspace();

  ClosedLoopResult out;
  TrialRecord& rec = out.record;
  rec.subject_id = subject.id;
  rec.controller = kind;
  rec.box_mass = spec.box_mass;
  rec.body_mass = subject.anthro.body_mass;
  rec.n_cycles = n_cycles;
  rec.cycle_duration = spec.cycle_duration();
  rec.sample_rate = cfg.record_rate;

  const long total = std::lround(n_cycles * spec.cycle_duration() * cfg.tick_rate);
  const long record_every = std::lround(cfg.tick_rate / cfg.record_rate);
  const double dt_kin = 1.0 / kin.sample_rate;
  const double box_force = spec.box_mass * calibration::kGravity;
  double f_measured = 0.0;

  for (long k = 0; k <= total; ++k) {
    const double t = static_cast<double>(k) / cfg.tick_rate;
    const auto j = std::min(kin.t.size() - 1,
                            static_cast<std::size_t>(std::floor(t * kin.sample_rate + 1e-9)));
    const double incl = kin.inclination[j];
    const double angle = kin.l5s1_angle[j];
    const double ang_vel = j == 0 ? 0.0 : (kin.l5s1_angle[j] - kin.l5s1_angle[j - 1]) / dt_kin;
    const double hands = cycle_box_held(spec, t) ? box_force : 0.0;

    // Subject side: quasi-static re-planning against last tick's assistance.
    const double demand = calibration::static_moment(incl, hands, subject.anthro);
    const double assist = kind == ControllerKind::noexo ? 0.0 : f_measured * cfg.nmbc.cable_arm;
    const model::PoseTerms terms = truth.pose_terms(angle, ang_vel, truth_ws);
    const double residual = std::max(0.0, demand - assist - terms.passive_moment);
    const SynthesisResult syn = synth.solve(residual, terms, truth);
    if (syn.saturated) ++rec.saturated_ticks;
    const ChannelArray raw = synth.raw_sample(syn.envelopes, k, rng);

    // Exosuit side.
    const auto start = std::chrono::steady_clock::now();
    ChannelArray env{};
    for (std::size_t c = 0; c < env.size(); ++c) env[c] = processors[c].step(raw[c]);
    const muscle::JointLoad load = controller_model.evaluate(env, angle, ang_vel, 0.0, ctrl_ws);
    control::CableCommand cmd;
    switch (kind) {
      case ControllerKind::noexo: break;
      case ControllerKind::nmbc: cmd = nmbc.step(load.m_active); break;
      case ControllerKind::vsbc: cmd = control::vsbc_step(incl * kRadToDeg, spring); break;
    }
    const double latency =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    if (latency > cfg.latency_budget_us) ++rec.latency_violations;

    f_measured = kind == ControllerKind::noexo ? 0.0 : actuator.step(cmd, rng);

    if (k % record_every == 0) {
      double emg = 0.0;
      for (double e : env) emg += e;
      rec.t.push_back(t);
      rec.inclination_deg.push_back(incl * kRadToDeg);
      rec.demand.push_back(demand);
      rec.residual.push_back(residual);
      rec.m_active.push_back(load.m_active);
      rec.m_passive.push_back(load.m_passive);
      rec.compression.push_back(load.compression);
      rec.f_desired.push_back(cmd.f_total);
      rec.f_measured.push_back(f_measured);
      rec.emg_sum.push_back(emg);
    }
    if (cfg.keep_ticks && k % cfg.tick_decimation == 0) {
      out.ticks.rows.push_back({t, incl * kRadToDeg, demand, assist, residual, load.m_active,
                                load.m_passive, load.compression, cmd.f_total, f_measured, latency,
                                env});
    }
  }
  rec.diagnostics = static_cast<long>(nmbc.diagnostics());
  return out;
}

}  // namespace exo::plant

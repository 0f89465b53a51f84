#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "exo/calibration/inverse_dynamics.hpp"
#include "exo/plant/actuator.hpp"
#include "exo/plant/closed_loop.hpp"
#include "exo/plant/emg_synth.hpp"
#include "exo/plant/kinematics.hpp"
#include "exo/plant/subject.hpp"

using namespace exo::plant;

namespace {

const std::vector<SyntheticSubject>& cohort() {
  static const auto c = make_cohort({});
  return c;
}

double peak(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST_CASE("lifting cycle boundaries, contact and erect instant") {
  LiftingCycleSpec spec;
  spec.box_mass = 15.0;
  const auto k = generate_cycle(spec);
  REQUIRE(k.t.size() == 321);
  CHECK(k.inclination.front() == 0.0);
  CHECK(std::abs(k.inclination.back()) < 1e-12);
  CHECK(std::abs(k.inclination[160]) < 1e-12);  // 4 s
  CHECK(k.inclination[80] == doctest::Approx(70.0 * std::numbers::pi / 180.0));
  for (std::size_t i = 0; i < k.t.size(); ++i) {
    CHECK(k.l5s1_angle[i] == doctest::Approx(0.5 * k.inclination[i]));
    CHECK(k.inclination[i] >= 0.0);
  }
  const auto contact =
      exo::calibration::detect_box_contact(k.t, k.box_y, k.box_rest_y, 0.01, spec.box_mass);
  REQUIRE(contact.intervals.size() == 1);
  CHECK(std::abs(contact.intervals[0].first - 2.0) <= 0.025);
  CHECK(std::abs(contact.intervals[0].second - 6.0) <= 0.025);
}

TEST_CASE("minimum-jerk profile is smooth at phase joints") {
  LiftingCycleSpec spec;
  const double h = 1e-4;
  for (double tj : {2.0, 4.0, 6.0}) {
    const double v = (cycle_inclination(spec, tj + h) - cycle_inclination(spec, tj - h)) / (2 * h);
    CHECK(std::abs(v) < 1e-4);
  }
}

TEST_CASE("cohort covers the mass range deterministically") {
  const auto a = make_cohort({});
  const auto b = make_cohort({});
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].anthro.body_mass >= 58.0);
    CHECK(a[i].anthro.body_mass <= 85.0);
    CHECK(a[i].anthro.body_mass == b[i].anthro.body_mass);
    CHECK(a[i].mvc == b[i].mvc);
  }
}

TEST_CASE("EMG synthesis reproduces the residual and respects the floor") {
  const auto& s = cohort()[3];
  const auto truth = subject_model(s);
  EmgSynthesizer synth(s);
  auto ws = truth.make_workspace();
  const double angle = 0.3, vel = 0.0;
  const auto terms = truth.pose_terms(angle, vel, ws);
  const double demand = exo::calibration::static_moment(0.6, 15.0 * 9.81, s.anthro);

  SUBCASE("assistance equal to demand leaves only co-contraction") {
    const auto r = synth.solve(0.0, terms, truth);
    CHECK(r.drive == 0.0);
    for (double e : r.envelopes) CHECK(e == doctest::Approx(s.cocontraction_level));
  }
  SUBCASE("unassisted demand is reproduced by the model within 5 %") {
    const double residual = std::max(0.0, demand - terms.passive_moment);
    const auto r = synth.solve(residual, terms, truth);
    CHECK_FALSE(r.saturated);
    const auto load = truth.evaluate(r.envelopes, angle, vel, 0.0, ws);
    CHECK(std::abs(load.m_total - demand) <= 0.05 * demand);
    CHECK(load.m_active == doctest::Approx(residual).epsilon(1e-6));
  }
  SUBCASE("heavier box needs strictly larger extensor envelopes") {
    const double light = exo::calibration::static_moment(0.6, 5.0 * 9.81, s.anthro);
    const double heavy = exo::calibration::static_moment(0.6, 10.0 * 9.81, s.anthro);
    const auto a = synth.solve(light - terms.passive_moment, terms, truth);
    const auto b = synth.solve(heavy - terms.passive_moment, terms, truth);
    for (std::size_t c = 2; c < 8; ++c) CHECK(b.envelopes[c] > a.envelopes[c]);
    CHECK(b.envelopes[0] == a.envelopes[0]);
  }
  SUBCASE("an impossible residual saturates") {
    CHECK(synth.solve(1e5, terms, truth).saturated);
  }
}

TEST_CASE("raw EMG round trip through envelope processing and the model") {
  const auto& s = cohort()[6];
  const auto truth = subject_model(s);
  EmgSynthesizer synth(s);
  auto ws = truth.make_workspace();
  const double angle = 0.25;
  const auto terms = truth.pose_terms(angle, 0.0, ws);
  const double demand = exo::calibration::static_moment(0.5, 5.0 * 9.81, s.anthro);
  const auto r = synth.solve(demand - terms.passive_moment, terms, truth);

  std::vector<exo::signal::EmgProcessor> proc;
  for (std::size_t c = 0; c < 8; ++c) proc.emplace_back(exo::signal::EmgChannel{"x", s.mvc[c], 1000.0});
  exo::Rng rng(1);
  exo::signal::ChannelArray env{};
  exo::signal::ChannelArray mean{};
  for (long k = 0; k < 4000; ++k) {
    const auto raw = synth.raw_sample(r.envelopes, k, rng);
    for (std::size_t c = 0; c < 8; ++c) env[c] = proc[c].step(raw[c]);
    if (k >= 2000) {
      for (std::size_t c = 0; c < 8; ++c) mean[c] += env[c] / 2000.0;
    }
  }
  const auto load = truth.evaluate(mean, angle, 0.0, 0.0, ws);
  CHECK(std::abs(load.m_total - demand) <= 0.05 * demand);
}

TEST_CASE("actuator tracking") {
  ActuatorModel m;
  m.noise_sd = 2.0;
  exo::Rng rng(4);
  SUBCASE("constant command settles within five time constants") {
    Actuator a(m);
    double f = 0.0;
    for (int k = 0; k < 250; ++k) f = a.step(exo::control::CableCommand::symmetric(250.0), rng);
    CHECK(std::abs(f - 250.0) <= 3.0 * m.noise_sd + 250.0 * std::exp(-5.0));
    for (int k = 0; k < 1000; ++k) f = a.step(exo::control::CableCommand::symmetric(250.0), rng);
    CHECK(std::abs(f - 250.0) <= 3.0 * m.noise_sd);
  }
  SUBCASE("zero command decays to zero") {
    m.noise_sd = 0.0;
    Actuator a(m);
    for (int k = 0; k < 500; ++k) a.step(exo::control::CableCommand::symmetric(200.0), rng);
    double f = 1.0;
    for (int k = 0; k < 2000; ++k) f = a.step({}, rng);
    CHECK(f < 1e-6);
  }
  SUBCASE("lifting tempo passes with unit gain") {
    m.noise_sd = 0.0;
    Actuator a(m);
    double in_max = 0.0, out_max = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const double cmd = 100.0 + 100.0 * std::sin(2.0 * std::numbers::pi * 0.25 * k / 1000.0);
      const double f = a.step(exo::control::CableCommand::symmetric(cmd), rng);
      if (k > 8000) {
        in_max = std::max(in_max, cmd - 100.0);
        out_max = std::max(out_max, f - 100.0);
      }
    }
    CHECK(out_max / in_max >= 0.99);
  }
}

TEST_CASE("closed loop: NOEXO has no cable force and runs are reproducible") {
  const auto& s = cohort()[0];
  const auto truth = subject_model(s);
  LiftingCycleSpec spec;
  spec.box_mass = 5.0;
  const auto a = run_closed_loop(s, truth, truth, spec, ControllerKind::noexo, 1, 11).record;
  CHECK(peak(a.f_measured) == 0.0);
  CHECK(peak(a.f_desired) == 0.0);
  REQUIRE(a.size() == 801);
  CHECK(a.t.back() == doctest::Approx(8.0));

  const auto b = run_closed_loop(s, truth, truth, spec, ControllerKind::nmbc, 1, 11).record;
  const auto c = run_closed_loop(s, truth, truth, spec, ControllerKind::nmbc, 1, 11).record;
  CHECK(b.f_measured == c.f_measured);
  CHECK(b.compression == c.compression);
  CHECK(b.emg_sum == c.emg_sum);
}

TEST_CASE("closed loop: NMBC modulates with weight, VSBC does not") {
  const auto& s = cohort()[2];
  const auto truth = subject_model(s);
  LiftingCycleSpec light, heavy;
  light.box_mass = 5.0;
  heavy.box_mass = 15.0;
  const auto n5 = run_closed_loop(s, truth, truth, light, ControllerKind::nmbc, 1, 3).record;
  const auto n15 = run_closed_loop(s, truth, truth, heavy, ControllerKind::nmbc, 1, 3).record;
  CHECK(peak(n15.f_measured) > peak(n5.f_measured));

  ClosedLoopConfig cfg;
  const auto v5 = run_closed_loop(s, truth, truth, light, ControllerKind::vsbc, 1, 3, cfg).record;
  const auto v15 = run_closed_loop(s, truth, truth, heavy, ControllerKind::vsbc, 1, 3, cfg).record;
  CHECK(std::abs(peak(v15.f_measured) - peak(v5.f_measured)) <= 6.0 * cfg.actuator.noise_sd);
  CHECK(v15.f_desired == v5.f_desired);  // load invariance of the spring
}

TEST_CASE("closed loop: moment balance, causality and antagonist activity") {
  const auto& s = cohort()[5];
  const auto truth = subject_model(s);
  LiftingCycleSpec spec;
  spec.box_mass = 15.0;
  ClosedLoopConfig cfg;
  cfg.keep_ticks = true;
  const auto run = run_closed_loop(s, truth, truth, spec, ControllerKind::nmbc, 1, 5, cfg);
  const auto& rows = run.ticks.rows;
  REQUIRE(rows.size() == 8001);
  CHECK(run.record.saturated_ticks == 0);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    // Assistance applied at tick k is what the actuator measured at tick k-1.
    CHECK(rows[k].assist == doctest::Approx(rows[k - 1].f_measured * cfg.nmbc.cable_arm));
  }
  CHECK(rows[0].assist == 0.0);

  const auto kin = generate_cycle(spec);
  auto ws = truth.make_workspace();
  int checked = 0;
  for (std::size_t k = 1; k < rows.size(); k += 7) {
    const auto& r = rows[k];
    if (r.residual <= 0.0) continue;
    const auto j = static_cast<std::size_t>(std::floor(r.t * 40.0 + 1e-9));
    const double vel = j == 0 ? 0.0 : (kin.l5s1_angle[j] - kin.l5s1_angle[j - 1]) * 40.0;
    const auto terms = truth.pose_terms(kin.l5s1_angle[j], vel, ws);
    CHECK(r.residual + terms.passive_moment + r.assist == doctest::Approx(r.demand).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 500);

  // Abdominal envelopes do not rise with assistance.
  const auto noexo = run_closed_loop(s, truth, truth, spec, ControllerKind::noexo, 1, 5, cfg);
  double ra_assisted = 0.0, ra_noexo = 0.0;
  for (std::size_t k = 2000; k < rows.size(); ++k) {
    ra_assisted += rows[k].envelopes[0] + rows[k].envelopes[1];
    ra_noexo += noexo.ticks.rows[k].envelopes[0] + noexo.ticks.rows[k].envelopes[1];
  }
  CHECK(ra_assisted <= ra_noexo * 1.01);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "exo/error.hpp"
#include "exo/signal/butterworth.hpp"
#include "exo/signal/emg.hpp"

using namespace exo::signal;
using std::numbers::pi;

namespace {

// Second-order sections from scipy.signal.butter(..., output='sos'), frozen.
FilterCoefficients scipy_lowpass_3hz() {
  return {{{8.7655548754014627e-05, 1.7531109750802925e-04, 8.7655548754014627e-05,
            -1.9733442497812987e+00, 9.7369487197631477e-01}},
          1000.0};
}
FilterCoefficients scipy_bandpass_30_300() {
  return {{{0.33068254757914384, 0.6613650951582877, 0.33068254757914384, 0.30916770969652696,
            0.22759240143970497},
           {1.0, -2.0, 1.0, -1.7352600307482615, 0.7707287329332915}},
          1000.0};
}

// Drive a filter with a sinusoid and measure the steady-state peak amplitude
// over the last `window` seconds.
double steady_amplitude(FilterCoefficients c, double f_hz, double seconds, double window) {
  SosFilter filt(std::move(c), false);
  const double fs = 1000.0;
  const int n = static_cast<int>(seconds * fs);
  const int tail = static_cast<int>(window * fs);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = filt.step(std::sin(2.0 * pi * f_hz * i / fs));
    if (i >= n - tail) peak = std::max(peak, std::abs(y));
  }
  return peak;
}

}  // namespace

TEST_CASE("lowpass has unity DC gain") {
  SosFilter lp(design_filter(FilterSpec::lowpass(3.0, 1000.0)), false);
  double y = 0.0;
  for (int i = 0; i < 5000; ++i) y = lp.step(1.0);
  CHECK(y == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lowpass 3 Hz attenuates its cutoff by 3 dB") {
  const double ratio = steady_amplitude(design_filter(FilterSpec::lowpass(3.0, 1000.0)), 3.0, 8.0, 1.0);
  CHECK(std::abs(ratio - 0.7071) < 0.01);
}

TEST_CASE("bandpass rejects DC") {
  SosFilter bp(design_filter(FilterSpec::bandpass(30.0, 300.0, 1000.0)), false);
  double y = 1.0;
  for (int i = 0; i < 5000; ++i) y = bp.step(1.0);
  CHECK(std::abs(y) < 1e-6);
}

TEST_CASE("designed filters match scipy frequency responses") {
  const auto lp = design_filter(FilterSpec::lowpass(3.0, 1000.0));
  const auto bp = design_filter(FilterSpec::bandpass(30.0, 300.0, 1000.0));
  const auto lp_ref = scipy_lowpass_3hz();
  const auto bp_ref = scipy_bandpass_30_300();
  for (double f : {0.5, 1.0, 3.0, 7.0, 20.0, 30.0, 60.0, 100.0, 200.0, 300.0, 450.0}) {
    CHECK(std::abs(lp.response(f) - lp_ref.response(f)) < 1e-9);
    CHECK(std::abs(bp.response(f) - bp_ref.response(f)) < 1e-9);
  }
  CHECK(bp.sections.size() == 2);
  CHECK(lp.sections.size() == 1);
}

TEST_CASE("digital -3 dB points sit on the requested cutoffs") {
  const double half_power = 1.0 / std::sqrt(2.0);
  const auto lp = design_filter(FilterSpec::lowpass(10.0, 1000.0));
  CHECK(std::abs(lp.response(10.0)) == doctest::Approx(half_power).epsilon(1e-9));
  const auto bp = design_filter(FilterSpec::bandpass(30.0, 300.0, 1000.0));
  CHECK(std::abs(bp.response(30.0)) == doctest::Approx(half_power).epsilon(1e-9));
  CHECK(std::abs(bp.response(300.0)) == doctest::Approx(half_power).epsilon(1e-9));
  const auto hp = design_filter(FilterSpec::highpass(50.0, 1000.0));
  CHECK(std::abs(hp.response(50.0)) == doctest::Approx(half_power).epsilon(1e-9));
  CHECK(std::abs(hp.response(0.0)) < 1e-12);
}

TEST_CASE("invalid filter specs are rejected") {
  CHECK_THROWS_AS(design_filter(FilterSpec::lowpass(500.0, 1000.0)), exo::InvalidSpec);
  CHECK_THROWS_AS(design_filter(FilterSpec::lowpass(0.0, 1000.0)), exo::InvalidSpec);
  CHECK_THROWS_AS(design_filter(FilterSpec::bandpass(300.0, 30.0, 1000.0)), exo::InvalidSpec);
  CHECK_THROWS_AS(design_filter(FilterSpec::bandpass(30.0, 600.0, 1000.0)), exo::InvalidSpec);
  FilterSpec fourth = FilterSpec::lowpass(3.0, 1000.0);
  fourth.order = 4;
  CHECK_THROWS_AS(design_filter(fourth), exo::InvalidSpec);
}

TEST_CASE("impulse responses decay within 10 s") {
  for (const FilterSpec& spec : {FilterSpec::lowpass(3.0, 1000.0), FilterSpec::lowpass(10.0, 1000.0),
                                 FilterSpec::bandpass(30.0, 300.0, 1000.0)}) {
    SosFilter f(design_filter(spec), false);
    double y = f.step(1.0);
    for (int i = 1; i < 10000; ++i) y = f.step(0.0);
    CHECK(std::abs(y) < 1e-9);
  }
}

TEST_CASE("streaming equals batch") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x(4000);
  for (double& v : x) v = noise(rng);
  const EmgChannel ch{"IL_L", 0.4, 1000.0};

  const std::vector<double> batch = process_emg(x, ch);
  EmgProcessor streaming(ch);
  const auto first = streaming.process(std::span(x).first(2000));
  const auto second = streaming.process(std::span(x).subspan(2000));
  for (std::size_t i = 0; i < 2000; ++i) {
    CHECK(first[i] == batch[i]);
    CHECK(second[i] == batch[2000 + i]);
  }
}

TEST_CASE("priming removes the start-up step of a constant signal") {
  SosFilter lp(design_filter(FilterSpec::lowpass(3.0, 1000.0)));
  for (int i = 0; i < 100; ++i) CHECK(lp.step(2.5) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("zero stream gives a zero envelope") {
  const std::vector<double> zeros(3000, 0.0);
  for (double e : process_emg(zeros, {"RA_L", 0.2, 1000.0})) CHECK(e == 0.0);
}

TEST_CASE("100 Hz sinusoid normalizes to one at mvc = 2A/pi") {
  const double amp = 0.35;
  std::vector<double> raw(6000);
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = amp * std::sin(2.0 * pi * 100.0 * i / 1000.0);
  const auto env = process_emg(raw, {"LTpL_R", amp * 2.0 / pi, 1000.0});
  for (std::size_t i = 4000; i < env.size(); ++i) CHECK(std::abs(env[i] - 1.0) < 0.05);
}

TEST_CASE("envelope is homogeneous before clamping") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> x(3000), x2(3000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = noise(rng) + 0.2 * std::sin(2.0 * pi * 80.0 * i / 1000.0);
    x2[i] = 2.0 * x[i];
  }
  const EmgChannel ch{"IL_R", 1.0, 1000.0};
  const auto e1 = process_emg(x, ch);
  const auto e2 = process_emg(x2, ch);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (e1[i] > 0.0 && e2[i] < 1.5) CHECK(e2[i] == doctest::Approx(2.0 * e1[i]).epsilon(1e-9));
  }
}

TEST_CASE("envelopes are non-negative and bounded for arbitrary input") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> x(5000);
  for (double& v : x) v = u(rng) * (u(rng) > 0 ? 1.0 : 0.01);
  for (double e : process_emg(x, {"RA_R", 0.05, 1000.0})) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.5);
  }
}

TEST_CASE("non-finite sample reports its index") {
  EmgProcessor p({"LTpT_L", 1.0, 1000.0});
  p.step(0.1);
  p.step(0.2);
  try {
    p.step(std::nan(""));
    FAIL("expected StreamError");
  } catch (const exo::StreamError& e) {
    CHECK(e.index() == 2);
  }
  CHECK_NOTHROW(p.step(0.3));
}

TEST_CASE("channel with non-positive MVC is rejected") {
  CHECK_THROWS_AS(EmgProcessor({"RA_L", 0.0, 1000.0}), exo::ConfigError);
}

TEST_CASE("activation endpoints and closed form") {
  for (double shape : {-3.0, -1.7, -0.2}) {
    CHECK(excitation_to_activation(0.0, shape) == doctest::Approx(0.0));
    CHECK(excitation_to_activation(1.0, shape) == doctest::Approx(1.0));
  }
  // (e^{-1.5} - 1) / (e^{-3} - 1), evaluated independently with Python's math.expm1.
  CHECK(excitation_to_activation(0.5, -3.0) == doctest::Approx(0.8175744761936438).epsilon(1e-14));
  CHECK(excitation_to_activation(0.3, -1.0) == doctest::Approx(0.41001953772646843).epsilon(1e-14));
  CHECK(excitation_to_activation(1.7, -2.0) == 1.0);
  CHECK(excitation_to_activation(-0.2, -2.0) == 0.0);
}

TEST_CASE("activation tends to identity as the shape goes to zero") {
  for (double u = 0.0; u <= 1.0; u += 0.05) {
    CHECK(excitation_to_activation(u, 0.0) == doctest::Approx(u));
    CHECK(std::abs(excitation_to_activation(u, -1e-7) - u) < 1e-6);
  }
  CHECK_THROWS_AS(excitation_to_activation(0.5, 0.5), exo::InvalidSpec);
  CHECK_THROWS_AS(excitation_to_activation(0.5, -3.5), exo::InvalidSpec);
}

TEST_CASE("activation is monotone in excitation for every shape") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shape_d(-3.0, -1e-9), u_d(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double shape = shape_d(rng);
    double u1 = u_d(rng), u2 = u_d(rng);
    if (u1 > u2) std::swap(u1, u2);
    CHECK(excitation_to_activation(u1, shape) <= excitation_to_activation(u2, shape));
  }
}

TEST_CASE("EMG to MTU mapping follows the trunk table") {
  const std::vector<std::string> groups = {"rectus_abdominis", "external_oblique", "internal_oblique",
                                           "multifidus", "psoas_major", "rectus_abdominis"};
  const std::vector<Side> sides = {Side::left, Side::left, Side::left,
                                   Side::left, Side::left, Side::right};
  const auto map = build_excitation_map(EmgMtuMapping::trunk_default(), groups, sides);

  std::vector<std::optional<double>> env(kNumChannels, 0.0);
  env[channel_index(EmgMuscle::RA, Side::left)] = 0.3;
  env[channel_index(EmgMuscle::RA, Side::right)] = 0.1;
  env[channel_index(EmgMuscle::LTpL, Side::left)] = 0.6;
  const auto out = map_emg_to_mtus(env, map);
  CHECK(out.excitation[0] == 0.3);
  CHECK(out.excitation[1] == 0.3);
  CHECK(out.excitation[2] == 0.3);
  CHECK(out.excitation[3] == 0.6);
  CHECK(out.excitation[4] == 0.0);
  CHECK(out.passive_only[4]);
  CHECK_FALSE(out.passive_only[0]);
  CHECK(out.excitation[5] == 0.1);
}

TEST_CASE("mapping errors") {
  EmgMtuMapping dup = EmgMtuMapping::trunk_default();
  dup.rows[1].groups.push_back("multifidus");
  const std::vector<std::string> groups = {"multifidus"};
  const std::vector<Side> sides = {Side::left};
  CHECK_THROWS_AS(build_excitation_map(dup, groups, sides), exo::ConfigError);

  const auto map = build_excitation_map(EmgMtuMapping::trunk_default(), groups, sides);
  const std::vector<std::optional<double>> empty(kNumChannels);
  CHECK_THROWS_AS(map_emg_to_mtus(empty, map), exo::DataError);
  std::vector<std::optional<double>> partial(kNumChannels);
  partial[channel_index(EmgMuscle::RA, Side::left)] = 0.2;
  CHECK_THROWS_AS(map_emg_to_mtus(partial, map), exo::DataError);
}

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "exo/error.hpp"
#include "exo/io/config.hpp"
#include "exo/io/csv.hpp"
#include "exo/io/model_file.hpp"
#include "exo/io/records.hpp"
#include "exo/rng.hpp"

namespace fs = std::filesystem;
using namespace exo;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "exo_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

io::CalibratedModelFile sample_model() {
  auto m = model::MskModel::build(71.3, -1.2);
  auto p = m.parameters();
  p[3].max_isometric_force *= 1.37;
  m.set_parameters(p);
  io::CalibrationInfo info{123.25, 4567.5, 1000, true, 9, {"a", "b"}, {0.1, 1.0 / 3.0}};
  return {io::kModelFormatVersion, "S07", 71.3, std::move(m), info};
}

}  // namespace

TEST_CASE("shortest double formatting round-trips exactly") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-300.0, 300.0));
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(15.0) == "15");
  CHECK(std::isnan(io::parse_double(io::format_double(std::nan("")))));
  CHECK_THROWS_AS(io::parse_double("1.5x"), DataError);
  CHECK_THROWS_AS(io::parse_double(""), DataError);
}

TEST_CASE("CSV parsing") {
  std::istringstream ok("# comment\na,b\n1,2\n3,4\n");
  const auto t = io::parse_csv(ok);
  CHECK(t.numeric("b") == std::vector<double>{2, 4});
  CHECK_FALSE(t.find("c").has_value());
  CHECK_THROWS_AS(t.numeric("c"), DataError);
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(io::parse_csv(ragged), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(io::parse_csv(empty), DataError);
}

TEST_CASE("model file round trip is byte-identical and restores the model") {
  const auto original = sample_model();
  const fs::path p1 = scratch("m1.json"), p2 = scratch("m2.json");
  io::save_model(p1, original);
  const auto loaded = io::load_model(p1);
  io::save_model(p2, loaded);
  CHECK(slurp(p1) == slurp(p2));

  CHECK(loaded.subject_id == "S07");
  CHECK(loaded.calibration.variables[1] == 1.0 / 3.0);
  CHECK(loaded.model.activation_shape() == -1.2);
  auto wa = original.model.make_workspace();
  auto wb = loaded.model.make_workspace();
  const signal::ChannelArray env = {0.1, 0.1, 0.4, 0.5, 0.3, 0.2, 0.6, 0.3};
  for (double angle : {-0.3, 0.0, 0.4, 1.2, 1.7}) {
    const auto a = original.model.evaluate(env, angle, 0.2, 100.0, wa);
    const auto b = loaded.model.evaluate(env, angle, 0.2, 100.0, wb);
    CHECK(a.m_total == b.m_total);
    CHECK(a.compression == b.compression);
  }
}

TEST_CASE("model file integrity checks") {
  const std::string text = io::serialize(sample_model());
  std::string tampered = text;
  const auto pos = tampered.find("\"f_max_n\": ");
  REQUIRE(pos != std::string::npos);
  tampered.insert(pos + 11, "1");
  CHECK_THROWS_AS(io::deserialize(tampered), DataError);

  std::string versionless = text;
  versionless.replace(versionless.find("format_version"), 14, "format_vershun");
  CHECK_THROWS_AS(io::deserialize(versionless), DataError);

  std::string future = text;
  future.replace(future.find("\"format_version\": 1"), 19, "\"format_version\": 9");
  CHECK_THROWS_AS(io::deserialize(future), DataError);
  CHECK_THROWS_AS(io::deserialize("{not json"), DataError);
  CHECK_THROWS_AS(io::load_model(scratch("does_not_exist.json")), DataError);
}

TEST_CASE("trial record CSV round trip") {
  plant::TrialRecord r;
  r.subject_id = "S03";
  r.controller = plant::ControllerKind::vsbc;
  r.box_mass = 15.0;
  r.body_mass = 64.7;
  r.n_cycles = 1;
  r.sample_rate = 100.0;
  r.saturated_ticks = 4;
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    r.t.push_back(i / 100.0);
    for (auto* v : {&r.inclination_deg, &r.demand, &r.residual, &r.m_active, &r.m_passive,
                    &r.compression, &r.f_desired, &r.f_measured, &r.emg_sum}) {
      v->push_back(rng.normal() * 100.0);
    }
  }
  const auto p = scratch("record.csv");
  io::write_trial_record(p, r);
  const auto back = io::read_trial_record(p);
  CHECK(back.subject_id == r.subject_id);
  CHECK(back.controller == r.controller);
  CHECK(back.body_mass == r.body_mass);
  CHECK(back.saturated_ticks == 4);
  CHECK(back.t == r.t);
  CHECK(back.compression == r.compression);
  CHECK(back.emg_sum == r.emg_sum);
}

TEST_CASE("binary tick log layout") {
  plant::TickLog log;
  for (int i = 0; i < 3; ++i) {
    plant::TickRow row;
    row.t = i * 0.001;
    row.f_measured = 10.0 + i;
    row.envelopes[7] = 0.5 * i;
    log.rows.push_back(row);
  }
  const auto p = scratch("ticks.bin");
  io::write_tick_log(p, log, io::TickFormat::binary);
  const std::string bytes = slurp(p);
  CHECK(bytes.substr(0, 8) == "EXOTICK1");
  std::uint32_t ncols = 0;
  std::memcpy(&ncols, bytes.data() + 8, 4);
  CHECK(ncols == io::tick_columns().size());

  const auto t = io::read_tick_log_binary(p);
  CHECK(t.columns == io::tick_columns());
  CHECK(t.data[0] == std::vector<double>{0.0, 0.001, 0.002});
  CHECK(t.data[9] == std::vector<double>{10.0, 11.0, 12.0});
  CHECK(t.data.back() == std::vector<double>{0.0, 0.5, 1.0});
  std::size_t header = 8 + 4 + 8;
  for (const auto& c : t.columns) header += 2 + c.size();
  CHECK(bytes.size() == header + 3 * ncols * 8);

  io::write_tick_log(scratch("ticks.csv"), log, io::TickFormat::csv);
  const auto csv = io::read_csv(scratch("ticks.csv"));
  CHECK(csv.header == io::tick_columns());
  CHECK(csv.numeric("f_measured_n") == std::vector<double>{10.0, 11.0, 12.0});
}

TEST_CASE("calibration trial files") {
  io::SubjectConfig subject;
  subject.id = "S01";
  subject.mvc.fill(2.0);

  calibration::TrialStreams s;
  for (int i = 0; i < 9; ++i) {
    s.t.push_back(i / 40.0);
    s.inclination.push_back(0.1 * i);
    s.l5s1_angle.push_back(0.05 * i);
    s.box_y.push_back(i > 3 ? 0.05 : 0.0);
    s.envelopes.push_back({0.1, 0.1, 0.2 * i, 0.2, 0.3, 0.3, 0.4, 0.4});
  }
  s.box_mass = 5.0;
  s.ref_moment = std::vector<double>(9, 12.5);
  const auto p = scratch("trial_env.csv");
  io::write_calibration_trial(p, s);
  const auto back = io::read_calibration_trial(p, subject);
  CHECK(back.box_mass == 5.0);
  CHECK(back.ref_moment.has_value());
  CHECK(back.envelopes[5][2] == doctest::Approx(1.0));
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    CHECK(back.inclination[i] == doctest::Approx(s.inclination[i]).epsilon(1e-14));
  }

  SUBCASE("raw EMG columns are enveloped with the subject MVC and decimated") {
    const auto raw_path = scratch("trial_raw.csv");
    {
      std::ofstream out(raw_path);
      out << "time_s,inclination_deg,l5s1_deg,box_y_m,box_mass_kg";
      for (std::size_t c = 0; c < signal::kNumChannels; ++c) out << ",emg_" << signal::channel_name(c);
      out << "\n";
      for (int k = 0; k <= 4000; ++k) {
        const double t = k / 1000.0;
        out << io::format_double(t) << ",10,5,0,15";
        for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
          out << "," << io::format_double(2.0 * std::sin(2 * std::numbers::pi * 100.0 * t));
        }
        out << "\n";
      }
    }
    const auto r = io::read_calibration_trial(raw_path, subject, 40.0);
    CHECK(r.t.size() == 161);
    CHECK(r.t[1] == doctest::Approx(0.025));
    // A full-scale 100 Hz sine at the MVC amplitude settles near 2/pi of MVC
    // after the bandpass gain.
    CHECK(r.envelopes.back()[0] == doctest::Approx(r.envelopes.back()[5]));
    CHECK(r.envelopes.back()[0] > 0.5);
    CHECK(r.envelopes.back()[0] < 0.7);
  }

  SUBCASE("missing EMG columns are an error") {
    const auto bad = scratch("trial_bad.csv");
    std::ofstream(bad) << "time_s,inclination_deg,l5s1_deg,box_y_m,box_mass_kg\n0,0,0,0,5\n0.025,0,0,0,5\n";
    CHECK_THROWS_AS(io::read_calibration_trial(bad, subject), DataError);
  }
}

TEST_CASE("manifest round trip") {
  std::vector<io::ManifestEntry> e = {
      {"S01_NMBC_15kg", "S01", plant::ControllerKind::nmbc, 15.0, 2, 18446744073709551615ULL, 10,
       "runs/S01_NMBC_15kg.csv", ""},
      {"S01_NOEXO_5kg", "S01", plant::ControllerKind::noexo, 5.0, 0, 7, 10, "runs/S01_NOEXO_5kg.csv",
       "ticks/S01_NOEXO_5kg.bin"}};
  io::write_manifest(scratch("manifest.csv"), e);
  const auto back = io::read_manifest(scratch("manifest.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].seed == 18446744073709551615ULL);
  CHECK(back[0].controller == plant::ControllerKind::nmbc);
  CHECK(back[0].ticks.empty());
  CHECK(back[1].ticks == "ticks/S01_NOEXO_5kg.bin");
}

TEST_CASE("experiment config parsing") {
  const auto c = io::parse_experiment(R"({"seed": 3, "subjects": {"seed": 4, "count": 3},
                                          "nmbc": {"gain": 0.3}, "tick_log": {"format": "binary"}})",
                                      "/base");
  CHECK(c.seed == 3);
  CHECK(c.subjects.count == 3);
  CHECK(c.loop.nmbc.gain == 0.3);
  CHECK(c.cycles == 10);
  CHECK(c.weights == std::vector<double>{5.0, 15.0});
  CHECK(c.controllers.size() == 3);
  CHECK(c.tick_log.format == io::TickFormat::binary);
  CHECK(c.output_dir == fs::path("/base/out"));
  CHECK(c.resolved_models_dir() == fs::path("/base/out/models"));

  const auto again = io::parse_experiment(io::dump_experiment(c));
  CHECK(io::dump_experiment(again) == io::dump_experiment(c));

  CHECK_THROWS_AS(io::parse_experiment(R"({"subjects": {"seed": 1}})"), ConfigError);
  CHECK_THROWS_AS(io::parse_experiment(R"({"seed": 1})"), ConfigError);
  CHECK_THROWS_AS(io::parse_experiment(R"({"seed": 1, "subjects": {"seed": 1}, "nmbc": {"gian": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_experiment(R"({"seed": 1, "subjects": {"seed": 1}, "cycles": "ten"})"),
                  ConfigError);
  CHECK_THROWS_AS(
      io::parse_experiment(R"({"seed": 1, "subjects": {"seed": 1}, "conditions": {"weights_kg": []}})"),
      ConfigError);
  CHECK_THROWS_AS(
      io::parse_experiment(R"({"seed": 1, "subjects": {"seed": 1}, "conditions": {"controllers": ["PID"]}})"),
      ConfigError);
}

TEST_CASE("subject config round trip") {
  const auto cohort = plant::make_cohort({});
  const auto parsed = io::parse_subject(io::dump_subject(cohort[2]));
  CHECK(parsed.id == cohort[2].id);
  CHECK(parsed.anthro.body_mass == cohort[2].anthro.body_mass);
  CHECK(parsed.anthro.trunk_com_distance == cohort[2].anthro.trunk_com_distance);
  CHECK(parsed.mvc == cohort[2].mvc);
  CHECK_THROWS_AS(io::parse_subject(R"({"id": "X", "mvc": {"RA_L": 1}})"), ConfigError);
}

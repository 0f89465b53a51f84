#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "exo/io/csv.hpp"

namespace fs = std::filesystem;
using namespace exo;
using plant::ControllerKind;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

io::ExperimentConfig small_config(const std::string& name, int subjects = 3, int cycles = 1) {
  auto cfg = io::parse_experiment(R"({"seed": 11, "subjects": {"seed": 2024}})");
  cfg.subjects.count = subjects;
  cfg.cycles = cycles;
  cfg.output_dir = fs::temp_directory_path() / "exo_test_cli" / name;
  fs::remove_all(cfg.output_dir);
  return cfg;
}

/// Stand-in calibrated models: each subject's generating model.
void write_truth_models(const io::ExperimentConfig& cfg) {
  for (const auto& s : plant::make_cohort(cfg.subjects)) {
    io::save_model(cli::model_path(cfg, s.id),
                   io::CalibratedModelFile{io::kModelFormatVersion, s.id, s.anthro.body_mass,
                                           plant::subject_model(s), {}});
  }
}

}  // namespace

TEST_CASE("session order keeps exosuit conditions in one block") {
  const auto cfg = small_config("order");
  std::set<std::string> orders;
  for (int i = 1; i <= 10; ++i) {
    const std::string id = "S" + std::to_string(i);
    const auto order = cli::session_order(cfg, id);
    REQUIRE(order.size() == 6);
    std::vector<int> exo_pos;
    std::set<std::pair<int, double>> seen;
    std::string key;
    for (std::size_t k = 0; k < order.size(); ++k) {
      seen.insert({static_cast<int>(order[k].controller), order[k].box_mass});
      if (order[k].controller != ControllerKind::noexo) exo_pos.push_back(static_cast<int>(k));
      key += std::string(plant::controller_name(order[k].controller)) + io::format_double(order[k].box_mass);
    }
    CHECK(seen.size() == 6);
    REQUIRE(exo_pos.size() == 4);
    CHECK(exo_pos.back() - exo_pos.front() == 3);
    orders.insert(key);
    const auto again = cli::session_order(cfg, id);
    for (std::size_t k = 0; k < order.size(); ++k) {
      CHECK(again[k].controller == order[k].controller);
      CHECK(again[k].box_mass == order[k].box_mass);
    }
  }
  CHECK(orders.size() > 1);
}

TEST_CASE("run seeds depend on every part of the condition") {
  const auto a = cli::run_seed(1, "S01", ControllerKind::nmbc, 15.0);
  CHECK(a == cli::run_seed(1, "S01", ControllerKind::nmbc, 15.0));
  CHECK(a != cli::run_seed(2, "S01", ControllerKind::nmbc, 15.0));
  CHECK(a != cli::run_seed(1, "S02", ControllerKind::nmbc, 15.0));
  CHECK(a != cli::run_seed(1, "S01", ControllerKind::vsbc, 15.0));
  CHECK(a != cli::run_seed(1, "S01", ControllerKind::nmbc, 5.0));
}

TEST_CASE("calibrate needs a trial for every weight and is reproducible") {
  auto cfg = small_config("calibrate", 1);
  cli::cmd_synth(cfg);
  const std::string id = "S01";

  cli::CalibrateRequest req;
  req.subject = cli::subject_path(cfg, id);
  req.trials = {cli::trial_path(cfg, id, 5.0)};
  req.model_out = cfg.output_dir / "m1.json";
  req.annealing.max_evals = 400;
  CHECK_THROWS_AS(cli::cmd_calibrate(req), cli::UsageError);

  req.trials.push_back(cli::trial_path(cfg, id, 15.0));
  const auto first = cli::cmd_calibrate(req);
  CHECK_FALSE(first.converged);
  CHECK(first.evaluations == 400);
  CHECK(first.objective <= first.initial_objective);
  CHECK(fs::exists(cfg.output_dir / "S01.trace.csv"));
  const auto trace = io::read_csv(cfg.output_dir / "S01.trace.csv");
  CHECK(trace.header == std::vector<std::string>{"eval_index", "temperature", "objective_best"});

  req.model_out = cfg.output_dir / "m2.json";
  cli::cmd_calibrate(req);
  CHECK(slurp(cfg.output_dir / "m1.json") == slurp(cfg.output_dir / "m2.json"));
}

TEST_CASE("run refuses to start without models and names the subjects") {
  auto cfg = small_config("missing", 2);
  try {
    cli::cmd_run(cfg);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("S01") != std::string::npos);
    CHECK(msg.find("S02") != std::string::npos);
  }
}

TEST_CASE("run writes every condition and report summarizes them") {
  auto cfg = small_config("run", 3, 1);
  cfg.tick_log.enabled = true;
  cfg.tick_log.format = io::TickFormat::binary;
  cfg.tick_log.decimation = 50;
  write_truth_models(cfg);
  const auto manifest = cli::cmd_run(cfg, 2);
  const auto entries = io::read_manifest(manifest);
  CHECK(entries.size() == 18);
  for (const auto& e : entries) {
    CHECK(fs::exists(cfg.output_dir / e.record));
    CHECK(fs::exists(cfg.output_dir / e.ticks));
    if (e.controller == ControllerKind::noexo) {
      const auto r = io::read_trial_record(cfg.output_dir / e.record);
      for (double f : r.f_measured) CHECK(f == 0.0);
      for (double f : r.f_desired) CHECK(f == 0.0);
    }
  }

  const auto rep = cli::cmd_report(manifest);
  CHECK(rep.gaps.empty());
  CHECK(rep.runs.size() == 18);
  CHECK(rep.criteria.size() == 6);
  for (const char* f : {"metrics.csv", "summary.csv", "work_loops.csv", "tracking.csv", "emg.csv",
                        "moments.csv", "compression.csv", "cumulative.csv", "acceptance.csv", "gaps.csv"}) {
    CHECK(fs::exists(rep.directory / f));
  }
  std::map<std::string, std::string> before;
  for (const auto& f : fs::directory_iterator(rep.directory)) before[f.path().filename()] = slurp(f.path());
  cli::cmd_report(manifest);
  for (const auto& [name, bytes] : before) CHECK(slurp(rep.directory / name) == bytes);

  SUBCASE("a partial manifest is reported with gaps") {
    fs::remove(cfg.output_dir / entries[0].record);
    const auto partial = cli::cmd_report(manifest, cfg.output_dir / "partial");
    REQUIRE(partial.gaps.size() == 1);
    CHECK(partial.gaps[0].run_id == entries[0].run_id);
    CHECK(partial.runs.size() == 17);
  }
}

TEST_CASE("report rejects an empty manifest") {
  const auto dir = fs::temp_directory_path() / "exo_test_cli" / "empty";
  fs::create_directories(dir);
  io::write_manifest(dir / "manifest.csv", {});
  CHECK_THROWS_AS(cli::cmd_report(dir / "manifest.csv"), DataError);
}

TEST_CASE("bench") {
  const auto m = model::MskModel::build(70.0, -1.5);
  const auto none = cli::cmd_bench(m, 0);
  CHECK(none.ticks == 0);
  CHECK(none.samples_us.empty());
  const auto some = cli::cmd_bench(m, 500);
  CHECK(some.samples_us.size() == 500);
  CHECK(some.p50_us <= some.p99_us);
  CHECK(some.p99_us <= some.max_us);
  CHECK(some.p50_us > 0.0);

  const auto h = fs::temp_directory_path() / "exo_test_cli" / "hist.csv";
  cli::write_histogram(h, some);
  const auto t = io::read_csv(h);
  double total = 0.0;
  for (double c : t.numeric("count")) total += c;
  CHECK(total == 500.0);
  cli::write_histogram(h, none);
  CHECK(io::read_csv(h).rows.empty());
}

TEST_CASE("output directory environment override") {
  auto cfg = small_config("env");
  setenv(cli::kOutputEnv, "/tmp/elsewhere", 1);
  cli::apply_env(cfg);
  unsetenv(cli::kOutputEnv);
  CHECK(cfg.output_dir == fs::path("/tmp/elsewhere"));
}

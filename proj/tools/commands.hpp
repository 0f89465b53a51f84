#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "exo/analysis/cohort.hpp"
#include "exo/error.hpp"
#include "exo/io/config.hpp"
#include "exo/io/model_file.hpp"
#include "exo/io/records.hpp"

namespace exo::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNonConvergence = 3 };

/// Bad or missing command-line input.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kOutputEnv = "EXO_OUTPUT_DIR";

/// Applies the output-directory environment override, if set.
void apply_env(io::ExperimentConfig& cfg);

std::uint64_t run_seed(std::uint64_t base, const std::string& subject, plant::ControllerKind kind,
                       double box_mass);

/// Session order for one subject: the unassisted block and the exosuit
/// block in random order, conditions shuffled within each block.
struct Condition {
  plant::ControllerKind controller;
  double box_mass;
};
std::vector<Condition> session_order(const io::ExperimentConfig& cfg, const std::string& subject);

std::string run_id(const std::string& subject, plant::ControllerKind kind, double box_mass);

// synth ---------------------------------------------------------------------

struct SynthOutput {
  std::vector<std::filesystem::path> subject_files;
  std::vector<std::filesystem::path> trial_files;
};

/// Subject configs and unassisted calibration trials for the whole cohort,
/// under <output>/subjects and <output>/trials.
SynthOutput cmd_synth(const io::ExperimentConfig& cfg);

std::filesystem::path subject_path(const io::ExperimentConfig& cfg, const std::string& id);
std::filesystem::path trial_path(const io::ExperimentConfig& cfg, const std::string& id, double box_mass);
std::filesystem::path model_path(const io::ExperimentConfig& cfg, const std::string& id);

// calibrate -----------------------------------------------------------------

struct CalibrateRequest {
  std::filesystem::path subject;
  std::vector<std::filesystem::path> trials;
  std::filesystem::path model_out;
  std::filesystem::path trace_out;  ///< empty: next to the model file
  std::vector<double> required_weights = {5.0, 15.0};
  calibration::CalibrationBounds bounds;
  calibration::AnnealingSchedule annealing;
  double initial_shape = -1.5;
  double calibration_rate = 40.0;
  signal::EnvelopeConfig envelope;
};

struct CalibrateOutcome {
  std::string subject_id;
  double objective = 0.0;
  double initial_objective = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Throws UsageError when a required weight has no trial.
CalibrateOutcome cmd_calibrate(const CalibrateRequest& req);

/// Calibrate every cohort subject from the synth outputs.
std::vector<CalibrateOutcome> calibrate_cohort(const io::ExperimentConfig& cfg, int jobs = 1);

// run -----------------------------------------------------------------------

/// Every condition for every subject; returns the manifest path. Throws
/// DataError listing subjects whose model file is missing.
std::filesystem::path cmd_run(const io::ExperimentConfig& cfg, int jobs = 1);

// report --------------------------------------------------------------------

struct Gap {
  std::string run_id;
  std::string reason;
};

struct ReportOutcome {
  std::filesystem::path directory;
  std::vector<analysis::RunMetrics> runs;
  std::vector<analysis::Criterion> criteria;
  std::vector<Gap> gaps;
};

/// Tables and acceptance summary under `out` (default: <manifest dir>/report).
ReportOutcome cmd_report(const std::filesystem::path& manifest, std::filesystem::path out = {});

// bench ---------------------------------------------------------------------

struct BenchResult {
  long ticks = 0;
  double p50_us = 0.0;
  double p99_us = 0.0;
  double max_us = 0.0;
  std::vector<double> samples_us;
};

/// Times the controller tick path (envelopes, model, NMBC) on a synthetic
/// lifting stream.
BenchResult cmd_bench(const model::MskModel& model, long ticks, std::uint64_t seed = 1);

/// Log-spaced histogram: bin_lo_us, bin_hi_us, count.
void write_histogram(const std::filesystem::path& path, const BenchResult& r);

}  // namespace exo::cli

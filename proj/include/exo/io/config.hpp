#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "exo/calibration/annealing.hpp"
#include "exo/calibration/objective.hpp"
#include "exo/plant/closed_loop.hpp"
#include "exo/plant/kinematics.hpp"
#include "exo/plant/subject.hpp"

namespace exo::io {

enum class TickFormat { csv, binary };

struct TickLogOptions {
  bool enabled = false;
  TickFormat format = TickFormat::csv;
  int decimation = 10;
};

/// One experiment: cohort, conditions, plant and controller constants.
struct ExperimentConfig {
  plant::CohortSpec subjects;
  std::vector<double> weights = {5.0, 15.0};
  std::vector<plant::ControllerKind> controllers = {
      plant::ControllerKind::noexo, plant::ControllerKind::nmbc, plant::ControllerKind::vsbc};
  int cycles = 10;
  std::uint64_t seed = 1;
  plant::LiftingCycleSpec kinematics;
  plant::ClosedLoopConfig loop;
  calibration::CalibrationBounds bounds;
  calibration::AnnealingSchedule annealing;
  int calibration_cycles = 1;
  double calibration_rate = 40.0;  ///< Hz of the calibration trial files
  double initial_shape = -1.5;
  TickLogOptions tick_log;
  std::filesystem::path output_dir = "out";
  std::filesystem::path models_dir;  ///< empty: <output_dir>/models

  std::filesystem::path resolved_models_dir() const;
  void validate() const;
};

/// Reads JSON; missing keys keep their defaults, unknown keys and a missing
/// `seed` or `subjects.seed` throw ConfigError. Relative directories are
/// resolved against the config file's directory.
ExperimentConfig load_experiment(const std::filesystem::path& path);
ExperimentConfig parse_experiment(const std::string& text,
                                  const std::filesystem::path& base = {});
std::string dump_experiment(const ExperimentConfig& cfg);

/// Measured per-subject data a calibration needs.
struct SubjectConfig {
  std::string id;
  calibration::Anthropometry anthro;
  signal::ChannelArray mvc{};
};

SubjectConfig subject_config(const plant::SyntheticSubject& s);
SubjectConfig load_subject(const std::filesystem::path& path);
SubjectConfig parse_subject(const std::string& text);
/// Writes the measured fields, plus the generating constants of a synthetic
/// subject under "synthetic" for reference.
std::string dump_subject(const plant::SyntheticSubject& s);

}  // namespace exo::io

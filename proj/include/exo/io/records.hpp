#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "exo/calibration/annealing.hpp"
#include "exo/calibration/trial.hpp"
#include "exo/io/config.hpp"
#include "exo/plant/closed_loop.hpp"

namespace exo::io {

/// Decimated run record: `# key=value` metadata lines, then CSV columns.
void write_trial_record(const std::filesystem::path& path, const plant::TrialRecord& r);
plant::TrialRecord read_trial_record(const std::filesystem::path& path);

std::vector<std::string> tick_columns();
void write_tick_log(const std::filesystem::path& path, const plant::TickLog& log, TickFormat format);

/// Column-major view of a binary tick log.
struct TickTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  ///< [column][row]
};
TickTable read_tick_log_binary(const std::filesystem::path& path);

/// Calibration trial on one clock. Envelope columns are written as env_<ch>.
void write_calibration_trial(const std::filesystem::path& path,
                             const calibration::TrialStreams& streams);

/// Reads env_<ch> columns as processed envelopes, or emg_<ch> columns as raw
/// EMG that is enveloped at the file's own rate with the subject's MVC and
/// then decimated to `target_rate`. Angles are in degrees on disk.
calibration::TrialStreams read_calibration_trial(const std::filesystem::path& path,
                                                 const SubjectConfig& subject,
                                                 double target_rate = 40.0,
                                                 const signal::EnvelopeConfig& envelope = {});

void write_trace(const std::filesystem::path& path, const std::vector<calibration::TracePoint>& trace);

struct ManifestEntry {
  std::string run_id;
  std::string subject;
  plant::ControllerKind controller = plant::ControllerKind::noexo;
  double box_mass = 0.0;
  int order = 0;  ///< position within the subject's session
  std::uint64_t seed = 0;
  int cycles = 0;
  std::string record;  ///< relative to the manifest's directory
  std::string ticks;   ///< empty when no tick log was kept
};

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace exo::io

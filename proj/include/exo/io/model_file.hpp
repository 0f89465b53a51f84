#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "exo/model/msk_model.hpp"

namespace exo::io {

inline constexpr int kModelFormatVersion = 1;

struct CalibrationInfo {
  double objective = 0.0;
  double initial_objective = 0.0;
  long evaluations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  std::vector<std::string> variable_names;
  std::vector<double> variables;
};

/// Everything needed to rebuild a subject's calibrated trunk model.
struct CalibratedModelFile {
  int version = kModelFormatVersion;
  std::string subject_id;
  double body_mass = 0.0;
  model::MskModel model;
  CalibrationInfo calibration;
};

std::uint64_t fnv1a64(std::string_view bytes);

/// Canonical text form, checksum included.
std::string serialize(const CalibratedModelFile& file);
/// Throws DataError on a missing version, unsupported version, checksum
/// mismatch or malformed content.
CalibratedModelFile deserialize(std::string_view text);

void save_model(const std::filesystem::path& path, const CalibratedModelFile& file);
CalibratedModelFile load_model(const std::filesystem::path& path);

}  // namespace exo::io

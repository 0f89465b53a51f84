#pragma once

#include <span>
#include <string>
#include <vector>

#include "exo/calibration/annealing.hpp"
#include "exo/calibration/trial.hpp"
#include "exo/model/msk_model.hpp"

namespace exo::calibration {

/// Multiplicative ranges around nominal values, plus the range of the
/// activation shape factor.
struct CalibrationBounds {
  double fmax_lo = 0.5, fmax_hi = 2.5;
  double lopt_lo = 0.95, lopt_hi = 1.05;
  double lts_lo = 0.95, lts_hi = 1.05;
  double shape_lo = -3.0, shape_hi = 0.0;

  void validate() const;
};

/// Muscle groups sharing one multiplier per parameter class.
struct CalibrationGroup {
  std::string name;
  std::vector<std::string> members;
};

/// Free-variable layout: f_max multipliers for every group, then l_opt
/// multipliers, then tendon slack multipliers, then the activation shape.
class CalibrationLayout {
 public:
  /// One group per mapping row, one per passive-only group.
  static CalibrationLayout from_mapping(const signal::EmgMtuMapping& mapping,
                                        const model::Roster& roster);

  std::size_t num_groups() const { return groups_.size(); }
  std::size_t num_variables() const { return 3 * groups_.size() + 1; }
  std::size_t fmax_index(std::size_t g) const { return g; }
  std::size_t lopt_index(std::size_t g) const { return groups_.size() + g; }
  std::size_t lts_index(std::size_t g) const { return 2 * groups_.size() + g; }
  std::size_t shape_index() const { return 3 * groups_.size(); }

  const std::vector<CalibrationGroup>& groups() const { return groups_; }
  const std::vector<std::size_t>& mtu_group() const { return mtu_group_; }
  std::vector<std::size_t> members_of(std::size_t g) const;

  std::vector<double> lower(const CalibrationBounds& b) const;
  std::vector<double> upper(const CalibrationBounds& b) const;
  std::vector<double> identity(double shape) const;
  std::vector<std::string> variable_names() const;

  std::vector<muscle::MtuParameters> apply(std::span<const double> x,
                                           std::span<const muscle::MtuParameters> nominal) const;

 private:
  std::vector<CalibrationGroup> groups_;
  std::vector<std::size_t> mtu_group_;
};

/// Summed squared difference between reference and model moments over all
/// samples of all trials. Out-of-bounds points and singular fiber states
/// evaluate to +inf. Keeps per-group moment contributions and only redoes
/// the groups whose length parameters changed since the last call.
class MomentObjective {
 public:
  MomentObjective(const model::MskModel& model, std::vector<muscle::MtuParameters> nominal,
                  std::vector<CalibrationTrial> trials, CalibrationLayout layout,
                  CalibrationBounds bounds);

  double operator()(std::span<const double> x);

  /// Reference-free evaluation of the model moment at every sample.
  std::vector<double> model_moments(std::span<const double> x);

  const CalibrationLayout& layout() const { return layout_; }
  std::size_t num_samples() const { return samples_.size(); }
  long evaluations() const { return evaluations_; }

 private:
  bool in_bounds(std::span<const double> x) const;
  bool refresh_group(std::size_t g, double lopt, double lts);
  void refresh_shape(double shape);
  void refresh(std::span<const double> x);

  const model::MskModel& model_;
  std::vector<muscle::MtuParameters> nominal_;
  CalibrationLayout layout_;
  CalibrationBounds bounds_;
  std::vector<CalibrationSample> samples_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<double> lower_, upper_;

  // Surrogate output per sample, row-major [sample][mtu].
  std::vector<double> length_, arm_;

  struct GroupCache {
    double lopt = 0.0, lts = 0.0;
    bool valid = false;
    bool singular = false;
    std::vector<double> active;   ///< [sample][channel] moment at unit activation
    std::vector<double> passive;  ///< [sample]
    std::vector<double> moment;   ///< [sample] at the cached shape, unit f_max scale
    double moment_shape = 0.0;
    bool moment_valid = false;
  };
  std::vector<GroupCache> cache_;
  std::vector<ChannelArray> activations_;
  double shape_ = 1.0;  // impossible value forces first refresh
  long evaluations_ = 0;
};

struct CalibrationResult {
  std::vector<double> x;
  std::vector<muscle::MtuParameters> parameters;
  double activation_shape = 0.0;
  AnnealingResult annealing;
};

/// Tune group multipliers and the activation shape against `trials`,
/// starting from the model's current parameters. Throws DataError on an
/// empty trial list.
CalibrationResult calibrate(const model::MskModel& model, std::vector<CalibrationTrial> trials,
                            const CalibrationBounds& bounds, const AnnealingSchedule& schedule);

}  // namespace exo::calibration

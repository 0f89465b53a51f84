#include "exo/calibration/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exo/error.hpp"

namespace exo::calibration {

namespace {

constexpr const char* kRowNames[] = {"RA", "IL", "LTpL", "LTpT"};

}  // namespace

void CalibrationBounds::validate() const {
  if (!(fmax_lo > 0.0 && fmax_lo < fmax_hi) || !(lopt_lo > 0.0 && lopt_lo < lopt_hi) ||
      !(lts_lo > 0.0 && lts_lo < lts_hi)) {
    throw ConfigError("calibration bounds must be positive with lower < upper");
  }
  if (!(shape_lo >= -3.0 && shape_lo < shape_hi && shape_hi <= 0.0)) {
    throw ConfigError("activation shape bounds must lie in [-3, 0]");
  }
}

CalibrationLayout CalibrationLayout::from_mapping(const signal::EmgMtuMapping& mapping,
                                                  const model::Roster& roster) {
  CalibrationLayout layout;
  for (const auto& row : mapping.rows) {
    layout.groups_.push_back({kRowNames[static_cast<int>(row.source)], row.groups});
  }
  for (const auto& g : mapping.passive_groups) layout.groups_.push_back({g, {g}});

  layout.mtu_group_.resize(roster.size());
  for (std::size_t i = 0; i < roster.size(); ++i) {
    bool found = false;
    for (std::size_t g = 0; g < layout.groups_.size() && !found; ++g) {
      const auto& m = layout.groups_[g].members;
      if (std::find(m.begin(), m.end(), roster.mtus[i].group) != m.end()) {
        layout.mtu_group_[i] = g;
        found = true;
      }
    }
    if (!found) throw ConfigError("MTU group '" + roster.mtus[i].group + "' has no calibration group");
  }
  return layout;
}

std::vector<std::size_t> CalibrationLayout::members_of(std::size_t g) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mtu_group_.size(); ++i) {
    if (mtu_group_[i] == g) out.push_back(i);
  }
  return out;
}

std::vector<double> CalibrationLayout::lower(const CalibrationBounds& b) const {
  std::vector<double> v(num_variables());
  for (std::size_t g = 0; g < num_groups(); ++g) {
    v[fmax_index(g)] = b.fmax_lo;
    v[lopt_index(g)] = b.lopt_lo;
    v[lts_index(g)] = b.lts_lo;
  }
  v[shape_index()] = b.shape_lo;
  return v;
}

std::vector<double> CalibrationLayout::upper(const CalibrationBounds& b) const {
  std::vector<double> v(num_variables());
  for (std::size_t g = 0; g < num_groups(); ++g) {
    v[fmax_index(g)] = b.fmax_hi;
    v[lopt_index(g)] = b.lopt_hi;
    v[lts_index(g)] = b.lts_hi;
  }
  v[shape_index()] = b.shape_hi;
  return v;
}

std::vector<double> CalibrationLayout::identity(double shape) const {
  std::vector<double> v(num_variables(), 1.0);
  v[shape_index()] = shape;
  return v;
}

std::vector<std::string> CalibrationLayout::variable_names() const {
  std::vector<std::string> names(num_variables());
  for (std::size_t g = 0; g < num_groups(); ++g) {
    names[fmax_index(g)] = "fmax_scale." + groups_[g].name;
    names[lopt_index(g)] = "lopt_scale." + groups_[g].name;
    names[lts_index(g)] = "lts_scale." + groups_[g].name;
  }
  names[shape_index()] = "activation_shape";
  return names;
}

std::vector<muscle::MtuParameters> CalibrationLayout::apply(
    std::span<const double> x, std::span<const muscle::MtuParameters> nominal) const {
  if (x.size() != num_variables()) throw ConfigError("calibration vector has the wrong size");
  if (nominal.size() != mtu_group_.size()) throw ConfigError("parameter count does not match layout");
  std::vector<muscle::MtuParameters> out(nominal.begin(), nominal.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t g = mtu_group_[i];
    out[i].max_isometric_force *= x[fmax_index(g)];
    out[i].optimal_fiber_length *= x[lopt_index(g)];
    out[i].tendon_slack_length *= x[lts_index(g)];
  }
  return out;
}

MomentObjective::MomentObjective(const model::MskModel& model,
                                 std::vector<muscle::MtuParameters> nominal,
                                 std::vector<CalibrationTrial> trials, CalibrationLayout layout,
                                 CalibrationBounds bounds)
    : model_(model), nominal_(std::move(nominal)), layout_(std::move(layout)), bounds_(bounds) {
  if (trials.empty()) throw DataError("calibration needs at least one trial");
  bounds_.validate();
  if (nominal_.size() != model_.size()) throw ConfigError("parameter count does not match model");
  for (auto& t : trials) {
    if (t.samples.empty()) throw DataError("trial '" + t.name + "' has no samples");
    for (const auto& s : t.samples) samples_.push_back(s);
  }
  lower_ = layout_.lower(bounds_);
  upper_ = layout_.upper(bounds_);
  members_.resize(layout_.num_groups());
  for (std::size_t g = 0; g < layout_.num_groups(); ++g) members_[g] = layout_.members_of(g);

  const std::size_t n = model_.size();
  const std::size_t ns = samples_.size();
  length_.resize(ns * n);
  arm_.resize(ns * n);
  for (std::size_t s = 0; s < ns; ++s) {
    model_.surrogate().eval(samples_[s].angle, std::span<double>(length_).subspan(s * n, n),
                            std::span<double>(arm_).subspan(s * n, n));
  }
  cache_.resize(layout_.num_groups());
  for (auto& c : cache_) {
    c.active.assign(ns * signal::kNumChannels, 0.0);
    c.passive.assign(ns, 0.0);
    c.moment.assign(ns, 0.0);
  }
  activations_.resize(ns);
}

bool MomentObjective::in_bounds(std::span<const double> x) const {
  if (x.size() != lower_.size()) throw ConfigError("calibration vector has the wrong size");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  }
  return true;
}

bool MomentObjective::refresh_group(std::size_t g, double lopt, double lts) {
  GroupCache& c = cache_[g];
  if (c.valid && c.lopt == lopt && c.lts == lts) return false;
  c.lopt = lopt;
  c.lts = lts;
  c.valid = true;
  c.singular = false;
  c.moment_valid = false;
  std::fill(c.active.begin(), c.active.end(), 0.0);
  std::fill(c.passive.begin(), c.passive.end(), 0.0);

  const std::size_t n = model_.size();
  const auto& map = model_.excitation_map();
  for (std::size_t i : members_[g]) {
    muscle::MtuParameters p = nominal_[i];
    p.optimal_fiber_length *= lopt;
    p.tendon_slack_length *= lts;
    const auto ch = map.channel[i];
    for (std::size_t s = 0; s < samples_.size(); ++s) {
      const double arm = arm_[s * n + i];
      muscle::ForceBasis b;
      try {
        b = muscle::force_basis(length_[s * n + i], -arm * samples_[s].angular_velocity, p,
                                model_.curves());
      } catch (const SingularConfiguration&) {
        c.singular = true;
        return true;
      }
      c.passive[s] -= b.passive * arm;
      if (ch) c.active[s * signal::kNumChannels + *ch] -= b.active_unit * arm;
    }
  }
  return true;
}

void MomentObjective::refresh_shape(double shape) {
  if (shape == shape_) return;
  shape_ = shape;
  for (std::size_t s = 0; s < samples_.size(); ++s) {
    for (std::size_t ch = 0; ch < signal::kNumChannels; ++ch) {
      activations_[s][ch] = signal::excitation_to_activation(samples_[s].envelopes[ch], shape);
    }
  }
}

void MomentObjective::refresh(std::span<const double> x) {
  refresh_shape(x[layout_.shape_index()]);
  for (std::size_t g = 0; g < cache_.size(); ++g) {
    refresh_group(g, x[layout_.lopt_index(g)], x[layout_.lts_index(g)]);
    GroupCache& c = cache_[g];
    if (c.singular || (c.moment_valid && c.moment_shape == shape_)) continue;
    for (std::size_t s = 0; s < samples_.size(); ++s) {
      double m = c.passive[s];
      const double* u = &c.active[s * signal::kNumChannels];
      for (std::size_t ch = 0; ch < signal::kNumChannels; ++ch) m += activations_[s][ch] * u[ch];
      c.moment[s] = m;
    }
    c.moment_shape = shape_;
    c.moment_valid = true;
  }
}

std::vector<double> MomentObjective::model_moments(std::span<const double> x) {
  if (!in_bounds(x)) throw ConfigError("calibration vector outside bounds");
  refresh(x);
  std::vector<double> m(samples_.size(), 0.0);
  for (std::size_t g = 0; g < cache_.size(); ++g) {
    if (cache_[g].singular) throw SingularConfiguration("fiber length collapsed during calibration");
    const double scale = x[layout_.fmax_index(g)];
    for (std::size_t s = 0; s < m.size(); ++s) m[s] += scale * cache_[g].moment[s];
  }
  return m;
}

double MomentObjective::operator()(std::span<const double> x) {
  ++evaluations_;
  if (!in_bounds(x)) return std::numeric_limits<double>::infinity();
  refresh(x);
  for (const auto& c : cache_) {
    if (c.singular) return std::numeric_limits<double>::infinity();
  }
  double sse = 0.0;
  for (std::size_t s = 0; s < samples_.size(); ++s) {
    double m = 0.0;
    for (std::size_t g = 0; g < cache_.size(); ++g) m += x[layout_.fmax_index(g)] * cache_[g].moment[s];
    const double e = samples_[s].ref_moment - m;
    sse += e * e;
  }
  return sse;
}

CalibrationResult calibrate(const model::MskModel& model, std::vector<CalibrationTrial> trials,
                            const CalibrationBounds& bounds, const AnnealingSchedule& schedule) {
  auto layout = CalibrationLayout::from_mapping(signal::EmgMtuMapping::trunk_default(), model.roster());
  MomentObjective objective(model, model.parameters(), std::move(trials), layout, bounds);
  auto x0 = layout.identity(std::clamp(model.activation_shape(), bounds.shape_lo, bounds.shape_hi));
  const auto lo = layout.lower(bounds), hi = layout.upper(bounds);
  for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = std::clamp(x0[i], lo[i], hi[i]);

  CalibrationResult out;
  out.annealing = simulated_annealing([&](std::span<const double> x) { return objective(x); }, x0,
                                      lo, hi, schedule);
  out.x = out.annealing.x;
  out.parameters = layout.apply(out.x, model.parameters());
  out.activation_shape = out.x[layout.shape_index()];
  return out;
}

}  // namespace exo::calibration

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "exo/signal/butterworth.hpp"

namespace exo::signal {

/// Recorded trunk muscles; each is measured on both sides.
enum class EmgMuscle { RA, IL, LTpL, LTpT };
enum class Side { left, right };

inline constexpr std::size_t kNumChannels = 8;

/// Channel index layout: muscle-major, left before right (RA_L, RA_R, IL_L, ...).
constexpr std::size_t channel_index(EmgMuscle m, Side s) {
  return static_cast<std::size_t>(m) * 2 + (s == Side::right ? 1 : 0);
}
std::string_view channel_name(std::size_t index);
std::optional<std::size_t> channel_from_name(std::string_view name);

using ChannelArray = std::array<double, kNumChannels>;

struct EmgChannel {
  std::string name;
  double mvc_max = 1.0;
  double sample_rate_hz = 1000.0;

  void validate() const;
};

/// Envelope processing constants.
struct EnvelopeConfig {
  double bandpass_low_hz = 30.0;
  double bandpass_high_hz = 300.0;
  double lowpass_hz = 3.0;
  double max_envelope = 1.5;
};

/// Per-channel linear envelope: bandpass, full-wave rectify, lowpass, then
/// divide by the MVC maximum. One sample in, one sample out.
class EmgProcessor {
 public:
  explicit EmgProcessor(const EmgChannel& channel, const EnvelopeConfig& cfg = {});

  /// Throws StreamError carrying the sample index on a non-finite input; the
  /// filter state is left untouched in that case.
  double step(double raw);
  std::vector<double> process(std::span<const double> raw);

  std::size_t samples_seen() const { return index_; }
  const EmgChannel& channel() const { return channel_; }

 private:
  EmgChannel channel_;
  EnvelopeConfig cfg_;
  SosFilter bandpass_;
  SosFilter lowpass_;
  std::size_t index_ = 0;
};

/// Batch form of EmgProcessor over a whole stream.
std::vector<double> process_emg(std::span<const double> raw, const EmgChannel& channel,
                                const EnvelopeConfig& cfg = {});

/// Exponential EMG-to-activation nonlinearity a = (e^{A u} - 1) / (e^{A} - 1).
/// `u` is clamped to [0, 1]; `shape` must lie in [-3, 0] and 0 selects the
/// identity limit.
double excitation_to_activation(double u, double shape);

/// One row of the EMG-to-MTU table: a measured muscle drives the listed MTU
/// groups on the same side.
struct MappingRow {
  EmgMuscle source;
  std::vector<std::string> groups;
};

struct EmgMtuMapping {
  std::vector<MappingRow> rows;
  std::vector<std::string> passive_groups;

  /// The trunk table: abdominals from RA, lumbar iliocostalis from IL,
  /// lumbar longissimus and multifidus from LTpL, thoracic longissimus and
  /// iliocostalis from LTpT. Latissimus dorsi, quadratus lumborum and psoas
  /// major are passive-only.
  static EmgMtuMapping trunk_default();
};

/// Resolved per-MTU channel assignment. `channel[i]` is empty for
/// passive-only MTUs.
struct ExcitationMap {
  std::vector<std::optional<std::size_t>> channel;

  bool passive_only(std::size_t mtu) const { return !channel[mtu].has_value(); }
  std::size_t size() const { return channel.size(); }

  /// Fill per-MTU excitation from channel values; passive-only MTUs get 0.
  void apply(const ChannelArray& channel_values, std::span<double> excitation) const;
};

/// Build the assignment for a roster given as per-MTU (group, side). Throws
/// ConfigError if a group appears in two rows.
ExcitationMap build_excitation_map(const EmgMtuMapping& mapping,
                                   std::span<const std::string> mtu_groups,
                                   std::span<const Side> mtu_sides);

struct MtuExcitation {
  std::vector<double> excitation;
  std::vector<bool> passive_only;
};

/// Distribute channel envelopes to MTUs. `envelopes` holds one optional
/// value per channel; a driven MTU whose channel is missing is a DataError.
MtuExcitation map_emg_to_mtus(std::span<const std::optional<double>> envelopes,
                              const ExcitationMap& map);

}  // namespace exo::signal

#include "exo/signal/emg.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "exo/error.hpp"

namespace exo::signal {

namespace {
constexpr std::array<std::string_view, kNumChannels> kChannelNames = {
    "RA_L", "RA_R", "IL_L", "IL_R", "LTpL_L", "LTpL_R", "LTpT_L", "LTpT_R"};
}

std::string_view channel_name(std::size_t index) { return kChannelNames.at(index); }

std::optional<std::size_t> channel_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kChannelNames.size(); ++i) {
    if (kChannelNames[i] == name) return i;
  }
  return std::nullopt;
}

void EmgChannel::validate() const {
  if (!(mvc_max > 0.0) || !std::isfinite(mvc_max)) {
    throw ConfigError("channel " + name + ": mvc_max must be positive");
  }
  if (!(sample_rate_hz > 0.0)) throw ConfigError("channel " + name + ": bad sample rate");
}

EmgProcessor::EmgProcessor(const EmgChannel& channel, const EnvelopeConfig& cfg)
    : channel_(channel),
      cfg_(cfg),
      bandpass_(design_filter(FilterSpec::bandpass(cfg.bandpass_low_hz, cfg.bandpass_high_hz,
                                                   channel.sample_rate_hz))),
      lowpass_(design_filter(FilterSpec::lowpass(cfg.lowpass_hz, channel.sample_rate_hz))) {
  channel_.validate();
}

double EmgProcessor::step(double raw) {
  if (!std::isfinite(raw)) throw StreamError("non-finite EMG sample on " + channel_.name, index_);
  ++index_;
  const double rectified = std::abs(bandpass_.step(raw));
  const double env = lowpass_.step(rectified) / channel_.mvc_max;
  // The lowpass undershoots slightly after sharp drops.
  return std::clamp(env, 0.0, cfg_.max_envelope);
}

std::vector<double> EmgProcessor::process(std::span<const double> raw) {
  std::vector<double> out;
  out.reserve(raw.size());
  for (double x : raw) out.push_back(step(x));
  return out;
}

std::vector<double> process_emg(std::span<const double> raw, const EmgChannel& channel,
                                const EnvelopeConfig& cfg) {
  EmgProcessor p(channel, cfg);
  return p.process(raw);
}

double excitation_to_activation(double u, double shape) {
  if (!(shape >= -3.0 && shape <= 0.0)) {
    throw InvalidSpec("activation shape must lie in [-3, 0]");
  }
  u = std::clamp(u, 0.0, 1.0);
  if (shape == 0.0) return u;
  return std::expm1(shape * u) / std::expm1(shape);
}

EmgMtuMapping EmgMtuMapping::trunk_default() {
  return EmgMtuMapping{
      {
          {EmgMuscle::RA, {"rectus_abdominis", "external_oblique", "internal_oblique"}},
          {EmgMuscle::IL, {"iliocostalis_lumborum"}},
          {EmgMuscle::LTpL, {"longissimus_lumborum", "multifidus"}},
          {EmgMuscle::LTpT, {"longissimus_thoracis", "iliocostalis_thoracis"}},
      },
      {"latissimus_dorsi", "quadratus_lumborum", "psoas_major"},
  };
}

void ExcitationMap::apply(const ChannelArray& channel_values, std::span<double> excitation) const {
  for (std::size_t i = 0; i < channel.size(); ++i) {
    excitation[i] = channel[i] ? channel_values[*channel[i]] : 0.0;
  }
}

ExcitationMap build_excitation_map(const EmgMtuMapping& mapping,
                                   std::span<const std::string> mtu_groups,
                                   std::span<const Side> mtu_sides) {
  if (mtu_groups.size() != mtu_sides.size()) {
    throw ConfigError("roster group and side lists differ in length");
  }
  std::map<std::string, EmgMuscle, std::less<>> source;
  for (const MappingRow& row : mapping.rows) {
    for (const std::string& g : row.groups) {
      if (!source.emplace(g, row.source).second) {
        throw ConfigError("MTU group '" + g + "' appears in more than one mapping row");
      }
    }
  }
  for (const std::string& g : mapping.passive_groups) {
    if (source.contains(g)) {
      throw ConfigError("MTU group '" + g + "' is both EMG-driven and passive-only");
    }
  }
  ExcitationMap map;
  map.channel.resize(mtu_groups.size());
  for (std::size_t i = 0; i < mtu_groups.size(); ++i) {
    auto it = source.find(mtu_groups[i]);
    if (it != source.end()) map.channel[i] = channel_index(it->second, mtu_sides[i]);
  }
  return map;
}

MtuExcitation map_emg_to_mtus(std::span<const std::optional<double>> envelopes,
                              const ExcitationMap& map) {
  if (envelopes.size() != kNumChannels ||
      std::none_of(envelopes.begin(), envelopes.end(), [](const auto& e) { return e.has_value(); })) {
    throw DataError("empty envelope set");
  }
  MtuExcitation out;
  out.excitation.assign(map.size(), 0.0);
  out.passive_only.assign(map.size(), false);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.channel[i]) {
      out.passive_only[i] = true;
      continue;
    }
    const auto& env = envelopes[*map.channel[i]];
    if (!env) {
      throw DataError("no envelope for channel " + std::string(channel_name(*map.channel[i])) +
                      " driving MTU " + std::to_string(i));
    }
    out.excitation[i] = *env;
  }
  return out;
}

}  // namespace exo::signal

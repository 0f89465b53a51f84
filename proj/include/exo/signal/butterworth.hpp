#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace exo::signal {

enum class FilterKind { lowpass, highpass, bandpass };

/// Digital Butterworth filter request. Bandpass uses both cutoffs, the
/// other kinds only `cutoff_hz[0]`.
struct FilterSpec {
  int order = 2;
  FilterKind kind = FilterKind::lowpass;
  std::array<double, 2> cutoff_hz{0.0, 0.0};
  double sample_rate_hz = 1000.0;

  static FilterSpec lowpass(double cutoff, double fs) {
    return {2, FilterKind::lowpass, {cutoff, 0.0}, fs};
  }
  static FilterSpec highpass(double cutoff, double fs) {
    return {2, FilterKind::highpass, {cutoff, 0.0}, fs};
  }
  static FilterSpec bandpass(double low, double high, double fs) {
    return {2, FilterKind::bandpass, {low, high}, fs};
  }

  /// Throws InvalidSpec when the order is not 2 or a cutoff is outside (0, fs/2).
  void validate() const;
};

/// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  double dc_gain() const { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

struct FilterCoefficients {
  std::vector<Biquad> sections;
  double sample_rate_hz = 0.0;

  /// Complex frequency response at `f_hz`.
  std::complex<double> response(double f_hz) const;
};

/// Bilinear-transform Butterworth design with prewarped band edges, so the
/// digital -3 dB points land exactly on the requested cutoffs.
FilterCoefficients design_filter(const FilterSpec& spec);

/// Streaming cascade in transposed direct form II. The first sample primes
/// every section to its steady state for that input, which suppresses the
/// start-up transient of a signal that does not begin at zero.
class SosFilter {
 public:
  SosFilter() = default;
  explicit SosFilter(FilterCoefficients coeffs, bool prime_on_first = true);

  double step(double x);
  void filter(std::span<const double> in, std::span<double> out);
  std::vector<double> filter(std::span<const double> in);

  /// Set all section states to the steady state of a constant input `x`.
  void prime(double x);
  void reset();

  const FilterCoefficients& coefficients() const { return coeffs_; }

 private:
  FilterCoefficients coeffs_;
  std::vector<std::array<double, 2>> state_;
  bool prime_on_first_ = true;
  bool primed_ = false;
};

}  // namespace exo::signal

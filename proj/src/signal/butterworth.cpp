#include "exo/signal/butterworth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "exo/error.hpp"

namespace exo::signal {

namespace {

using cplx = std::complex<double>;

struct Zpk {
  std::vector<cplx> zeros;
  std::vector<cplx> poles;
  double gain = 1.0;
};

Zpk analog_prototype(int order) {
  Zpk zpk;
  for (int k = 1; k <= order; ++k) {
    const double angle = std::numbers::pi * (2.0 * k + order - 1) / (2.0 * order);
    zpk.poles.push_back(std::polar(1.0, angle));
  }
  return zpk;
}

Zpk bilinear(const Zpk& analog, double fs) {
  const double fs2 = 2.0 * fs;
  Zpk out;
  cplx num = 1.0, den = 1.0;
  for (const cplx& z : analog.zeros) {
    out.zeros.push_back((fs2 + z) / (fs2 - z));
    num *= fs2 - z;
  }
  for (const cplx& p : analog.poles) {
    out.poles.push_back((fs2 + p) / (fs2 - p));
    den *= fs2 - p;
  }
  // Zeros at infinity map to Nyquist.
  while (out.zeros.size() < out.poles.size()) out.zeros.emplace_back(-1.0, 0.0);
  out.gain = analog.gain * (num / den).real();
  return out;
}

// Poles as conjugate pairs (or real pairs), zeros paired smallest with largest
// real part so a bandpass section gets one zero at DC and one at Nyquist.
std::vector<Biquad> to_sos(const Zpk& zpk) {
  std::vector<cplx> upper;
  std::vector<double> real_poles;
  for (const cplx& p : zpk.poles) {
    if (std::abs(p.imag()) < 1e-12) {
      real_poles.push_back(p.real());
    } else if (p.imag() > 0.0) {
      upper.push_back(p);
    }
  }
  std::vector<double> zeros;
  for (const cplx& z : zpk.zeros) zeros.push_back(z.real());
  std::sort(zeros.begin(), zeros.end());

  std::vector<std::array<double, 2>> pole_pairs;  // (a1, a2)
  for (const cplx& p : upper) pole_pairs.push_back({-2.0 * p.real(), std::norm(p)});
  for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
    pole_pairs.push_back({-(real_poles[i] + real_poles[i + 1]), real_poles[i] * real_poles[i + 1]});
  }
  if (real_poles.size() % 2 == 1) pole_pairs.push_back({-real_poles.back(), 0.0});

  std::vector<Biquad> sections;
  std::size_t lo = 0, hi = zeros.size();
  for (const auto& [a1, a2] : pole_pairs) {
    Biquad s;
    s.a1 = a1;
    s.a2 = a2;
    if (a2 == 0.0 && hi - lo >= 1) {
      const double z = zeros[--hi];
      s.b0 = 1.0;
      s.b1 = -z;
      s.b2 = 0.0;
    } else if (hi - lo >= 2) {
      const double z1 = zeros[lo++];
      const double z2 = zeros[--hi];
      s.b0 = 1.0;
      s.b1 = -(z1 + z2);
      s.b2 = z1 * z2;
    }
    sections.push_back(s);
  }
  sections.front().b0 *= zpk.gain;
  sections.front().b1 *= zpk.gain;
  sections.front().b2 *= zpk.gain;
  return sections;
}

}  // namespace

void FilterSpec::validate() const {
  if (order != 2) throw InvalidSpec("Butterworth order must be 2");
  if (!(sample_rate_hz > 0.0)) throw InvalidSpec("sample rate must be positive");
  const double nyquist = sample_rate_hz / 2.0;
  auto check = [&](double f) {
    if (!(f > 0.0) || !(f < nyquist)) {
      throw InvalidSpec("cutoff " + std::to_string(f) + " Hz outside (0, Nyquist)");
    }
  };
  check(cutoff_hz[0]);
  if (kind == FilterKind::bandpass) {
    check(cutoff_hz[1]);
    if (!(cutoff_hz[0] < cutoff_hz[1])) throw InvalidSpec("bandpass needs low < high");
  }
}

std::complex<double> FilterCoefficients::response(double f_hz) const {
  const cplx z = std::polar(1.0, -2.0 * std::numbers::pi * f_hz / sample_rate_hz);
  cplx h = 1.0;
  for (const Biquad& s : sections) {
    h *= (s.b0 + s.b1 * z + s.b2 * z * z) / (1.0 + s.a1 * z + s.a2 * z * z);
  }
  return h;
}

FilterCoefficients design_filter(const FilterSpec& spec) {
  spec.validate();
  const double fs = spec.sample_rate_hz;
  auto warp = [fs](double f) { return 2.0 * fs * std::tan(std::numbers::pi * f / fs); };

  Zpk proto = analog_prototype(spec.order);
  Zpk analog;
  switch (spec.kind) {
    case FilterKind::lowpass: {
      const double wc = warp(spec.cutoff_hz[0]);
      for (const cplx& p : proto.poles) analog.poles.push_back(wc * p);
      analog.gain = std::pow(wc, spec.order);
      break;
    }
    case FilterKind::highpass: {
      const double wc = warp(spec.cutoff_hz[0]);
      cplx prod = 1.0;
      for (const cplx& p : proto.poles) {
        analog.poles.push_back(wc / p);
        analog.zeros.emplace_back(0.0, 0.0);
        prod *= -p;
      }
      analog.gain = (1.0 / prod).real();
      break;
    }
    case FilterKind::bandpass: {
      const double w1 = warp(spec.cutoff_hz[0]);
      const double w2 = warp(spec.cutoff_hz[1]);
      const double bw = w2 - w1;
      const double w0 = std::sqrt(w1 * w2);
      for (const cplx& p : proto.poles) {
        const cplx scaled = p * bw / 2.0;
        const cplx root = std::sqrt(scaled * scaled - w0 * w0);
        analog.poles.push_back(scaled + root);
        analog.poles.push_back(scaled - root);
        analog.zeros.emplace_back(0.0, 0.0);
      }
      analog.gain = std::pow(bw, spec.order);
      break;
    }
  }
  FilterCoefficients out;
  out.sections = to_sos(bilinear(analog, fs));
  out.sample_rate_hz = fs;
  return out;
}

SosFilter::SosFilter(FilterCoefficients coeffs, bool prime_on_first)
    : coeffs_(std::move(coeffs)),
      state_(coeffs_.sections.size(), {0.0, 0.0}),
      prime_on_first_(prime_on_first) {}

void SosFilter::prime(double x) {
  for (std::size_t i = 0; i < coeffs_.sections.size(); ++i) {
    const Biquad& s = coeffs_.sections[i];
    const double y = s.dc_gain() * x;
    state_[i][1] = s.b2 * x - s.a2 * y;
    state_[i][0] = s.b1 * x - s.a1 * y + state_[i][1];
    x = y;
  }
  primed_ = true;
}

void SosFilter::reset() {
  for (auto& st : state_) st = {0.0, 0.0};
  primed_ = false;
}

double SosFilter::step(double x) {
  if (!primed_) {
    if (prime_on_first_) prime(x);
    primed_ = true;
  }
  for (std::size_t i = 0; i < coeffs_.sections.size(); ++i) {
    const Biquad& s = coeffs_.sections[i];
    auto& z = state_[i];
    const double y = s.b0 * x + z[0];
    z[0] = s.b1 * x - s.a1 * y + z[1];
    z[1] = s.b2 * x - s.a2 * y;
    x = y;
  }
  return x;
}

void SosFilter::filter(std::span<const double> in, std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = step(in[i]);
}

std::vector<double> SosFilter::filter(std::span<const double> in) {
  std::vector<double> out(in.size());
  filter(in, out);
  return out;
}

}  // namespace exo::signal

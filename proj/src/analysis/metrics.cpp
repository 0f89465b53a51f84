#include "exo/analysis/metrics.hpp"

#include <cmath>
#include <limits>

#include "exo/error.hpp"

namespace exo::analysis {

double loop_area(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("loop coordinates differ in length");
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  // Centre the coordinates so the cross products do not cancel catastrophically.
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx += x[i];
    cy += y[i];
  }
  cx /= n;
  cy /= n;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    twice += (x[i] - cx) * (y[j] - cy) - (x[j] - cx) * (y[i] - cy);
  }
  return std::abs(0.5 * twice);
}

namespace {

struct CycleSpan {
  std::size_t begin, end;  // inclusive end sample sits on the next boundary
};

CycleSpan cycle_span(const plant::TrialRecord& r, int cycle) {
  const double per = r.cycle_duration * r.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(per));
  if (cycle < 0 || std::abs(per - static_cast<double>(n)) > 1e-9) {
    throw DataError("record does not hold whole cycles");
  }
  const std::size_t begin = static_cast<std::size_t>(cycle) * n;
  if (begin + n >= r.size()) throw DataError("cycle is truncated in the record");
  return {begin, begin + n};
}

double crossing(const std::vector<double>& incl, const std::vector<double>& f, std::size_t lo,
                std::size_t hi, double angle) {
  for (std::size_t i = lo; i < hi; ++i) {
    const double a = incl[i], b = incl[i + 1];
    if ((a - angle) * (b - angle) <= 0.0 && a != b) {
      const double w = (angle - a) / (b - a);
      return f[i] + w * (f[i + 1] - f[i]);
    }
  }
  throw DataError("inclination never crosses the requested angle");
}

}  // namespace

WorkLoop work_loop(const plant::TrialRecord& r, int cycle) {
  if (!(r.body_mass > 0.0)) throw DataError("record has no body mass");
  const auto span = cycle_span(r, cycle);
  WorkLoop loop;
  double scale = 1.0;
  for (std::size_t i = span.begin; i <= span.end; ++i) {
    loop.inclination_deg.push_back(r.inclination_deg[i]);
    loop.force_per_kg.push_back(r.f_measured[i] / r.body_mass);
    scale = std::max(scale, std::abs(r.inclination_deg[i]));
  }
  if (std::abs(loop.inclination_deg.front() - loop.inclination_deg.back()) > 1e-9 * scale) {
    throw DataError("work loop is not closed");
  }
  loop.area = loop_area(loop.inclination_deg, loop.force_per_kg);
  return loop;
}

BranchForces branch_forces(const plant::TrialRecord& r, double angle_deg, int cycle) {
  const auto span = cycle_span(r, cycle);
  const std::size_t quarter = (span.end - span.begin) / 4;
  std::vector<double> f(r.f_measured.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = r.f_measured[i] / r.body_mass;
  BranchForces out;
  out.lifting = crossing(r.inclination_deg, f, span.begin + quarter, span.begin + 2 * quarter, angle_deg);
  out.lowering =
      crossing(r.inclination_deg, f, span.begin + 2 * quarter, span.begin + 3 * quarter, angle_deg);
  return out;
}

double tracking_rmse(std::span<const double> desired, std::span<const double> measured,
                     double body_mass) {
  if (desired.empty()) throw DataError("tracking error of an empty stream");
  if (desired.size() != measured.size()) throw DataError("desired and measured streams differ in length");
  if (!(body_mass > 0.0)) throw DataError("body mass must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < desired.size(); ++i) {
    const double e = desired[i] - measured[i];
    s += e * e;
  }
  return std::sqrt(s / desired.size()) / body_mass;
}

void Window::validate() const {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) throw DataError("window must lie within [0, 1]");
}

double window_mean(const plant::TrialRecord& r, std::span<const double> stream, Window w) {
  w.validate();
  if (stream.size() != r.size()) throw DataError("stream does not match the record");
  const double per = r.cycle_duration * r.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(per));
  const std::size_t cycles = n == 0 ? 0 : (r.size() - 1) / n;
  if (cycles == 0) throw DataError("record holds no complete cycle");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < cycles * n; ++i) {
    const double frac = static_cast<double>(i % n) / static_cast<double>(n);
    if (frac >= w.lo - 1e-12 && frac <= w.hi + 1e-12) {
      sum += stream[i];
      ++count;
    }
  }
  if (count == 0) throw DataError("window contains no samples");
  return sum / count;
}

Reduction reduction(double baseline, double assisted) {
  Reduction r;
  r.baseline = baseline;
  r.assisted = assisted;
  r.absolute = baseline - assisted;
  r.percent = baseline != 0.0 ? 100.0 * r.absolute / baseline : 0.0;
  return r;
}

Reduction window_reduction(const plant::TrialRecord& noexo, std::span<const double> noexo_stream,
                           const plant::TrialRecord& assisted,
                           std::span<const double> assisted_stream, Window w) {
  if (noexo.size() != assisted.size() || noexo.sample_rate != assisted.sample_rate ||
      noexo.cycle_duration != assisted.cycle_duration) {
    throw DataError("records are not aligned on the same cycle layout");
  }
  return reduction(window_mean(noexo, noexo_stream, w), window_mean(assisted, assisted_stream, w));
}

Reduction emg_reduction(const plant::TrialRecord& noexo, const plant::TrialRecord& assisted) {
  if (noexo.emg_sum.size() != noexo.size() || assisted.emg_sum.size() != assisted.size()) {
    throw DataError("EMG channel sums are missing from a record");
  }
  return window_reduction(noexo, noexo.emg_sum, assisted, assisted.emg_sum, Window::full());
}

double cumulative_compression(std::span<const double> c, double dt, int n_cycles,
                              double cycle_duration) {
  if (!(dt > 0.0) || n_cycles < 0) throw DataError("invalid integration step or cycle count");
  const double samples = n_cycles * cycle_duration / dt;
  const auto n = static_cast<std::size_t>(std::llround(samples));
  if (n >= c.size() && n > 0) throw DataError("requested cycles exceed the recorded data");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += 0.5 * (c[i] + c[i + 1]) * dt;
  return s / 1000.0;
}

double cumulative_compression(const plant::TrialRecord& r, int n_cycles) {
  return cumulative_compression(r.compression, 1.0 / r.sample_rate, n_cycles, r.cycle_duration);
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidSpec("incomplete beta needs positive shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw InvalidSpec("degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_ttest_onetailed(std::span<const double> a, std::span<const double> b, Tail tail) {
  if (a.size() != b.size()) throw DataError("paired samples differ in length");
  if (a.size() < 3) throw DataError("paired t-test needs at least three pairs");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  TTestResult r;
  r.dof = static_cast<int>(n) - 1;
  const double sd = std::sqrt(ss / r.dof);
  const double sign = tail == Tail::greater ? 1.0 : -1.0;
  if (sd == 0.0 || sd <= 1e-14 * std::abs(mean)) {
    r.degenerate = true;
    if (mean == 0.0) {
      r.t = 0.0;
      r.p = 0.5;
    } else {
      r.t = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p = sign * mean > 0 ? 0.0 : 1.0;
    }
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double st = sign * r.t;
  const double upper = 0.5 * incomplete_beta(0.5 * r.dof, 0.5, r.dof / (r.dof + st * st));
  r.p = st >= 0.0 ? upper : 1.0 - upper;
  return r;
}

}  // namespace exo::analysis

#include "exo/analysis/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "exo/error.hpp"

namespace exo::analysis {

using plant::ControllerKind;

namespace {

std::size_t samples_per_cycle(const plant::TrialRecord& r) {
  return static_cast<std::size_t>(std::llround(r.cycle_duration * r.sample_rate));
}

int complete_cycles(const plant::TrialRecord& r) {
  const std::size_t n = samples_per_cycle(r);
  if (n == 0 || r.size() < n + 1) throw DataError("record holds no complete cycle");
  return static_cast<int>(std::min<std::size_t>((r.size() - 1) / n, static_cast<std::size_t>(r.n_cycles)));
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Criterion criterion(std::string id, std::string description) {
  Criterion c;
  c.id = std::move(id);
  c.description = std::move(description);
  return c;
}

bool same_mass(double a, double b) { return std::abs(a - b) < 1e-9; }

/// Subject-paired values of one metric for two conditions.
struct Paired {
  std::vector<double> a, b;
};

Paired paired(const std::vector<RunMetrics>& runs, ControllerKind ka, double wa, ControllerKind kb,
              double wb, double RunMetrics::*field) {
  std::map<std::string, std::pair<const RunMetrics*, const RunMetrics*>> by;
  for (const auto& r : runs) {
    if (r.controller == ka && same_mass(r.box_mass, wa)) by[r.subject].first = &r;
    if (r.controller == kb && same_mass(r.box_mass, wb)) by[r.subject].second = &r;
  }
  Paired p;
  for (const auto& [s, pr] : by) {
    if (pr.first && pr.second) {
      p.a.push_back(pr.first->*field);
      p.b.push_back(pr.second->*field);
    }
  }
  return p;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Per-subject net EMG reduction (NOEXO minus assisted) for one weight.
std::vector<double> emg_reductions(const std::vector<RunMetrics>& runs, ControllerKind k, double w,
                                   std::vector<std::string>* subjects = nullptr) {
  std::map<std::string, std::pair<const RunMetrics*, const RunMetrics*>> by;
  for (const auto& r : runs) {
    if (!same_mass(r.box_mass, w)) continue;
    if (r.controller == ControllerKind::noexo) by[r.subject].first = &r;
    if (r.controller == k) by[r.subject].second = &r;
  }
  std::vector<double> out;
  for (const auto& [s, pr] : by) {
    if (pr.first && pr.second) {
      out.push_back(pr.first->emg_mean - pr.second->emg_mean);
      if (subjects) subjects->push_back(s);
    }
  }
  return out;
}

}  // namespace

RunMetrics run_metrics(const plant::TrialRecord& r) {
  RunMetrics m;
  m.subject = r.subject_id;
  m.controller = r.controller;
  m.box_mass = r.box_mass;
  m.body_mass = r.body_mass;
  if (!(r.body_mass > 0.0)) throw DataError("record has no body mass");
  const int cycles = complete_cycles(r);
  const std::size_t n = samples_per_cycle(r);
  m.cycles = cycles;
  for (int c = 0; c < cycles; ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * n;
    double peak = 0.0, peak_d = 0.0;
    for (std::size_t i = b; i <= b + n; ++i) {
      peak = std::max(peak, r.f_measured[i]);
      peak_d = std::max(peak_d, r.f_desired[i]);
    }
    m.peak_force += peak / r.body_mass;
    m.peak_desired += peak_d / r.body_mass;
    m.force_mid += r.f_measured[b + n / 2] / r.body_mass;
    m.loop_area += work_loop(r, c).area;
    for (std::size_t k = 0; k < kBranchAngles.size(); ++k) {
      const auto br = branch_forces(r, kBranchAngles[k], c);
      m.lifting[k] += br.lifting;
      m.lowering[k] += br.lowering;
    }
  }
  const double inv = 1.0 / cycles;
  m.peak_force *= inv;
  m.peak_desired *= inv;
  m.force_mid *= inv;
  m.loop_area *= inv;
  for (auto& v : m.lifting) v *= inv;
  for (auto& v : m.lowering) v *= inv;

  const std::size_t len = static_cast<std::size_t>(cycles) * n + 1;
  m.rmse = tracking_rmse(std::span(r.f_desired).first(len), std::span(r.f_measured).first(len),
                         r.body_mass);
  m.cumulative = cumulative_compression(r, cycles);
  m.emg_mean = window_mean(r, r.emg_sum, Window::full());
  m.compression_mean = window_mean(r, r.compression, Window::full());
  m.compression_erect = window_mean(r, r.compression, Window::erect());
  return m;
}

std::vector<double> cycle_profile(const plant::TrialRecord& r, std::span<const double> stream,
                                  int points) {
  if (points < 2) throw DataError("a profile needs at least two points");
  if (stream.size() != r.size()) throw DataError("stream does not match the record");
  const int cycles = complete_cycles(r);
  const std::size_t n = samples_per_cycle(r);
  std::vector<double> out(static_cast<std::size_t>(points), 0.0);
  for (int p = 0; p < points; ++p) {
    const auto off = static_cast<std::size_t>(std::llround(static_cast<double>(p) * n / (points - 1)));
    double s = 0.0;
    for (int c = 0; c < cycles; ++c) s += stream[static_cast<std::size_t>(c) * n + off];
    out[static_cast<std::size_t>(p)] = s / cycles;
  }
  return out;
}

std::optional<double> condition_mean(const std::vector<RunMetrics>& runs, ControllerKind k,
                                     double w, double RunMetrics::*field) {
  double s = 0.0;
  int n = 0;
  for (const auto& r : runs) {
    if (r.controller == k && same_mass(r.box_mass, w)) {
      s += r.*field;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return s / n;
}

std::vector<Criterion> cohort_criteria(const std::vector<RunMetrics>& runs, double light,
                                       double heavy) {
  using K = ControllerKind;
  std::vector<Criterion> out;
  auto cm = [&](K k, double w, double RunMetrics::*f) { return condition_mean(runs, k, w, f); };

  {
    Criterion c = criterion("AC1", "NMBC peak force rises >= 20% from light to heavy box; VSBC peaks within 10%");
    const auto n5 = cm(K::nmbc, light, &RunMetrics::peak_force), n15 = cm(K::nmbc, heavy, &RunMetrics::peak_force);
    const auto v5 = cm(K::vsbc, light, &RunMetrics::peak_force), v15 = cm(K::vsbc, heavy, &RunMetrics::peak_force);
    if (n5 && n15 && v5 && v15) {
      c.evaluated = true;
      const double rn = *n15 / *n5 - 1.0, rv = *v15 / *v5 - 1.0;
      c.pass = rn >= 0.2 && std::abs(rv) < 0.1;
      c.detail = fmt("NMBC %.3f -> %.3f N/kg (%+.1f%%); ", *n5, *n15, 100 * rn) +
                 fmt("VSBC %.3f -> %.3f N/kg (%+.1f%%)", *v5, *v15, 100 * rv);
    }
    out.push_back(c);
  }
  {
    Criterion c = criterion("AC2", "heavy box at mid-cycle: NMBC > 0.5 N/kg, VSBC < 0.5 N/kg, paired p < 0.05");
    const auto p = paired(runs, K::nmbc, heavy, K::vsbc, heavy, &RunMetrics::force_mid);
    if (p.a.size() >= 3) {
      c.evaluated = true;
      const auto t = paired_ttest_onetailed(p.a, p.b, Tail::greater);
      const double na = mean(p.a), vb = mean(p.b);
      c.pass = na > 0.5 && vb < 0.5 && t.p < 0.05;
      c.detail = fmt("NMBC %.3f N/kg, VSBC %.3f N/kg, t = %.3f, p = %.3g", na, vb, t.t, t.p);
    }
    out.push_back(c);
  }
  {
    Criterion c = criterion("AC3", "tracking RMSE below 15% of peak desired force in every assisted condition");
    bool have = true, ok = true;
    for (K k : {K::nmbc, K::vsbc}) {
      for (double w : {light, heavy}) {
        const auto e = cm(k, w, &RunMetrics::rmse), pk = cm(k, w, &RunMetrics::peak_desired);
        if (!e || !pk) {
          have = false;
          continue;
        }
        const double ratio = *pk > 0.0 ? *e / *pk : INFINITY;
        ok = ok && ratio < 0.15;
        c.detail += std::string(plant::controller_name(k)) + fmt(" %.0f kg %.1f%%; ", w, 100 * ratio);
      }
    }
    c.evaluated = have;
    c.pass = have && ok;
    out.push_back(c);
  }
  {
    Criterion c = criterion("AC4", "cumulative compression NOEXO > VSBC > NMBC; heavy box NMBC >= 15%, VSBC 5-15%");
    bool have = true, order = true;
    double rn = 0.0, rv = 0.0;
    for (double w : {light, heavy}) {
      const auto o = cm(K::noexo, w, &RunMetrics::cumulative), n = cm(K::nmbc, w, &RunMetrics::cumulative),
                 v = cm(K::vsbc, w, &RunMetrics::cumulative);
      if (!o || !n || !v) {
        have = false;
        continue;
      }
      order = order && *o > *v && *v > *n;
      const double pn = 100 * (*o - *n) / *o, pv = 100 * (*o - *v) / *o;
      if (w == heavy) {
        rn = pn;
        rv = pv;
      }
      c.detail += fmt("%.0f kg: NOEXO %.2f, VSBC %.2f, ", w, *o, *v) +
                  fmt("NMBC %.2f kN s (NMBC %.1f%%, VSBC %.1f%%); ", *n, pn, pv);
    }
    if (have) {
      c.evaluated = true;
      c.pass = order && rn >= 15.0 && rv >= 5.0 && rv <= 15.0;
    }
    out.push_back(c);
  }
  {
    Criterion c = criterion("AC5", "heavy box net EMG reduction NMBC > VSBC (paired p < 0.05); light box within 0.05");
    const auto n15 = emg_reductions(runs, K::nmbc, heavy), v15 = emg_reductions(runs, K::vsbc, heavy);
    const auto n5 = emg_reductions(runs, K::nmbc, light), v5 = emg_reductions(runs, K::vsbc, light);
    if (n15.size() >= 3 && n15.size() == v15.size() && !n5.empty() && n5.size() == v5.size()) {
      c.evaluated = true;
      const auto t = paired_ttest_onetailed(n15, v15, Tail::greater);
      const double gap5 = std::abs(mean(n5) - mean(v5));
      c.pass = t.p < 0.05 && mean(n15) > mean(v15) && gap5 < 0.05;
      c.detail = fmt("heavy: NMBC %.3f, VSBC %.3f (p = %.3g); ", mean(n15), mean(v15), t.p) +
                 fmt("light: NMBC %.3f, VSBC %.3f", mean(n5), mean(v5));
    }
    out.push_back(c);
  }
  {
    Criterion c = criterion("AC10b", "NMBC lifting-branch force >= lowering-branch force at matched angles");
    bool have = false, ok = true;
    for (double w : {light, heavy}) {
      std::array<double, kBranchAngles.size()> up{}, down{};
      int n = 0;
      for (const auto& r : runs) {
        if (r.controller != K::nmbc || !same_mass(r.box_mass, w)) continue;
        for (std::size_t k = 0; k < up.size(); ++k) {
          up[k] += r.lifting[k];
          down[k] += r.lowering[k];
        }
        ++n;
      }
      if (n == 0) continue;
      have = true;
      c.detail += fmt("%.0f kg:", w);
      for (std::size_t k = 0; k < up.size(); ++k) {
        ok = ok && up[k] >= down[k];
        c.detail += fmt(" %.0f deg %.3f/%.3f", kBranchAngles[k], up[k] / n, down[k] / n);
      }
      c.detail += "; ";
    }
    c.evaluated = have;
    c.pass = have && ok;
    out.push_back(c);
  }
  for (auto& c : out) {
    if (c.detail.ends_with("; ")) c.detail.resize(c.detail.size() - 2);
  }
  return out;
}

}  // namespace exo::analysis

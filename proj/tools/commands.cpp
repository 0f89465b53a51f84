#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>
#include <tuple>

#include "exo/calibration/trial.hpp"
#include "exo/io/csv.hpp"
#include "exo/rng.hpp"

namespace exo::cli {

namespace fs = std::filesystem;
using plant::ControllerKind;

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Runs f(0..n-1) on up to `jobs` threads; rethrows the first failure.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        {
          std::lock_guard lock(mu);
          if (error) return;
        }
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string weight_label(double w) { return io::format_double(w) + "kg"; }

std::string condition_label(ControllerKind k, double w) {
  return std::string(plant::controller_name(k)) + "_" + weight_label(w);
}

bool same_mass(double a, double b) { return std::abs(a - b) < 1e-9; }

}  // namespace

void apply_env(io::ExperimentConfig& cfg) {
  if (const char* dir = std::getenv(kOutputEnv); dir && *dir) cfg.output_dir = dir;
}

std::uint64_t run_seed(std::uint64_t base, const std::string& subject, ControllerKind kind,
                       double box_mass) {
  const std::string key =
      subject + "/" + std::string(plant::controller_name(kind)) + "/" + io::format_double(box_mass);
  return splitmix(base ^ io::fnv1a64(key));
}

std::string run_id(const std::string& subject, ControllerKind kind, double box_mass) {
  return subject + "_" + condition_label(kind, box_mass);
}

std::vector<Condition> session_order(const io::ExperimentConfig& cfg, const std::string& subject) {
  Rng rng(splitmix(cfg.seed ^ io::fnv1a64("order/" + subject)));
  std::vector<Condition> plain, exo;
  for (double w : cfg.weights) {
    for (auto k : cfg.controllers) (k == ControllerKind::noexo ? plain : exo).push_back({k, w});
  }
  auto shuffle = [&](std::vector<Condition>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.next() % i);
      std::swap(v[i - 1], v[j]);
    }
  };
  shuffle(plain);
  shuffle(exo);
  const bool exo_first = rng.next() % 2 == 1;
  std::vector<Condition> out = exo_first ? exo : plain;
  const auto& rest = exo_first ? plain : exo;
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

fs::path subject_path(const io::ExperimentConfig& cfg, const std::string& id) {
  return cfg.output_dir / "subjects" / (id + ".json");
}

fs::path trial_path(const io::ExperimentConfig& cfg, const std::string& id, double box_mass) {
  return cfg.output_dir / "trials" / (id + "_" + weight_label(box_mass) + ".csv");
}

fs::path model_path(const io::ExperimentConfig& cfg, const std::string& id) {
  return cfg.resolved_models_dir() / (id + ".model.json");
}

SynthOutput cmd_synth(const io::ExperimentConfig& cfg) {
  cfg.validate();
  const double ratio = cfg.loop.tick_rate / cfg.calibration_rate;
  const long decimation = std::lround(ratio);
  if (decimation < 1 || std::abs(ratio - static_cast<double>(decimation)) > 1e-9) {
    throw ConfigError("calibration sample rate must divide the tick rate");
  }
  SynthOutput out;
  for (const auto& s : plant::make_cohort(cfg.subjects)) {
    const fs::path sp = subject_path(cfg, s.id);
    auto f = io::open_output(sp);
    f << io::dump_subject(s);
    out.subject_files.push_back(sp);

    const auto truth = plant::subject_model(s);
    for (double w : cfg.weights) {
      plant::LiftingCycleSpec spec = cfg.kinematics;
      spec.box_mass = w;
      plant::ClosedLoopConfig loop = cfg.loop;
      loop.keep_ticks = true;
      loop.tick_decimation = static_cast<int>(decimation);
      const auto res = plant::run_closed_loop(s, truth, truth, spec, ControllerKind::noexo,
                                              cfg.calibration_cycles,
                                              run_seed(cfg.seed, s.id + "/calibration",
                                                       ControllerKind::noexo, w),
                                              loop);
      plant::LiftingCycleSpec kspec = spec;
      kspec.sample_rate = cfg.calibration_rate;
      const auto kin = plant::generate_cycle(kspec, cfg.calibration_cycles);
      if (kin.t.size() != res.ticks.rows.size()) throw DataError("calibration trial clocks disagree");
      calibration::TrialStreams st;
      st.t = kin.t;
      st.inclination = kin.inclination;
      st.l5s1_angle = kin.l5s1_angle;
      st.box_y = kin.box_y;
      st.box_mass = w;
      st.box_rest_y = kin.box_rest_y;
      for (const auto& row : res.ticks.rows) st.envelopes.push_back(row.envelopes);
      const fs::path tp = trial_path(cfg, s.id, w);
      io::write_calibration_trial(tp, st);
      out.trial_files.push_back(tp);
    }
  }
  return out;
}

CalibrateOutcome cmd_calibrate(const CalibrateRequest& req) {
  if (req.trials.empty()) throw UsageError("no calibration trials given");
  const io::SubjectConfig subject = io::load_subject(req.subject);

  std::vector<calibration::CalibrationTrial> trials;
  std::vector<double> weights;
  for (const auto& p : req.trials) {
    const auto streams = io::read_calibration_trial(p, subject, req.calibration_rate, req.envelope);
    weights.push_back(streams.box_mass);
    trials.push_back(calibration::make_calibration_trial(p.stem().string(), streams, subject.anthro));
  }
  std::string missing;
  for (double w : req.required_weights) {
    if (std::none_of(weights.begin(), weights.end(), [&](double x) { return same_mass(x, w); })) {
      missing += (missing.empty() ? "" : ", ") + weight_label(w);
    }
  }
  if (!missing.empty()) {
    throw UsageError("missing calibration trial for " + missing + " (subject " + subject.id + ")");
  }

  auto model = model::MskModel::build(subject.anthro.body_mass, req.initial_shape);
  const auto layout = calibration::CalibrationLayout::from_mapping(
      signal::EmgMtuMapping::trunk_default(), model.roster());
  const auto result = calibration::calibrate(model, std::move(trials), req.bounds, req.annealing);
  model.set_parameters(result.parameters);
  model.set_activation_shape(result.activation_shape);

  io::CalibrationInfo info;
  info.objective = result.annealing.objective;
  info.initial_objective = result.annealing.initial_objective;
  info.evaluations = result.annealing.evaluations;
  info.converged = result.annealing.converged;
  info.seed = req.annealing.seed;
  info.variable_names = layout.variable_names();
  info.variables = result.x;
  io::save_model(req.model_out, io::CalibratedModelFile{io::kModelFormatVersion, subject.id,
                                                        subject.anthro.body_mass, std::move(model),
                                                        info});
  fs::path trace = req.trace_out;
  if (trace.empty()) {
    trace = req.model_out;
    trace.replace_filename(subject.id + ".trace.csv");
  }
  io::write_trace(trace, result.annealing.trace);

  return {subject.id, info.objective, info.initial_objective, info.evaluations, info.converged};
}

std::vector<CalibrateOutcome> calibrate_cohort(const io::ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const auto cohort = plant::make_cohort(cfg.subjects);
  std::vector<CalibrateOutcome> out(cohort.size());
  parallel_for(cohort.size(), jobs, [&](std::size_t i) {
    const auto& id = cohort[i].id;
    CalibrateRequest req;
    req.subject = subject_path(cfg, id);
    for (double w : cfg.weights) {
      if (fs::exists(trial_path(cfg, id, w))) req.trials.push_back(trial_path(cfg, id, w));
    }
    if (req.trials.empty()) throw UsageError("no calibration trials for " + id + "; run synth first");
    req.model_out = model_path(cfg, id);
    req.required_weights = cfg.weights;
    req.bounds = cfg.bounds;
    req.annealing = cfg.annealing;
    req.initial_shape = cfg.initial_shape;
    req.calibration_rate = cfg.calibration_rate;
    req.envelope = cfg.loop.envelope;
    out[i] = cmd_calibrate(req);
  });
  return out;
}

fs::path cmd_run(const io::ExperimentConfig& cfg, int jobs) {
  cfg.validate();
  const auto cohort = plant::make_cohort(cfg.subjects);
  std::string missing;
  for (const auto& s : cohort) {
    if (!fs::exists(model_path(cfg, s.id))) missing += (missing.empty() ? "" : ", ") + s.id;
  }
  if (!missing.empty()) {
    throw DataError("missing calibrated model for " + missing + " in " +
                    cfg.resolved_models_dir().string());
  }

  std::vector<model::MskModel> truth, controller;
  for (const auto& s : cohort) {
    truth.push_back(plant::subject_model(s));
    auto file = io::load_model(model_path(cfg, s.id));
    if (file.subject_id != s.id) {
      throw DataError("model file for " + s.id + " belongs to subject " + file.subject_id);
    }
    controller.push_back(std::move(file.model));
  }

  struct Task {
    std::size_t subject;
    io::ManifestEntry entry;
  };
  std::vector<Task> tasks;
  const std::string tick_ext = cfg.tick_log.format == io::TickFormat::csv ? ".csv" : ".bin";
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const auto order = session_order(cfg, cohort[i].id);
    for (std::size_t k = 0; k < order.size(); ++k) {
      io::ManifestEntry e;
      e.subject = cohort[i].id;
      e.controller = order[k].controller;
      e.box_mass = order[k].box_mass;
      e.run_id = run_id(e.subject, e.controller, e.box_mass);
      e.order = static_cast<int>(k);
      e.seed = run_seed(cfg.seed, e.subject, e.controller, e.box_mass);
      e.cycles = cfg.cycles;
      e.record = "runs/" + e.run_id + ".csv";
      if (cfg.tick_log.enabled) e.ticks = "ticks/" + e.run_id + tick_ext;
      tasks.push_back({i, std::move(e)});
    }
  }

  parallel_for(tasks.size(), jobs, [&](std::size_t t) {
    const auto& task = tasks[t];
    const auto& e = task.entry;
    plant::LiftingCycleSpec spec = cfg.kinematics;
    spec.box_mass = e.box_mass;
    plant::ClosedLoopConfig loop = cfg.loop;
    loop.keep_ticks = cfg.tick_log.enabled;
    loop.tick_decimation = cfg.tick_log.decimation;
    const auto res = plant::run_closed_loop(cohort[task.subject], truth[task.subject],
                                            controller[task.subject], spec, e.controller, e.cycles,
                                            e.seed, loop);
    io::write_trial_record(cfg.output_dir / e.record, res.record);
    if (!e.ticks.empty()) io::write_tick_log(cfg.output_dir / e.ticks, res.ticks, cfg.tick_log.format);
  });

  std::vector<io::ManifestEntry> entries;
  for (auto& t : tasks) entries.push_back(t.entry);
  const fs::path manifest = cfg.output_dir / "manifest.csv";
  io::write_manifest(manifest, entries);
  auto f = io::open_output(cfg.output_dir / "experiment.json");
  f << io::dump_experiment(cfg);
  return manifest;
}

namespace {

using Streams = std::vector<std::vector<double>>;

struct LoadedRun {
  io::ManifestEntry entry;
  plant::TrialRecord record;
  analysis::RunMetrics metrics;
};

std::vector<double> per_kg(const std::vector<double>& v, double mass) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / mass;
  return out;
}

void profile_table(const fs::path& path, const std::vector<LoadedRun>& runs,
                   const std::vector<std::string>& columns,
                   const std::function<std::vector<std::vector<double>>(const plant::TrialRecord&)>& streams) {
  auto out = io::open_output(path);
  std::vector<std::string> header = {"condition", "subject", "percent"};
  header.insert(header.end(), columns.begin(), columns.end());
  io::CsvWriter w(out, header);
  for (const auto& run : runs) {
    const auto& r = run.record;
    std::vector<std::vector<double>> profiles;
    for (const auto& s : streams(r)) profiles.push_back(analysis::cycle_profile(r, s));
    const std::string cond = condition_label(r.controller, r.box_mass);
    for (std::size_t p = 0; p < profiles.front().size(); ++p) {
      std::vector<std::string> cells = {cond, r.subject_id, std::to_string(p)};
      for (const auto& prof : profiles) cells.push_back(io::format_double(prof[p]));
      w.row(cells);
    }
  }
}

}  // namespace

ReportOutcome cmd_report(const fs::path& manifest, fs::path out) {
  const auto entries = io::read_manifest(manifest);
  if (entries.empty()) throw DataError("manifest " + manifest.string() + " lists no runs");
  const fs::path base = manifest.parent_path();
  if (out.empty()) out = base / "report";

  ReportOutcome rep;
  rep.directory = out;
  std::vector<LoadedRun> runs;
  for (const auto& e : entries) {
    const fs::path p = base / e.record;
    if (!fs::exists(p)) {
      rep.gaps.push_back({e.run_id, "missing record " + e.record});
      continue;
    }
    try {
      LoadedRun lr{e, io::read_trial_record(p), {}};
      lr.metrics = analysis::run_metrics(lr.record);
      if (lr.metrics.cycles < e.cycles) {
        rep.gaps.push_back({e.run_id, "record holds " + std::to_string(lr.metrics.cycles) + " of " +
                                         std::to_string(e.cycles) + " cycles"});
      }
      runs.push_back(std::move(lr));
    } catch (const Error& err) {
      rep.gaps.push_back({e.run_id, std::string("unreadable record: ") + err.what()});
    }
  }
  std::sort(runs.begin(), runs.end(), [](const LoadedRun& a, const LoadedRun& b) {
    return std::tuple(a.record.box_mass, static_cast<int>(a.record.controller), a.record.subject_id) <
           std::tuple(b.record.box_mass, static_cast<int>(b.record.controller), b.record.subject_id);
  });
  for (const auto& r : runs) rep.runs.push_back(r.metrics);

  std::vector<double> weights;
  for (const auto& r : runs) {
    if (std::none_of(weights.begin(), weights.end(), [&](double w) { return same_mass(w, r.record.box_mass); })) {
      weights.push_back(r.record.box_mass);
    }
  }
  std::sort(weights.begin(), weights.end());
  const double light = weights.empty() ? 5.0 : weights.front();
  const double heavy = weights.empty() ? 15.0 : weights.back();
  rep.criteria = analysis::cohort_criteria(rep.runs, light, heavy);

  // Baselines for per-subject reductions.
  std::map<std::pair<std::string, double>, const analysis::RunMetrics*> noexo;
  for (const auto& m : rep.runs) {
    if (m.controller == ControllerKind::noexo) noexo[{m.subject, m.box_mass}] = &m;
  }

  {
    auto f = io::open_output(out / "metrics.csv");
    io::CsvWriter w(f, {"condition", "subject", "metric", "value"});
    std::map<std::pair<std::string, std::string>, std::vector<double>> by_condition;
    std::vector<std::pair<std::string, std::string>> order;
    auto put = [&](const std::string& cond, const std::string& subj, const std::string& metric, double v) {
      const std::vector<std::string> cells = {cond, subj, metric, io::format_double(v)};
      w.row(cells);
      auto key = std::pair(cond, metric);
      if (!by_condition.count(key)) order.push_back(key);
      by_condition[key].push_back(v);
    };
    for (const auto& m : rep.runs) {
      const std::string cond = condition_label(m.controller, m.box_mass);
      put(cond, m.subject, "peak_force_n_per_kg", m.peak_force);
      put(cond, m.subject, "peak_desired_n_per_kg", m.peak_desired);
      put(cond, m.subject, "force_mid_cycle_n_per_kg", m.force_mid);
      put(cond, m.subject, "tracking_rmse_n_per_kg", m.rmse);
      put(cond, m.subject, "cumulative_compression_kns", m.cumulative);
      put(cond, m.subject, "compression_mean_n", m.compression_mean);
      put(cond, m.subject, "compression_erect_n", m.compression_erect);
      put(cond, m.subject, "emg_mean", m.emg_mean);
      put(cond, m.subject, "loop_area", m.loop_area);
      for (std::size_t k = 0; k < analysis::kBranchAngles.size(); ++k) {
        const std::string a = io::format_double(analysis::kBranchAngles[k]);
        put(cond, m.subject, "lifting_force_" + a + "deg_n_per_kg", m.lifting[k]);
        put(cond, m.subject, "lowering_force_" + a + "deg_n_per_kg", m.lowering[k]);
      }
      const auto it = noexo.find({m.subject, m.box_mass});
      if (m.controller != ControllerKind::noexo && it != noexo.end()) {
        put(cond, m.subject, "emg_net_reduction", it->second->emg_mean - m.emg_mean);
        put(cond, m.subject, "cumulative_reduction_percent",
            analysis::reduction(it->second->cumulative, m.cumulative).percent);
        put(cond, m.subject, "erect_compression_reduction_percent",
            analysis::reduction(it->second->compression_erect, m.compression_erect).percent);
      }
    }
    auto s = io::open_output(out / "summary.csv");
    io::CsvWriter sw(s, {"condition", "metric", "mean", "sd", "n"});
    for (const auto& key : order) {
      const auto& v = by_condition[key];
      double mean = 0.0, ss = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      for (double x : v) ss += (x - mean) * (x - mean);
      const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
      const std::vector<std::string> cells = {key.first, key.second, io::format_double(mean),
                                              io::format_double(sd), std::to_string(v.size())};
      sw.row(cells);
    }
  }

  if (!runs.empty()) {
    profile_table(out / "work_loops.csv", runs, {"inclination_deg", "force_n_per_kg"},
                  [](const plant::TrialRecord& r) {
                    return Streams{r.inclination_deg, per_kg(r.f_measured, r.body_mass)};
                  });
    profile_table(out / "tracking.csv", runs, {"f_desired_n_per_kg", "f_measured_n_per_kg"},
                  [](const plant::TrialRecord& r) {
                    return Streams{per_kg(r.f_desired, r.body_mass), per_kg(r.f_measured, r.body_mass)};
                  });
    profile_table(out / "emg.csv", runs, {"emg_sum"},
                  [](const plant::TrialRecord& r) { return Streams{r.emg_sum}; });
    profile_table(out / "moments.csv", runs, {"demand_nm", "residual_nm", "m_active_nm", "m_passive_nm"},
                  [](const plant::TrialRecord& r) {
                    return Streams{r.demand, r.residual, r.m_active, r.m_passive};
                  });
    profile_table(out / "compression.csv", runs, {"compression_n"},
                  [](const plant::TrialRecord& r) { return Streams{r.compression}; });
  }
  {
    auto f = io::open_output(out / "cumulative.csv");
    io::CsvWriter w(f, {"condition", "subject", "cycle", "cumulative_kns"});
    for (const auto& run : runs) {
      const std::string cond = condition_label(run.record.controller, run.record.box_mass);
      for (int c = 1; c <= run.metrics.cycles; ++c) {
        const std::vector<std::string> cells = {cond, run.record.subject_id, std::to_string(c),
                                                io::format_double(analysis::cumulative_compression(run.record, c))};
        w.row(cells);
      }
    }
  }
  {
    auto f = io::open_output(out / "gaps.csv");
    io::CsvWriter w(f, {"run_id", "reason"});
    for (const auto& g : rep.gaps) {
      std::string reason = g.reason;
      std::replace(reason.begin(), reason.end(), ',', ';');
      const std::vector<std::string> cells = {g.run_id, reason};
      w.row(cells);
    }
  }
  {
    auto f = io::open_output(out / "acceptance.csv");
    io::CsvWriter w(f, {"criterion", "status", "description", "detail"});
    for (const auto& c : rep.criteria) {
      std::string desc = c.description, detail = c.detail;
      std::replace(desc.begin(), desc.end(), ',', ';');
      std::replace(detail.begin(), detail.end(), ',', ';');
      const std::vector<std::string> cells = {c.id, !c.evaluated ? "GAP" : (c.pass ? "PASS" : "FAIL"),
                                              desc, detail};
      w.row(cells);
    }
  }
  return rep;
}

BenchResult cmd_bench(const model::MskModel& model, long ticks, std::uint64_t seed) {
  BenchResult out;
  out.ticks = std::max(0L, ticks);
  if (out.ticks == 0) return out;

  constexpr double kTick = 1000.0;
  plant::LiftingCycleSpec spec;
  spec.box_mass = 15.0;
  const int cycles = static_cast<int>(std::ceil(out.ticks / (spec.cycle_duration() * kTick))) + 1;
  const auto kin = plant::generate_cycle(spec, cycles);

  // Inputs are prepared up front so only the tick path is timed.
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(out.ticks);
  std::vector<signal::ChannelArray> raw(n);
  std::vector<double> angle(n), velocity(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / kTick;
    const auto j = std::min(kin.t.size() - 1, static_cast<std::size_t>(t * kin.sample_rate));
    angle[k] = kin.l5s1_angle[j];
    velocity[k] = j == 0 ? 0.0 : (kin.l5s1_angle[j] - kin.l5s1_angle[j - 1]) * kin.sample_rate;
    const double level = 0.1 + 0.4 * kin.inclination[j] / (spec.peak_inclination * std::numbers::pi / 180.0);
    for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
      raw[k][c] = level * std::sin(2.0 * std::numbers::pi * 100.0 * t + c) + 0.02 * rng.normal();
    }
  }
  std::vector<signal::EmgProcessor> processors;
  for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
    processors.emplace_back(signal::EmgChannel{std::string(signal::channel_name(c)), 1.0, kTick});
  }
  control::NmbcController nmbc(control::NmbcConfig{});
  auto ws = model.make_workspace();

  out.samples_us.resize(n);
  double sink = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto start = std::chrono::steady_clock::now();
    signal::ChannelArray env{};
    for (std::size_t c = 0; c < env.size(); ++c) env[c] = processors[c].step(raw[k][c]);
    const auto load = model.evaluate(env, angle[k], velocity[k], 0.0, ws);
    sink += nmbc.step(load.m_active).f_total;
    out.samples_us[k] =
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
  }
  if (!std::isfinite(sink)) throw DataError("benchmark produced a non-finite command");

  std::vector<double> sorted = out.samples_us;
  std::sort(sorted.begin(), sorted.end());
  auto rank = [&](double q) {
    const auto i = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n))) - 1;
    return sorted[std::min(n - 1, i)];
  };
  out.p50_us = rank(0.50);
  out.p99_us = rank(0.99);
  out.max_us = sorted.back();
  return out;
}

void write_histogram(const fs::path& path, const BenchResult& r) {
  auto f = io::open_output(path);
  io::CsvWriter w(f, {"bin_lo_us", "bin_hi_us", "count"});
  if (r.samples_us.empty()) return;
  double lo = 0.0, hi = 1.0;
  while (lo <= r.max_us) {
    const auto count = std::count_if(r.samples_us.begin(), r.samples_us.end(),
                                     [&](double v) { return v >= lo && v < hi; });
    const std::vector<double> row = {lo, hi, static_cast<double>(count)};
    w.row(row);
    lo = hi;
    hi *= 2.0;
  }
}

}  // namespace exo::cli

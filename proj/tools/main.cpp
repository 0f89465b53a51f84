#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "exo/io/csv.hpp"

namespace fs = std::filesystem;
using namespace exo;

namespace {

io::ExperimentConfig experiment(const std::string& path, const std::string& out) {
  auto cfg = io::load_experiment(path);
  cli::apply_env(cfg);
  if (!out.empty()) cfg.output_dir = out;
  return cfg;
}

std::vector<double> parse_weights(const std::string& s) {
  std::vector<double> w;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) w.push_back(io::parse_double(tok, "weight"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return w;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated lumbar exosuit experiments: calibration, closed-loop runs, reports"};
  app.require_subcommand(1);

  std::string config, out;
  int jobs = 1;

  auto* synth = app.add_subcommand("synth", "Generate cohort subject configs and calibration trials");
  synth->add_option("-c,--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  synth->add_option("-o,--out", out, "Output directory");

  auto* cal = app.add_subcommand("calibrate", "Calibrate subject models from trial CSVs");
  std::string subject, model_out, trace_out, weights = "5,15";
  std::vector<std::string> trials;
  long max_evals = -1;
  long long cal_seed = -1;
  cal->add_option("-c,--config", config, "Experiment config; calibrates every synthesized subject");
  cal->add_option("-s,--subject", subject, "Subject config (JSON)");
  cal->add_option("-t,--trial", trials, "Calibration trial CSV (repeatable)");
  cal->add_option("-m,--model", model_out, "Calibrated model file to write");
  cal->add_option("--trace", trace_out, "Convergence trace CSV");
  cal->add_option("--weights", weights, "Box masses that need a trial, comma separated");
  cal->add_option("--max-evals", max_evals, "Objective evaluation budget");
  cal->add_option("--seed", cal_seed, "Annealing seed");
  cal->add_option("-o,--out", out, "Output directory (with --config)");
  cal->add_option("-j,--jobs", jobs, "Worker threads (with --config)");

  auto* run = app.add_subcommand("run", "Run every condition for every subject");
  int cycles = -1;
  long long run_seed = -1;
  run->add_option("-c,--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out, "Output directory");
  run->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--cycles", cycles, "Lifting cycles per condition");
  run->add_option("--seed", run_seed, "Experiment seed");

  auto* report = app.add_subcommand("report", "Tables and acceptance summary from a manifest");
  std::string manifest;
  report->add_option("-m,--manifest", manifest, "Manifest CSV")->required();
  report->add_option("-o,--out", out, "Report directory");

  auto* bench = app.add_subcommand("bench", "Per-tick latency of the controller pipeline");
  std::string model_file, histogram;
  long ticks = 10000;
  bench->add_option("-m,--model", model_file, "Calibrated model file")->required();
  bench->add_option("-n,--ticks", ticks, "Ticks to time");
  bench->add_option("--histogram", histogram, "Histogram CSV to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*synth) {
      const auto cfg = experiment(config, out);
      const auto res = cli::cmd_synth(cfg);
      std::cout << "wrote " << res.subject_files.size() << " subject configs and "
                << res.trial_files.size() << " calibration trials under " << cfg.output_dir.string() << "\n";
      return cli::kOk;
    }
    if (*cal) {
      std::vector<cli::CalibrateOutcome> outcomes;
      if (!config.empty()) {
        if (!subject.empty() || !trials.empty()) {
          throw cli::UsageError("--config cannot be combined with --subject or --trial");
        }
        auto cfg = experiment(config, out);
        if (max_evals > 0) cfg.annealing.max_evals = max_evals;
        if (cal_seed >= 0) cfg.annealing.seed = static_cast<std::uint64_t>(cal_seed);
        outcomes = cli::calibrate_cohort(cfg, jobs);
      } else {
        if (subject.empty() || model_out.empty()) {
          throw cli::UsageError("calibrate needs --config, or --subject, --trial and --model");
        }
        cli::CalibrateRequest req;
        req.subject = subject;
        for (const auto& t : trials) req.trials.emplace_back(t);
        req.model_out = model_out;
        req.trace_out = trace_out;
        req.required_weights = parse_weights(weights);
        if (max_evals > 0) req.annealing.max_evals = max_evals;
        if (cal_seed >= 0) req.annealing.seed = static_cast<std::uint64_t>(cal_seed);
        outcomes.push_back(cli::cmd_calibrate(req));
      }
      bool all = true;
      for (const auto& o : outcomes) {
        std::printf("%s: objective %.6g (initial %.6g) after %ld evaluations, %s\n", o.subject_id.c_str(),
                    o.objective, o.initial_objective, o.evaluations,
                    o.converged ? "converged" : "evaluation budget exhausted");
        all = all && o.converged;
      }
      return all ? cli::kOk : cli::kNonConvergence;
    }
    if (*run) {
      auto cfg = experiment(config, out);
      if (cycles > 0) cfg.cycles = cycles;
      if (run_seed >= 0) cfg.seed = static_cast<std::uint64_t>(run_seed);
      const auto m = cli::cmd_run(cfg, jobs);
      std::cout << "manifest: " << m.string() << "\n";
      return cli::kOk;
    }
    if (*report) {
      const auto rep = cli::cmd_report(manifest, out);
      for (const auto& g : rep.gaps) std::cerr << "gap: " << g.run_id << ": " << g.reason << "\n";
      for (const auto& c : rep.criteria) {
        std::printf("%-5s %s  %s\n", c.id.c_str(), !c.evaluated ? "GAP " : (c.pass ? "PASS" : "FAIL"),
                    c.detail.c_str());
      }
      std::cout << "report: " << rep.directory.string() << "\n";
      return cli::kOk;
    }
    if (*bench) {
      const auto file = io::load_model(model_file);
      const auto res = cli::cmd_bench(file.model, ticks);
      std::printf("ticks %ld  p50 %.2f us  p99 %.2f us  max %.2f us\n", res.ticks, res.p50_us, res.p99_us,
                  res.max_us);
      if (!histogram.empty()) cli::write_histogram(histogram, res);
      return cli::kOk;
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kData;
  }
  return cli::kUsage;
}

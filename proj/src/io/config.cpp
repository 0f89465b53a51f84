#include "exo/io/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "exo/error.hpp"

namespace exo::io {

using Json = nlohmann::ordered_json;

namespace {

/// Object view that remembers which keys were read, so leftovers can be
/// reported as unknown.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown key '" + prefix() + k + "'");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("key '" + prefix() + key + "' has the wrong type");
    }
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    static const Json empty = Json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, prefix() + key);
  }

  void skip(const std::string& key) { seen_.insert(key); }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

 private:
  std::string prefix() const { return path_.empty() ? "" : path_ + "."; }
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path q(p);
  if (q.empty() || q.is_absolute() || base.empty()) return q;
  return base / q;
}

}  // namespace

std::filesystem::path ExperimentConfig::resolved_models_dir() const {
  return models_dir.empty() ? output_dir / "models" : models_dir;
}

void ExperimentConfig::validate() const {
  if (weights.empty() || controllers.empty()) throw ConfigError("at least one condition is required");
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("box weights must be non-negative");
  }
  if (subjects.count < 1) throw ConfigError("subject count must be at least 1");
  if (!(subjects.mass_lo > 0.0) || subjects.mass_hi < subjects.mass_lo) {
    throw ConfigError("subject mass range is invalid");
  }
  if (cycles < 1 || calibration_cycles < 1) throw ConfigError("cycle counts must be at least 1");
  if (!(calibration_rate > 0.0)) throw ConfigError("calibration sample rate must be positive");
  if (tick_log.decimation < 1) throw ConfigError("tick log decimation must be at least 1");
  if (!(initial_shape >= bounds.shape_lo && initial_shape <= bounds.shape_hi)) {
    throw ConfigError("initial activation shape lies outside its bounds");
  }
  kinematics.validate();
  loop.validate();
  bounds.validate();
  annealing.validate();
}

ExperimentConfig parse_experiment(const std::string& text, const std::filesystem::path& base) {
  const Json doc = parse_json(text);
  ExperimentConfig c;
  {
    Section root(doc, "");
    if (!root.has("seed")) throw ConfigError("config must set 'seed'");
    root.get("seed", c.seed);
    root.get("cycles", c.cycles);
    std::string out = c.output_dir.string(), models;
    root.get("output_dir", out);
    root.get("models_dir", models);
    c.output_dir = resolve(base, out);
    c.models_dir = resolve(base, models);
    {
      auto s = root.sub("subjects");
      if (!s.has("seed")) throw ConfigError("config must set 'subjects.seed'");
      s.get("count", c.subjects.count);
      s.get("mass_min_kg", c.subjects.mass_lo);
      s.get("mass_max_kg", c.subjects.mass_hi);
      s.get("seed", c.subjects.seed);
    }
    {
      auto s = root.sub("conditions");
      s.get("weights_kg", c.weights);
      if (s.has("controllers")) {
        c.controllers.clear();
        for (const auto& name : s.raw("controllers")) {
          if (!name.is_string()) throw ConfigError("controller names must be strings");
          c.controllers.push_back(plant::controller_from_name(name.get<std::string>()));
        }
      }
    }
    {
      auto s = root.sub("kinematics");
      s.get("phase_duration_s", c.kinematics.phase_duration);
      s.get("peak_inclination_deg", c.kinematics.peak_inclination);
      s.get("sample_rate_hz", c.kinematics.sample_rate);
      s.get("l5s1_ratio", c.kinematics.l5s1_ratio);
      s.get("box_rest_y_m", c.kinematics.box_rest_y);
      s.get("box_clearance_m", c.kinematics.box_clearance);
      s.get("lift_height_m", c.kinematics.lift_height);
    }
    {
      auto s = root.sub("plant");
      s.get("tick_rate_hz", c.loop.tick_rate);
      s.get("record_rate_hz", c.loop.record_rate);
      s.get("carrier_hz", c.loop.carrier_hz);
      s.get("latency_budget_us", c.loop.latency_budget_us);
      auto a = s.sub("actuator");
      a.get("tau_s", c.loop.actuator.tau);
      a.get("noise_sd_n", c.loop.actuator.noise_sd);
      a.get("f_max_n", c.loop.actuator.f_max_hw);
      a.get("ideal", c.loop.actuator.ideal);
    }
    {
      auto s = root.sub("envelope");
      s.get("bandpass_low_hz", c.loop.envelope.bandpass_low_hz);
      s.get("bandpass_high_hz", c.loop.envelope.bandpass_high_hz);
      s.get("lowpass_hz", c.loop.envelope.lowpass_hz);
      s.get("max_envelope", c.loop.envelope.max_envelope);
    }
    {
      auto s = root.sub("nmbc");
      s.get("gain", c.loop.nmbc.gain);
      s.get("cable_arm_m", c.loop.nmbc.cable_arm);
      s.get("delay_s", c.loop.nmbc.delay);
      s.get("lp_cutoff_hz", c.loop.nmbc.lp_cutoff);
      s.get("f_max_n", c.loop.nmbc.f_max_hw);
    }
    {
      auto s = root.sub("vsbc");
      s.get("gain", c.loop.vsbc_gain);
      s.get("reference_deg", c.loop.vsbc_reference_deg);
      s.get("reference_box_kg", c.loop.vsbc_reference_box);
    }
    {
      auto s = root.sub("calibration");
      s.get("cycles", c.calibration_cycles);
      s.get("sample_rate_hz", c.calibration_rate);
      s.get("initial_shape", c.initial_shape);
      auto b = s.sub("bounds");
      b.get("fmax_min", c.bounds.fmax_lo);
      b.get("fmax_max", c.bounds.fmax_hi);
      b.get("lopt_min", c.bounds.lopt_lo);
      b.get("lopt_max", c.bounds.lopt_hi);
      b.get("lts_min", c.bounds.lts_lo);
      b.get("lts_max", c.bounds.lts_hi);
      b.get("shape_min", c.bounds.shape_lo);
      b.get("shape_max", c.bounds.shape_hi);
      auto a = s.sub("annealing");
      a.get("t0", c.annealing.t0);
      a.get("rt", c.annealing.rt);
      a.get("ns", c.annealing.ns);
      a.get("nt", c.annealing.nt);
      a.get("eps", c.annealing.eps);
      a.get("max_evals", c.annealing.max_evals);
      a.get("seed", c.annealing.seed);
      a.get("neps", c.annealing.neps);
    }
    {
      auto s = root.sub("tick_log");
      s.get("enabled", c.tick_log.enabled);
      s.get("decimation", c.tick_log.decimation);
      std::string fmt = "csv";
      s.get("format", fmt);
      if (fmt == "csv") {
        c.tick_log.format = TickFormat::csv;
      } else if (fmt == "binary") {
        c.tick_log.format = TickFormat::binary;
      } else {
        throw ConfigError("tick_log.format must be 'csv' or 'binary'");
      }
    }
  }
  c.loop.nmbc.tick_rate = c.loop.tick_rate;
  c.validate();
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(slurp(path), path.parent_path());
}

std::string dump_experiment(const ExperimentConfig& c) {
  Json controllers = Json::array();
  for (auto k : c.controllers) controllers.push_back(std::string(plant::controller_name(k)));
  Json doc = {
      {"seed", c.seed},
      {"cycles", c.cycles},
      {"output_dir", c.output_dir.string()},
      {"models_dir", c.models_dir.string()},
      {"subjects",
       {{"count", c.subjects.count},
        {"mass_min_kg", c.subjects.mass_lo},
        {"mass_max_kg", c.subjects.mass_hi},
        {"seed", c.subjects.seed}}},
      {"conditions", {{"weights_kg", c.weights}, {"controllers", controllers}}},
      {"kinematics",
       {{"phase_duration_s", c.kinematics.phase_duration},
        {"peak_inclination_deg", c.kinematics.peak_inclination},
        {"sample_rate_hz", c.kinematics.sample_rate},
        {"l5s1_ratio", c.kinematics.l5s1_ratio},
        {"box_rest_y_m", c.kinematics.box_rest_y},
        {"box_clearance_m", c.kinematics.box_clearance},
        {"lift_height_m", c.kinematics.lift_height}}},
      {"plant",
       {{"tick_rate_hz", c.loop.tick_rate},
        {"record_rate_hz", c.loop.record_rate},
        {"carrier_hz", c.loop.carrier_hz},
        {"latency_budget_us", c.loop.latency_budget_us},
        {"actuator",
         {{"tau_s", c.loop.actuator.tau},
          {"noise_sd_n", c.loop.actuator.noise_sd},
          {"f_max_n", c.loop.actuator.f_max_hw},
          {"ideal", c.loop.actuator.ideal}}}}},
      {"envelope",
       {{"bandpass_low_hz", c.loop.envelope.bandpass_low_hz},
        {"bandpass_high_hz", c.loop.envelope.bandpass_high_hz},
        {"lowpass_hz", c.loop.envelope.lowpass_hz},
        {"max_envelope", c.loop.envelope.max_envelope}}},
      {"nmbc",
       {{"gain", c.loop.nmbc.gain},
        {"cable_arm_m", c.loop.nmbc.cable_arm},
        {"delay_s", c.loop.nmbc.delay},
        {"lp_cutoff_hz", c.loop.nmbc.lp_cutoff},
        {"f_max_n", c.loop.nmbc.f_max_hw}}},
      {"vsbc",
       {{"gain", c.loop.vsbc_gain},
        {"reference_deg", c.loop.vsbc_reference_deg},
        {"reference_box_kg", c.loop.vsbc_reference_box}}},
      {"calibration",
       {{"cycles", c.calibration_cycles},
        {"sample_rate_hz", c.calibration_rate},
        {"initial_shape", c.initial_shape},
        {"bounds",
         {{"fmax_min", c.bounds.fmax_lo},
          {"fmax_max", c.bounds.fmax_hi},
          {"lopt_min", c.bounds.lopt_lo},
          {"lopt_max", c.bounds.lopt_hi},
          {"lts_min", c.bounds.lts_lo},
          {"lts_max", c.bounds.lts_hi},
          {"shape_min", c.bounds.shape_lo},
          {"shape_max", c.bounds.shape_hi}}},
        {"annealing",
         {{"t0", c.annealing.t0},
          {"rt", c.annealing.rt},
          {"ns", c.annealing.ns},
          {"nt", c.annealing.nt},
          {"eps", c.annealing.eps},
          {"max_evals", c.annealing.max_evals},
          {"seed", c.annealing.seed},
          {"neps", c.annealing.neps}}}}},
      {"tick_log",
       {{"enabled", c.tick_log.enabled},
        {"format", c.tick_log.format == TickFormat::csv ? "csv" : "binary"},
        {"decimation", c.tick_log.decimation}}}};
  return doc.dump(2) + "\n";
}

SubjectConfig subject_config(const plant::SyntheticSubject& s) { return {s.id, s.anthro, s.mvc}; }

SubjectConfig parse_subject(const std::string& text) {
  const Json doc = parse_json(text);
  SubjectConfig c;
  {
    Section root(doc, "");
    root.get("id", c.id);
    if (c.id.empty()) throw ConfigError("subject config needs an 'id'");
    {
      auto a = root.sub("anthropometry");
      a.get("body_mass_kg", c.anthro.body_mass);
      a.get("trunk_mass_fraction", c.anthro.trunk_mass_fraction);
      a.get("trunk_com_distance_m", c.anthro.trunk_com_distance);
      a.get("hand_lever_upright_m", c.anthro.hand_lever_upright);
      a.get("hand_lever_gain_m", c.anthro.hand_lever_gain);
    }
    {
      auto m = root.sub("mvc");
      for (std::size_t i = 0; i < signal::kNumChannels; ++i) {
        const std::string name(signal::channel_name(i));
        if (!m.has(name)) throw ConfigError("subject config lacks an MVC value for " + name);
        m.get(name, c.mvc[i]);
        if (!(c.mvc[i] > 0.0)) throw ConfigError("MVC values must be positive");
      }
    }
    root.skip("synthetic");
  }
  c.anthro.validate();
  return c;
}

SubjectConfig load_subject(const std::filesystem::path& path) { return parse_subject(slurp(path)); }

std::string dump_subject(const plant::SyntheticSubject& s) {
  Json mvc = Json::object(), phase = Json::object(), expo = Json::object();
  for (std::size_t i = 0; i < signal::kNumChannels; ++i) {
    const std::string name(signal::channel_name(i));
    mvc[name] = s.mvc[i];
    phase[name] = s.carrier_phase[i];
    expo[name] = s.recruitment_exponent[i];
  }
  Json doc = {{"id", s.id},
              {"anthropometry",
               {{"body_mass_kg", s.anthro.body_mass},
                {"trunk_mass_fraction", s.anthro.trunk_mass_fraction},
                {"trunk_com_distance_m", s.anthro.trunk_com_distance},
                {"hand_lever_upright_m", s.anthro.hand_lever_upright},
                {"hand_lever_gain_m", s.anthro.hand_lever_gain}}},
              {"mvc", mvc},
              {"synthetic",
               {{"emg_noise_sd", s.emg_noise_sd},
                {"cocontraction_level", s.cocontraction_level},
                {"activation_shape", s.activation_shape},
                {"carrier_phase_rad", phase},
                {"recruitment_exponent", expo}}}};
  return doc.dump(2) + "\n";
}

}  // namespace exo::io

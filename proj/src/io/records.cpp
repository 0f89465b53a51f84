#include "exo/io/records.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "exo/error.hpp"
#include "exo/io/csv.hpp"

namespace exo::io {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;
constexpr char kTickMagic[8] = {'E', 'X', 'O', 'T', 'I', 'C', 'K', '1'};

const std::vector<std::string> kRecordColumns = {
    "t_s",         "inclination_deg", "demand_nm",   "residual_nm", "m_active_nm",
    "m_passive_nm", "compression_n",  "f_desired_n", "f_measured_n", "emg_sum"};

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
void put_le(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) throw DataError("truncated binary tick log");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::vector<double> tick_values(const plant::TickRow& r) {
  std::vector<double> v = {r.t,        r.inclination_deg, r.demand,    r.assist,
                           r.residual, r.m_active,        r.m_passive, r.compression,
                           r.f_desired, r.f_measured,     r.latency_us};
  v.insert(v.end(), r.envelopes.begin(), r.envelopes.end());
  return v;
}

}  // namespace

void write_trial_record(const std::filesystem::path& path, const plant::TrialRecord& r) {
  auto out = open_output(path);
  out << "# subject_id=" << r.subject_id << '\n'
      << "# controller=" << plant::controller_name(r.controller) << '\n'
      << "# box_mass_kg=" << format_double(r.box_mass) << '\n'
      << "# body_mass_kg=" << format_double(r.body_mass) << '\n'
      << "# n_cycles=" << r.n_cycles << '\n'
      << "# cycle_duration_s=" << format_double(r.cycle_duration) << '\n'
      << "# sample_rate_hz=" << format_double(r.sample_rate) << '\n'
      << "# saturated_ticks=" << r.saturated_ticks << '\n'
      << "# diagnostics=" << r.diagnostics << '\n';
  CsvWriter w(out, kRecordColumns);
  std::vector<double> row(kRecordColumns.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    row = {r.t[i],        r.inclination_deg[i], r.demand[i],    r.residual[i],   r.m_active[i],
           r.m_passive[i], r.compression[i],    r.f_desired[i], r.f_measured[i], r.emg_sum[i]};
    w.row(row);
  }
  if (!out) throw DataError("failed writing " + path.string());
}

plant::TrialRecord read_trial_record(const std::filesystem::path& path) {
  const std::string text = read_all(path);
  std::map<std::string, std::string> meta;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("# ", 0) != 0) continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw DataError(path.string() + ": missing metadata '" + key + "'");
    return it->second;
  };
  plant::TrialRecord r;
  r.subject_id = need("subject_id");
  r.controller = plant::controller_from_name(need("controller"));
  r.box_mass = parse_double(need("box_mass_kg"), "box_mass_kg");
  r.body_mass = parse_double(need("body_mass_kg"), "body_mass_kg");
  r.n_cycles = static_cast<int>(parse_double(need("n_cycles"), "n_cycles"));
  r.cycle_duration = parse_double(need("cycle_duration_s"), "cycle_duration_s");
  r.sample_rate = parse_double(need("sample_rate_hz"), "sample_rate_hz");
  r.saturated_ticks = static_cast<long>(parse_double(need("saturated_ticks"), "saturated_ticks"));
  r.diagnostics = static_cast<long>(parse_double(need("diagnostics"), "diagnostics"));

  std::istringstream body(text);
  const CsvTable t = parse_csv(body, path.string());
  r.t = t.numeric("t_s");
  r.inclination_deg = t.numeric("inclination_deg");
  r.demand = t.numeric("demand_nm");
  r.residual = t.numeric("residual_nm");
  r.m_active = t.numeric("m_active_nm");
  r.m_passive = t.numeric("m_passive_nm");
  r.compression = t.numeric("compression_n");
  r.f_desired = t.numeric("f_desired_n");
  r.f_measured = t.numeric("f_measured_n");
  r.emg_sum = t.numeric("emg_sum");
  return r;
}

std::vector<std::string> tick_columns() {
  std::vector<std::string> c = {"t_s",           "inclination_deg", "demand_nm",    "assist_nm",
                                "residual_nm",   "m_active_nm",     "m_passive_nm", "compression_n",
                                "f_desired_n",   "f_measured_n",    "latency_us"};
  for (std::size_t i = 0; i < signal::kNumChannels; ++i) {
    c.push_back("env_" + std::string(signal::channel_name(i)));
  }
  return c;
}

void write_tick_log(const std::filesystem::path& path, const plant::TickLog& log, TickFormat format) {
  const auto cols = tick_columns();
  if (format == TickFormat::csv) {
    auto out = open_output(path);
    CsvWriter w(out, cols);
    for (const auto& r : log.rows) w.row(tick_values(r));
    if (!out) throw DataError("failed writing " + path.string());
    return;
  }
  auto out = open_output(path, true);
  out.write(kTickMagic, sizeof kTickMagic);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cols.size()));
  put_le<std::uint64_t>(out, log.rows.size());
  for (const auto& c : cols) {
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(c.size()));
    out.write(c.data(), static_cast<std::streamsize>(c.size()));
  }
  for (const auto& r : log.rows) {
    for (double v : tick_values(r)) put_le<double>(out, v);
  }
  if (!out) throw DataError("failed writing " + path.string());
}

TickTable read_tick_log_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kTickMagic, sizeof magic) != 0) {
    throw DataError(path.string() + " is not a binary tick log");
  }
  const auto ncols = get_le<std::uint32_t>(in);
  const auto nrows = get_le<std::uint64_t>(in);
  TickTable t;
  for (std::uint32_t i = 0; i < ncols; ++i) {
    const auto len = get_le<std::uint16_t>(in);
    std::string name(len, '\0');
    if (!in.read(name.data(), len)) throw DataError("truncated binary tick log");
    t.columns.push_back(std::move(name));
  }
  t.data.assign(ncols, std::vector<double>(nrows));
  for (std::uint64_t r = 0; r < nrows; ++r) {
    for (std::uint32_t c = 0; c < ncols; ++c) t.data[c][r] = get_le<double>(in);
  }
  return t;
}

void write_calibration_trial(const std::filesystem::path& path,
                             const calibration::TrialStreams& s) {
  const std::size_t n = s.t.size();
  if (s.inclination.size() != n || s.l5s1_angle.size() != n || s.box_y.size() != n ||
      s.envelopes.size() != n || (s.ref_moment && s.ref_moment->size() != n)) {
    throw DataError("calibration trial streams are misaligned");
  }
  std::vector<std::string> cols = {"time_s", "inclination_deg", "l5s1_deg", "box_y_m", "box_mass_kg"};
  if (s.ref_moment) cols.push_back("ref_moment_nm");
  for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
    cols.push_back("env_" + std::string(signal::channel_name(c)));
  }
  auto out = open_output(path);
  CsvWriter w(out, cols);
  std::vector<double> row;
  for (std::size_t i = 0; i < n; ++i) {
    row = {s.t[i], s.inclination[i] * kDeg, s.l5s1_angle[i] * kDeg, s.box_y[i], s.box_mass};
    if (s.ref_moment) row.push_back((*s.ref_moment)[i]);
    row.insert(row.end(), s.envelopes[i].begin(), s.envelopes[i].end());
    w.row(row);
  }
  if (!out) throw DataError("failed writing " + path.string());
}

calibration::TrialStreams read_calibration_trial(const std::filesystem::path& path,
                                                 const SubjectConfig& subject, double target_rate,
                                                 const signal::EnvelopeConfig& envelope) {
  const CsvTable table = read_csv(path);
  const auto t = table.numeric("time_s");
  if (t.size() < 2) throw DataError(path.string() + ": calibration trial needs at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs(t[i] - t[i - 1] - dt) > 1e-6 * std::max(1.0, dt) + 1e-9) {
      throw DataError(path.string() + ": time_s must be uniformly sampled");
    }
  }
  const double rate = 1.0 / dt;

  bool have_env = true, have_raw = true;
  for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
    const std::string name(signal::channel_name(c));
    have_env = have_env && table.find("env_" + name).has_value();
    have_raw = have_raw && table.find("emg_" + name).has_value();
  }
  if (!have_env && !have_raw) {
    throw DataError(path.string() + ": needs env_<channel> or emg_<channel> columns for all eight channels");
  }

  std::vector<std::vector<double>> channels(signal::kNumChannels);
  for (std::size_t c = 0; c < signal::kNumChannels; ++c) {
    const std::string name(signal::channel_name(c));
    if (have_env) {
      channels[c] = table.numeric("env_" + name);
    } else {
      const auto raw = table.numeric("emg_" + name);
      channels[c] = signal::process_emg(raw, signal::EmgChannel{name, subject.mvc[c], rate}, envelope);
    }
  }

  std::size_t stride = 1;
  if (have_raw && !have_env) {
    if (!(target_rate > 0.0) || target_rate > rate) throw DataError("invalid calibration rate");
    const double ratio = rate / target_rate;
    stride = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(stride)) > 1e-6) {
      throw DataError(path.string() + ": file rate is not a multiple of the calibration rate");
    }
  }

  const auto incl = table.numeric("inclination_deg");
  const auto l5s1 = table.numeric("l5s1_deg");
  const auto box_y = table.numeric("box_y_m");
  const auto mass = table.numeric("box_mass_kg");
  std::optional<std::vector<double>> ref;
  if (table.find("ref_moment_nm")) ref = table.numeric("ref_moment_nm");

  calibration::TrialStreams s;
  s.box_mass = mass.front();
  for (double m : mass) {
    if (m != s.box_mass) throw DataError(path.string() + ": box_mass_kg must be constant");
  }
  s.box_rest_y = box_y.front();
  if (ref) s.ref_moment.emplace();
  for (std::size_t i = 0; i < t.size(); i += stride) {
    s.t.push_back(t[i]);
    s.inclination.push_back(incl[i] / kDeg);
    s.l5s1_angle.push_back(l5s1[i] / kDeg);
    s.box_y.push_back(box_y[i]);
    signal::ChannelArray e{};
    for (std::size_t c = 0; c < e.size(); ++c) e[c] = channels[c][i];
    s.envelopes.push_back(e);
    if (ref) s.ref_moment->push_back((*ref)[i]);
  }
  return s;
}

void write_trace(const std::filesystem::path& path, const std::vector<calibration::TracePoint>& trace) {
  auto out = open_output(path);
  CsvWriter w(out, {"eval_index", "temperature", "objective_best"});
  for (const auto& p : trace) {
    const std::vector<std::string> cells = {std::to_string(p.eval_index), format_double(p.temperature),
                                            format_double(p.objective_best)};
    w.row(cells);
  }
  if (!out) throw DataError("failed writing " + path.string());
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  auto out = open_output(path);
  CsvWriter w(out, {"run_id", "subject", "controller", "box_mass_kg", "order", "seed", "cycles",
                    "record", "ticks"});
  for (const auto& e : entries) {
    const std::vector<std::string> cells = {e.run_id,
                                            e.subject,
                                            std::string(plant::controller_name(e.controller)),
                                            format_double(e.box_mass),
                                            std::to_string(e.order),
                                            std::to_string(e.seed),
                                            std::to_string(e.cycles),
                                            e.record,
                                            e.ticks};
    w.row(cells);
  }
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<ManifestEntry> out;
  const auto id = t.require("run_id"), subj = t.require("subject"), ctrl = t.require("controller"),
             mass = t.require("box_mass_kg"), order = t.require("order"), seed = t.require("seed"),
             cyc = t.require("cycles"), rec = t.require("record"), ticks = t.require("ticks");
  for (const auto& r : t.rows) {
    ManifestEntry e;
    e.run_id = r[id];
    e.subject = r[subj];
    e.controller = plant::controller_from_name(r[ctrl]);
    e.box_mass = parse_double(r[mass], "box_mass_kg");
    e.order = static_cast<int>(parse_double(r[order], "order"));
    try {
      e.seed = std::stoull(r[seed]);
    } catch (const std::exception&) {
      throw DataError("bad seed in manifest: " + r[seed]);
    }
    e.cycles = static_cast<int>(parse_double(r[cyc], "cycles"));
    e.record = r[rec];
    e.ticks = r[ticks];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace exo::io

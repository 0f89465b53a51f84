#include "exo/io/model_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "exo/error.hpp"
#include "exo/io/csv.hpp"

namespace exo::io {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json params_json(const muscle::MtuParameters& p) {
  return Json{{"f_max_n", p.max_isometric_force},
              {"l_opt_m", p.optimal_fiber_length},
              {"l_ts_m", p.tendon_slack_length},
              {"pennation_rad", p.pennation_at_optimal},
              {"damping", p.damping}};
}

muscle::MtuParameters params_from(const Json& j) {
  muscle::MtuParameters p;
  p.max_isometric_force = j.at("f_max_n").get<double>();
  p.optimal_fiber_length = j.at("l_opt_m").get<double>();
  p.tendon_slack_length = j.at("l_ts_m").get<double>();
  p.pennation_at_optimal = j.at("pennation_rad").get<double>();
  p.damping = j.at("damping").get<double>();
  return p;
}

Json body_json(const CalibratedModelFile& f) {
  const auto& m = f.model;
  Json cal = {{"objective", f.calibration.objective},
              {"initial_objective", f.calibration.initial_objective},
              {"evaluations", f.calibration.evaluations},
              {"converged", f.calibration.converged},
              {"seed", f.calibration.seed}};
  Json vars = Json::object();
  if (f.calibration.variable_names.size() != f.calibration.variables.size()) {
    throw DataError("calibration variable names and values differ in length");
  }
  for (std::size_t i = 0; i < f.calibration.variables.size(); ++i) {
    vars[f.calibration.variable_names[i]] = f.calibration.variables[i];
  }
  cal["variables"] = vars;

  Json mtus = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& d = m.roster().mtus[i];
    const auto coeffs = m.surrogate().coefficients(i);
    mtus.push_back({{"name", d.name},
                    {"group", d.group},
                    {"side", d.side == model::Side::left ? "L" : "R"},
                    {"geometry",
                     {{"rest_length_m", d.geometry.rest_length},
                      {"base_moment_arm_m", d.geometry.base_moment_arm},
                      {"arm_slope_m_per_rad", d.geometry.arm_slope},
                      {"axial_dir", d.geometry.axial_dir}}},
                    {"nominal", params_json(d.nominal)},
                    {"parameters", params_json(m.parameters()[i])},
                    {"spline", std::vector<double>(coeffs.begin(), coeffs.end())}});
  }
  return Json{{"format_version", f.version},
              {"subject_id", f.subject_id},
              {"body_mass_kg", f.body_mass},
              {"activation_shape", m.activation_shape()},
              {"calibration", cal},
              {"knots", m.surrogate().knots().knots()},
              {"mtus", mtus}};
}

std::string canonical(const Json& body) { return body.dump(1); }

}  // namespace

std::string serialize(const CalibratedModelFile& file) {
  Json body = body_json(file);
  const std::string sum = hex(fnv1a64(canonical(body)));
  body["checksum"] = sum;
  return body.dump(1) + "\n";
}

CalibratedModelFile deserialize(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.contains("format_version")) throw DataError("model file has no format_version");
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format version " + std::to_string(version));
    }
    if (!doc.contains("checksum")) throw DataError("model file has no checksum");
    const std::string stored = doc.at("checksum").get<std::string>();
    doc.erase("checksum");
    if (hex(fnv1a64(canonical(doc))) != stored) throw DataError("model file checksum mismatch");

    model::Roster roster;
    std::vector<muscle::MtuParameters> params;
    std::vector<double> coeffs;
    const auto& mtus = doc.at("mtus");
    for (const auto& j : mtus) {
      model::MtuDescriptor d;
      d.name = j.at("name").get<std::string>();
      d.group = j.at("group").get<std::string>();
      const auto side = j.at("side").get<std::string>();
      if (side != "L" && side != "R") throw DataError("MTU side must be L or R");
      d.side = side == "L" ? model::Side::left : model::Side::right;
      const auto& g = j.at("geometry");
      d.geometry.rest_length = g.at("rest_length_m").get<double>();
      d.geometry.base_moment_arm = g.at("base_moment_arm_m").get<double>();
      d.geometry.arm_slope = g.at("arm_slope_m_per_rad").get<double>();
      d.geometry.axial_dir = g.at("axial_dir").get<double>();
      d.nominal = params_from(j.at("nominal"));
      params.push_back(params_from(j.at("parameters")));
      const auto spline = j.at("spline").get<std::vector<double>>();
      coeffs.insert(coeffs.end(), spline.begin(), spline.end());
      roster.mtus.push_back(std::move(d));
    }
    auto knots = geometry::CubicKnots::from_knot_vector(doc.at("knots").get<std::vector<double>>());
    if (coeffs.size() != knots.num_basis() * roster.size()) {
      throw DataError("spline coefficient count does not match the knot vector");
    }
    const std::size_t n = roster.size();
    geometry::BSplineSurrogate surrogate(std::move(knots), std::move(coeffs), n);
    model::MskModel m(std::move(roster), std::move(surrogate), std::move(params),
                      doc.at("activation_shape").get<double>());

    CalibrationInfo info;
    const auto& cal = doc.at("calibration");
    info.objective = cal.at("objective").get<double>();
    info.initial_objective = cal.at("initial_objective").get<double>();
    info.evaluations = cal.at("evaluations").get<long>();
    info.converged = cal.at("converged").get<bool>();
    info.seed = cal.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : cal.at("variables").items()) {
      info.variable_names.push_back(k);
      info.variables.push_back(v.get<double>());
    }
    return CalibratedModelFile{version, doc.at("subject_id").get<std::string>(),
                               doc.at("body_mass_kg").get<double>(), std::move(m),
                               std::move(info)};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("inconsistent model file: ") + e.what());
  } catch (const InvalidSpec& e) {
    throw DataError(std::string("inconsistent model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const CalibratedModelFile& file) {
  auto out = open_output(path, true);
  out << serialize(file);
  if (!out) throw DataError("failed writing " + path.string());
}

CalibratedModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace exo::io

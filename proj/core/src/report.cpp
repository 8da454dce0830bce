#include "wlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <utility>

#include "json.hpp"

namespace wlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError("config: " + message);
}

const std::set<std::string>& known_commands() {
  static const std::set<std::string> commands{
      "verify", "expand", "landscape", "spectrum", "mobius", "schwarzschild"};
  return commands;
}

const std::set<std::string>& known_suites() {
  static const std::set<std::string> suites{"all", "flat", "invariance",
                                            "oracle"};
  return suites;
}

double require_real(const json& j, const std::string& key) {
  if (!j.is_number()) fail("'" + key + "' must be a number");
  return j.get<double>();
}

Vec3 require_triple(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) fail("'" + key + "' must be a 3-array");
  Vec3 v;
  for (int k = 0; k < 3; ++k) v[k] = require_real(j[static_cast<std::size_t>(k)], key);
  return v;
}

void parse_model(const json& spec, ExperimentConfig& config) {
  if (!spec.is_object()) fail("'model' must be an object");
  for (const auto& item : spec.items()) {
    const std::string& key = item.key();
    if (key != "kind" && key != "ric" && key != "sc" && key != "m" &&
        key != "name")
      fail("unknown model key '" + key + "'");
  }
  if (!spec.contains("kind") || !spec["kind"].is_string())
    fail("'model.kind' must be a string");
  const std::string kind = spec["kind"].get<std::string>();
  config.model_kind = kind;
  if (kind == "euclidean") {
    // no parameters
  } else if (kind == "constant") {
    if (spec.contains("sc")) config.model_scalar = require_real(spec["sc"], "model.sc");
  } else if (kind == "synthetic") {
    if (!spec.contains("ric")) fail("'model.ric' required for synthetic models");
    const json& ric = spec["ric"];
    Mat3 m = Mat3::Zero();
    if (ric.is_array() && ric.size() == 3) {
      for (int k = 0; k < 3; ++k)
        m(k, k) = require_real(ric[static_cast<std::size_t>(k)], "model.ric");
    } else if (ric.is_array() && ric.size() == 9) {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          m(r, c) = require_real(ric[static_cast<std::size_t>(3 * r + c)],
                                 "model.ric");
      m = ((m + m.transpose()) / 2.0).eval();
    } else {
      fail("'model.ric' must have 3 (diagonal) or 9 (row-major) entries");
    }
    config.model_ricci = m;
  } else if (kind == "schwarzschild") {
    if (spec.contains("m")) config.model_mass = require_real(spec["m"], "model.m");
    if (!(config.model_mass > 0.0)) fail("'model.m' must be positive");
  } else if (kind == "field") {
    if (!spec.contains("name") || !spec["name"].is_string())
      fail("'model.name' required for field models");
    config.field_name = spec["name"].get<std::string>();
    if (config.field_name != "peaked-scalar" &&
        config.field_name != "axial-anisotropy")
      fail("unknown field '" + config.field_name +
           "' (expected peaked-scalar or axial-anisotropy)");
  } else {
    fail("unknown model kind '" + kind + "'");
  }
}

json model_to_json(const ExperimentConfig& config) {
  json spec;
  spec["kind"] = config.model_kind;
  if (config.model_kind == "constant") spec["sc"] = config.model_scalar;
  if (config.model_kind == "synthetic") {
    std::vector<double> entries;
    entries.reserve(9);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) entries.push_back(config.model_ricci(r, c));
    spec["ric"] = entries;
  }
  if (config.model_kind == "schwarzschild") spec["m"] = config.model_mass;
  if (config.model_kind == "field") spec["name"] = config.field_name;
  return spec;
}

void validate(const ExperimentConfig& config) {
  if (known_commands().count(config.command) == 0)
    fail("unknown command '" + config.command + "'");
  if (known_suites().count(config.suite) == 0)
    fail("unknown suite '" + config.suite + "'");
  if (config.epsilons.empty()) fail("'epsilons' must be nonempty");
  for (double eps : config.epsilons)
    if (!(eps > 0.0) || eps > 0.2)
      fail("every epsilon must lie in (0, 0.2]");
  if (config.omega_moduli.empty()) fail("'omega_moduli' must be nonempty");
  for (double m : config.omega_moduli)
    if (!(m >= 0.0) || m > 0.995) fail("omega moduli must lie in [0, 0.995]");
  if (!(config.omega_boundary > 0.0) || config.omega_boundary > 0.95)
    fail("'omega_boundary' must lie in (0, 0.95]");
  if (config.resolution < 0) fail("'resolution' must be nonnegative");
  if (config.truncation < 4 || config.truncation > 38)
    fail("'truncation' must lie in [4, 38]");
  if (!(config.tolerance > 0.0)) fail("'tolerance' must be positive");
  if (!(config.eta > 0.0)) fail("'eta' must be positive");
  if (config.axis.norm() < 1e-12) fail("'axis' must be nonzero");
  if (config.output_dir.empty()) fail("'output_dir' must be nonempty");
}

json vec_to_json(const Vec3& v) {
  return json::array({v.x(), v.y(), v.z()});
}

void append_row(std::string& out, const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ',';
    out += format_real(values[k]);
  }
  out += '\n';
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    fail(std::string("not valid JSON: ") + ex.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  ExperimentConfig config;
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    const json& value = item.value();
    if (key == "command") {
      if (!value.is_string()) fail("'command' must be a string");
      config.command = value.get<std::string>();
    } else if (key == "model") {
      parse_model(value, config);
    } else if (key == "epsilons") {
      if (!value.is_array() || value.empty()) fail("'epsilons' must be a nonempty array");
      config.epsilons.clear();
      for (const json& e : value) config.epsilons.push_back(require_real(e, "epsilons"));
    } else if (key == "omega_moduli") {
      if (!value.is_array() || value.empty())
        fail("'omega_moduli' must be a nonempty array");
      config.omega_moduli.clear();
      for (const json& m : value)
        config.omega_moduli.push_back(require_real(m, "omega_moduli"));
    } else if (key == "omega_boundary") {
      config.omega_boundary = require_real(value, key);
    } else if (key == "resolution") {
      if (!value.is_number_integer()) fail("'resolution' must be an integer");
      config.resolution = value.get<int>();
    } else if (key == "truncation") {
      if (!value.is_number_integer()) fail("'truncation' must be an integer");
      config.truncation = value.get<int>();
    } else if (key == "tolerance") {
      config.tolerance = require_real(value, key);
    } else if (key == "eta") {
      config.eta = require_real(value, key);
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer())
        fail("'seed' must be an integer");
      const std::int64_t seed = value.get<std::int64_t>();
      if (seed < 0) fail("'seed' must be nonnegative");
      config.seed = static_cast<std::uint64_t>(seed);
    } else if (key == "suite") {
      if (!value.is_string()) fail("'suite' must be a string");
      config.suite = value.get<std::string>();
    } else if (key == "output_dir") {
      if (!value.is_string()) fail("'output_dir' must be a string");
      config.output_dir = value.get<std::string>();
    } else if (key == "base_point") {
      config.base_point = require_triple(value, key);
    } else if (key == "axis") {
      config.axis = require_triple(value, key);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (config.command.empty()) fail("'command' is required");
  validate(config);
  canonicalize(config);
  return config;
}

ExperimentConfig default_config(const std::string& command) {
  ExperimentConfig config;
  config.command = command;
  validate(config);
  canonicalize(config);
  return config;
}

void canonicalize(ExperimentConfig& config) {
  validate(config);
  // The canonical text covers the experiment-defining keys only; the output
  // directory changes where files land, not what is computed, and must not
  // disturb the config stamp carried by those files.
  json doc;
  doc["axis"] = vec_to_json(config.axis);
  doc["base_point"] = vec_to_json(config.base_point);
  doc["command"] = config.command;
  doc["epsilons"] = config.epsilons;
  doc["eta"] = config.eta;
  doc["model"] = model_to_json(config);
  doc["omega_boundary"] = config.omega_boundary;
  doc["omega_moduli"] = config.omega_moduli;
  doc["resolution"] = config.resolution;
  doc["seed"] = config.seed;
  doc["suite"] = config.suite;
  doc["tolerance"] = config.tolerance;
  doc["truncation"] = config.truncation;
  config.canonical = doc.dump();
}

bool config_is_field(const ExperimentConfig& config) {
  return config.model_kind == "field";
}

MetricModel model_from_config(const ExperimentConfig& config) {
  if (config.model_kind == "euclidean") return euclidean_metric();
  if (config.model_kind == "constant")
    return constant_curvature_metric(config.model_scalar);
  if (config.model_kind == "synthetic")
    return normal_expansion(synthetic_curvature(config.model_ricci));
  if (config.model_kind == "schwarzschild")
    return schwarzschild_metric(config.model_mass);
  if (config.model_kind == "field") {
    // Point evaluation of the chart family at the configured base point.
    const CurvatureField field = field_from_config(config);
    return normal_expansion(field.at(config.base_point));
  }
  fail("model kind '" + config.model_kind + "' has no metric model");
}

CurvatureField field_from_config(const ExperimentConfig& config) {
  if (config.model_kind != "field")
    fail("command requires a field model (kind='field')");
  if (config.field_name == "peaked-scalar") return minimum_condition_field();
  return two_sided_condition_field();
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a64(config.canonical);
}

std::string hash_hex(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return std::string(buffer);
}

std::string landscape_csv(const LandscapeTable& table, std::uint64_t hash) {
  std::string out = "# config=" + hash_hex(hash) + "\n";
  out += "P_x,P_y,P_z,axis_x,axis_y,axis_z,omega_x,omega_y,energy\n";
  for (const LandscapePoint& row : table.rows)
    append_row(out, {row.point.x(), row.point.y(), row.point.z(),
                     row.axis.x(), row.axis.y(), row.axis.z(),
                     row.omega.x(), row.omega.y(), row.energy});
  return out;
}

std::string fit_csv(const ExpansionFit& fit, std::uint64_t hash) {
  std::string out = "# config=" + hash_hex(hash) + "\n";
  const bool degenerate = !fit.coefficients.empty();
  if (degenerate) {
    out += "modulus,energy,coefficient,deviation,c_lead,target,rel_error\n";
    for (std::size_t k = 0; k < fit.abscissae.size(); ++k)
      append_row(out, {fit.abscissae[k], fit.energies[k], fit.coefficients[k],
                       fit.deviations[k], fit.c_lead, fit.target,
                       fit.rel_error});
  } else {
    out += "abscissa,energy,c0,c_lead,target,rel_error,residual_norm\n";
    for (std::size_t k = 0; k < fit.abscissae.size(); ++k)
      append_row(out, {fit.abscissae[k], fit.energies[k], fit.c0, fit.c_lead,
                       fit.target, fit.rel_error, fit.residual_norm});
  }
  return out;
}

std::string spectrum_csv(const SpectrumReport& report, std::uint64_t hash) {
  std::string out = "# config=" + hash_hex(hash) + "\n";
  out += "index,eigenvalue\n";
  for (std::size_t k = 0; k < report.eigenvalues.size(); ++k)
    out += std::to_string(k) + "," + format_real(report.eigenvalues[k]) + "\n";
  return out;
}

std::string to_json_text(const ExpansionFit& fit) {
  json doc;
  doc["abscissae"] = fit.abscissae;
  doc["energies"] = fit.energies;
  doc["c0"] = fit.c0;
  doc["c_lead"] = fit.c_lead;
  doc["target"] = fit.target;
  doc["rel_error"] = fit.rel_error;
  doc["residual_norm"] = fit.residual_norm;
  doc["quadratic_lead"] = fit.quadratic_lead;
  doc["quadratic_residual"] = fit.quadratic_residual;
  doc["refined_power"] = fit.refined_power;
  if (!fit.coefficients.empty()) {
    doc["coefficients"] = fit.coefficients;
    doc["deviations"] = fit.deviations;
  }
  if (!fit.row_refinement.empty()) doc["row_refinement"] = fit.row_refinement;
  return doc.dump(2);
}

std::string to_json_text(const SpectrumReport& report) {
  json doc;
  doc["eigenvalues"] = report.eigenvalues;
  doc["near_kernel_count"] = report.near_kernel_count;
  doc["threshold"] = report.threshold;
  doc["gap"] = report.gap;
  doc["threshold_valid"] = report.threshold_valid;
  return doc.dump(2);
}

std::string to_json_text(const CorrectorResult& result) {
  json doc;
  doc["phi_sup"] = result.phi.size() > 0 ? result.phi.cwiseAbs().maxCoeff() : 0.0;
  doc["grid"] = json::array({result.phi.rows(), result.phi.cols()});
  doc["beta"] = result.beta;
  doc["residual_history"] = result.residual_history;
  doc["area_error"] = result.area_error;
  return doc.dump(2);
}

std::string to_json_text(const ConditionReport& report) {
  json doc;
  doc["lhs1"] = report.lhs1;
  doc["rhs1"] = report.rhs1;
  doc["lhs2"] = report.lhs2;
  doc["rhs2"] = report.rhs2;
  doc["assump1_holds"] = report.assump1_holds;
  doc["assump2_holds"] = report.assump2_holds;
  doc["witness1_point"] = vec_to_json(report.witness1_point);
  doc["witness1_direction"] = vec_to_json(report.witness1_direction);
  doc["witness2_point"] = vec_to_json(report.witness2_point);
  doc["witness2_direction"] = vec_to_json(report.witness2_direction);
  doc["witness1_via_ricci"] = report.witness1_via_ricci;
  doc["witness1_via_sectional"] = report.witness1_via_sectional;
  doc["witness2_via_ricci"] = report.witness2_via_ricci;
  doc["witness2_via_sectional"] = report.witness2_via_sectional;
  doc["direction_sample_gap"] = report.direction_sample_gap;
  return doc.dump(2);
}

std::string to_json_text(const ExtremizeResult& result) {
  json doc;
  json extremum;
  extremum["point"] = vec_to_json(result.extremum.point);
  extremum["axis"] = vec_to_json(result.extremum.axis);
  extremum["omega"] =
      json::array({result.extremum.omega.x(), result.extremum.omega.y()});
  extremum["energy"] = result.extremum.energy;
  extremum["corrected"] = result.extremum.corrected;
  doc["extremum"] = extremum;
  doc["boundary_best"] = result.boundary_best;
  doc["boundary_rows"] = result.boundary.rows.size();
  doc["margin"] = result.margin;
  doc["interior"] = result.interior;
  doc["multipliers"] = result.multipliers;
  doc["stationarity_scale"] = result.stationarity_scale;
  return doc.dump(2);
}

std::string summary_json(const std::vector<CheckResult>& checks,
                         std::uint64_t hash) {
  json doc;
  doc["config"] = hash_hex(hash);
  bool all = true;
  json rows = json::array();
  for (const CheckResult& check : checks) {
    json row;
    row["name"] = check.name;
    row["passed"] = check.passed;
    row["detail"] = check.detail;
    rows.push_back(row);
    all = all && check.passed;
  }
  doc["checks"] = rows;
  doc["all_passed"] = all;
  return doc.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot open for writing: " + path);
  stream << content;
  if (!stream) throw std::runtime_error("write failed: " + path);
}

}  // namespace wlab

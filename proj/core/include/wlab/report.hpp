#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wlab/corrector.hpp"
#include "wlab/metrics.hpp"
#include "wlab/reduction.hpp"
#include "wlab/variational.hpp"

namespace wlab {

// Configuration failure distinct from numerical failure: the command-line
// front end maps ConfigError to its dedicated exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed experiment description.  `canonical` holds the normalized JSON
// rendering (all fields, sorted keys) that seeds the config hash, so two
// configs that parse identically always hash identically.
struct ExperimentConfig {
  std::string command;

  // Model spec.  kind is one of euclidean | constant | synthetic |
  // schwarzschild | field; the remaining members are read per kind.
  std::string model_kind = "euclidean";
  Mat3 model_ricci = Mat3::Zero();
  double model_scalar = 1.0;
  double model_mass = 1.0;
  std::string field_name;

  std::vector<double> epsilons{0.025, 0.05, 0.075, 0.1};
  std::vector<double> omega_moduli{0.9, 0.95, 0.99};
  double omega_boundary = 0.9;
  int resolution = 0;  // 0 keeps the per-route defaults
  int truncation = 20;
  double tolerance = 5e-9;
  double eta = 0.05;
  std::uint64_t seed = 1;
  std::string suite = "all";
  std::string output_dir = ".";
  Vec3 base_point = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();

  std::string canonical;
};

// Parses and validates a JSON config document.  Unknown keys, malformed
// values, and out-of-range settings raise ConfigError with a message naming
// the offending key.
ExperimentConfig parse_config(const std::string& json_text);

// Config with defaults for the given command (used when no --config file is
// supplied; flag overrides are applied by the caller before hashing).
ExperimentConfig default_config(const std::string& command);

// Re-normalizes `canonical` after flag overrides; called by parse_config.
void canonicalize(ExperimentConfig& config);

// True when the model spec names a synthetic curvature field (landscape and
// extremize experiments); false for point-metric models.
bool config_is_field(const ExperimentConfig& config);

MetricModel model_from_config(const ExperimentConfig& config);
CurvatureField field_from_config(const ExperimentConfig& config);

// 64-bit FNV-1a over the canonical config text.
std::uint64_t fnv1a64(std::string_view text);
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hash_hex(std::uint64_t hash);

// Shortest exact decimal rendering of a double (%.17g), used by every CSV
// writer so identical inputs give identical bytes.
std::string format_real(double value);

// CSV renderings.  Every file starts with a `# config=<16 hex>` comment line
// so reports are traceable to the configuration that produced them; no
// timestamps or machine identifiers are embedded.
std::string landscape_csv(const LandscapeTable& table, std::uint64_t hash);
std::string fit_csv(const ExpansionFit& fit, std::uint64_t hash);
std::string spectrum_csv(const SpectrumReport& report, std::uint64_t hash);

// JSON renderings (stable key order, machine-readable).
std::string to_json_text(const ExpansionFit& fit);
std::string to_json_text(const SpectrumReport& report);
std::string to_json_text(const CorrectorResult& result);
std::string to_json_text(const ConditionReport& report);
std::string to_json_text(const ExtremizeResult& result);

// One acceptance-style check line for summary.json.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::string summary_json(const std::vector<CheckResult>& checks,
                         std::uint64_t hash);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace wlab

#pragma once

// Scenario files: JSON documents describing one bound or sampling setup.
// Every quantity is either a bare number in the unit declared for its
// dimension or a string "<number> <unit>" resolved through the unit table in
// constants.json. Unknown fields are rejected. See docs/schema.md.

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "beltstab/bounds.hpp"
#include "beltstab/model.hpp"
#include "beltstab/sampler.hpp"

namespace beltstab::scenario {

using json = nlohmann::json;

enum class Dimension { length, mass, time, density, grav_const, dimensionless };

std::string to_string(Dimension d);

struct Unit {
  Dimension dimension = Dimension::dimensionless;
  double si = 1.0;
  std::string source;
};

struct CatalogBody {
  double mass = 0.0;    // kg
  double radius = 0.0;  // m
  std::string source;
};

/// Unit table, named constants and the body catalogue from constants.json.
struct ConstantsTable {
  std::map<std::string, Unit> units;
  std::map<std::string, double> constants;  // SI values
  std::map<std::string, CatalogBody> bodies;
  std::string sha256;
  std::filesystem::path path;

  static ConstantsTable load(const std::filesystem::path& path);
  double constant(const std::string& name) const;
};

/// Directory of bundled datasets: $BELTSTAB_DATASETS if set, else the build-time default.
std::filesystem::path dataset_dir();
const ConstantsTable& bundled_constants();

enum class Kind { similar, powerlaw, planets, custom_system };
std::string to_string(Kind k);

struct PlanetScenario {
  bounds::PlanetChainParams params;
  std::vector<std::string> names;
  std::optional<double> m_max;  // kg, replaces the largest planet mass when set
  /// params with m_max applied.
  bounds::PlanetChainParams effective() const;
};

struct CustomSystem {
  model::StarSystem system;
  std::vector<std::string> names;
  sampler::FreeMeasure free_measure = sampler::FreeMeasure::gaussian;
  std::vector<double> xi_upper;
};

struct Scenario {
  int schema_version = 1;
  Kind kind = Kind::similar;
  std::string name;
  std::string description;
  std::string origin;  // file path or "<memory>"
  std::string sha256;  // of the source bytes

  bounds::SimilarBeltParams similar;
  bounds::PowerLawBeltParams powerlaw;
  PlanetScenario planets;
  CustomSystem custom;

  /// The scenario restated in SI units with numeric values only. Loading the
  /// echo reproduces every parameter bit for bit.
  json echo() const;

  json si_params;  // resolved parameter block, as echoed
};

/// Throws ScenarioError with "line N" (syntax) or a JSON pointer (schema).
Scenario parse_scenario(const std::string& text, const std::string& origin = "<memory>",
                        const ConstantsTable& table = bundled_constants());
Scenario load_scenario(const std::filesystem::path& path,
                       const ConstantsTable& table = bundled_constants());

/// A dataset name from dataset_dir() ("main_belt") or a file path.
std::filesystem::path resolve_scenario_path(const std::string& name_or_path);

struct DatasetInfo {
  std::string name;
  std::string kind;
  std::string description;
  std::filesystem::path path;
  std::string sha256;
};
std::vector<DatasetInfo> list_datasets();

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

/// Bodies and the energy function for sampling. Similar belts become N
/// equal bodies on one orbit; planet chains use the truncated free measure
/// with xi_i <= 2 R_N / R_i. Power-law belts are not sampleable.
struct SampleTarget {
  sampler::GibbsModel model;
  std::vector<std::string> names;
  std::optional<model::StarSystem> system;  // present for similar / custom systems
};
SampleTarget sample_target(const Scenario& s);

/// Upper limit on generated belt sizes for sampling.
inline constexpr std::uint64_t kMaxSampledBodies = 64;

/// Names of the parameters a sweep may vary for this kind.
std::vector<std::string> sweepable(Kind kind);
/// Copy of s with one SI parameter replaced (re-validated).
Scenario with_parameter(const Scenario& s, const std::string& axis, double value);

}  // namespace beltstab::scenario

#pragma once

// Reports: input echo, results, notes and provenance, rendered as an aligned
// text table, CSV or the canonical JSON serialization.

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "beltstab/bounds.hpp"
#include "beltstab/sampler.hpp"

namespace beltstab::report {

using json = nlohmann::json;

enum class Format { table, csv, structured };
Format format_from_string(const std::string& s);

enum ExitCode : int { kOk = 0, kComputation = 1, kInput = 2 };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Report {
  std::string command;
  json input = json::object();
  json results = json::object();
  std::vector<std::string> notes;
  json provenance = json::object();
  std::optional<Table> table;
  int exit_code = kOk;

  json to_json() const;
};

json to_json(const bounds::EpsilonBound& b);
json to_json(const sampler::SampleStats& s, const std::vector<std::string>& names);
json to_json(const Table& t);

/// Tool name and version, the seed when one was used, and SHA-256 checksums
/// of the scenario source and the constants table.
json make_provenance(std::optional<std::uint64_t> seed,
                     const std::vector<std::pair<std::string, std::string>>& checksums);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string render(const Report& r, Format f);

}  // namespace beltstab::report

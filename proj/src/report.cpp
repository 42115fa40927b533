#include "beltstab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beltstab/errors.hpp"

namespace beltstab::report {

Format format_from_string(const std::string& s) {
  if (s == "table") return Format::table;
  if (s == "csv") return Format::csv;
  if (s == "structured" || s == "json") return Format::structured;
  throw DomainError("unknown format '" + s + "' (expected table, csv or structured)");
}

json Report::to_json() const {
  json j = json::object();
  j["command"] = command;
  j["input"] = input;
  j["results"] = results;
  if (table) j["table"] = report::to_json(*table);
  j["notes"] = notes;
  j["provenance"] = provenance;
  j["exit_code"] = exit_code;
  return j;
}

json to_json(const bounds::EpsilonBound& b) {
  json j = json::object();
  j["kind"] = b.kind;
  j["diverged"] = b.diverged();
  j["value"] = b.diverged() ? json(nullptr) : json(*b.value);
  json inter = json::array();
  for (const auto& [k, v] : b.intermediates) inter.push_back({{"name", k}, {"value", v}});
  j["intermediates"] = inter;
  return j;
}

json to_json(const sampler::SampleStats& s, const std::vector<std::string>& names) {
  json j = json::object();
  j["acceptance_xi"] = s.acceptance_xi;
  j["acceptance_theta"] = s.acceptance_theta;
  j["hard_core_rejections"] = s.hard_core_rejections;
  j["samples_per_chain"] = s.samples_per_chain;
  j["chains"] = s.n_chains;
  j["tau_max"] = s.tau_max;
  j["tau_window_ok"] = s.tau_window_ok;
  j["converged"] = s.converged;
  json bodies = json::array();
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const auto& b = s.bodies[i];
    bodies.push_back({{"name", i < names.size() ? names[i] : std::to_string(i)},
                      {"mean_xi", b.mean_xi},
                      {"mean_xi_se", b.mean_xi_se},
                      {"var_xi", b.var_xi},
                      {"xi2", b.second_moment},
                      {"xi2_se", b.second_moment_se},
                      {"tau", b.tau},
                      {"proposal_sigma_xi", s.final_sigma_xi.at(i)}});
  }
  j["bodies"] = bodies;
  return j;
}

json to_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::object();
    for (std::size_t c = 0; c < t.columns.size() && c < r.size(); ++c) row[t.columns[c]] = r[c];
    rows.push_back(row);
  }
  return {{"columns", t.columns}, {"rows", rows}};
}

json make_provenance(std::optional<std::uint64_t> seed,
                     const std::vector<std::pair<std::string, std::string>>& checksums) {
  json j = json::object();
  j["tool"] = "beltstab";
  j["version"] = BELTSTAB_VERSION;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  json sums = json::object();
  for (const auto& [k, v] : checksums) sums[k] = v;
  j["sha256"] = sums;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  }
  return v.dump();
}

// Flattens nested objects/arrays into ("a.b.0.c", value) pairs.
void flatten(const json& v, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, out);
  } else if (v.is_array()) {
    if (v.empty()) out.emplace_back(prefix, "[]");
    const bool named = std::all_of(v.begin(), v.end(), [](const json& e) {
      return e.is_object() && e.size() == 2 && e.contains("name") && e.contains("value");
    });
    if (named && !v.empty()) {
      for (const auto& e : v) out.emplace_back(prefix + "." + scalar_text(e["name"]), scalar_text(e["value"]));
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

std::string render_table_rows(const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
  for (const auto& r : t.rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      std::string s = c < r.size() ? scalar_text(r[c]) : "";
      if (c < r.size() && r[c].is_number_float()) {
        std::ostringstream o;
        o.precision(6);
        o << r[c].get<double>();
        s = o.str();
      }
      width[c] = std::max(width[c], s.size());
      line.push_back(s);
    }
    cells.push_back(line);
  }
  std::ostringstream out;
  const auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << (c ? "  " : "") << line[c] << std::string(width[c] - line[c].size(), ' ');
    }
    out << '\n';
  };
  emit(t.columns);
  for (const auto& line : cells) emit(line);
  return out.str();
}

}  // namespace

std::string render(const Report& r, Format f) {
  switch (f) {
    case Format::structured: return r.to_json().dump(2) + "\n";
    case Format::csv: {
      std::ostringstream out;
      if (r.table) {
        for (std::size_t c = 0; c < r.table->columns.size(); ++c) {
          out << (c ? "," : "") << csv_field(r.table->columns[c]);
        }
        out << "\r\n";
        for (const auto& row : r.table->rows) {
          for (std::size_t c = 0; c < r.table->columns.size(); ++c) {
            out << (c ? "," : "") << csv_field(c < row.size() ? scalar_text(row[c]) : "");
          }
          out << "\r\n";
        }
        return out.str();
      }
      std::vector<std::pair<std::string, std::string>> kv;
      flatten(r.results, "", kv);
      out << "key,value\r\n";
      for (const auto& [k, v] : kv) out << csv_field(k) << "," << csv_field(v) << "\r\n";
      return out.str();
    }
    case Format::table: {
      std::ostringstream out;
      out << r.command;
      if (r.input.contains("name")) out << ": " << scalar_text(r.input["name"]);
      out << "\n";
      std::vector<std::pair<std::string, std::string>> kv;
      flatten(r.results, "", kv);
      std::size_t w = 0;
      for (const auto& [k, v] : kv) w = std::max(w, k.size());
      for (const auto& [k, v] : kv) out << "  " << k << std::string(w - k.size() + 2, ' ') << v << "\n";
      if (r.table) out << "\n" << render_table_rows(*r.table);
      for (const auto& n : r.notes) out << "note: " << n << "\n";
      return out.str();
    }
  }
  return {};
}

}  // namespace beltstab::report

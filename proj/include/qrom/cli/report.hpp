#pragma once

// Tabular experiment output: JSON (one document per subcommand) and CSV
// (one file per table, led by a schema comment line).

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace qrom::cli {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::string, std::int64_t, std::uint64_t, double, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table& add(std::vector<Cell> row) {
    if (row.size() != columns.size())
      throw std::logic_error("table '" + name + "': row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(columns.size()));
    rows.push_back(std::move(row));
    return *this;
  }
};

struct Report {
  std::string subcommand;
  std::uint64_t seed = 0;
  Json params = Json::object();
  std::vector<Table> tables;
  bool pass = true;
  std::vector<std::string> failures;  ///< names of asserted checks that failed
  /// Extra JSON-lines stream (separation transcripts); empty when unused.
  std::vector<Json> jsonl;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

inline Json to_json(const Cell& c) {
  return std::visit([](const auto& v) { return Json(v); }, c);
}

/// Fixed formatting so CSV bytes do not depend on locale or stream state.
inline std::string to_csv_field(const Cell& c) {
  char buf[64];
  if (const auto* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string q = "\"";
    for (char ch : *s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) std::snprintf(buf, sizeof buf, "%" PRId64, *i);
  else if (const auto* u = std::get_if<std::uint64_t>(&c)) std::snprintf(buf, sizeof buf, "%" PRIu64, *u);
  else if (const auto* d = std::get_if<double>(&c)) std::snprintf(buf, sizeof buf, "%.12g", *d);
  else return std::get<bool>(c) ? "true" : "false";
  return buf;
}

inline Json to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json o = Json::object();
    for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = to_json(r[i]);
    rows.push_back(std::move(o));
  }
  return rows;
}

inline Json to_json(const Report& r) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["subcommand"] = r.subcommand;
  j["seed"] = r.seed;
  j["params"] = r.params;
  j["pass"] = r.pass;
  j["failures"] = r.failures;
  Json tables = Json::object();
  for (const auto& t : r.tables) tables[t.name] = to_json(t);
  j["tables"] = std::move(tables);
  return j;
}

inline std::string to_csv(const Report& r, const Table& t) {
  std::string out = "# qrom-lab schema_version=" + std::to_string(kSchemaVersion) + " subcommand=" + r.subcommand +
                    " table=" + t.name + " seed=" + std::to_string(r.seed) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + to_csv_field(row[i]);
    out += "\n";
  }
  return out;
}

enum class Format { json, csv };

inline void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
  f << body;
  if (!f) throw std::runtime_error("write failed: " + p.string());
}

/// Writes the report under `dir` and returns the paths written:
///   json: <sub>.json;  csv: <sub>-<table>.csv per table.
/// A non-empty jsonl stream goes to <sub>-transcripts.jsonl in both formats.
inline std::vector<std::filesystem::path> write_report(const Report& r, const std::filesystem::path& dir, Format fmt) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (fmt == Format::json) {
    written.push_back(dir / (r.subcommand + ".json"));
    write_file(written.back(), to_json(r).dump(2) + "\n");
  } else {
    for (const auto& t : r.tables) {
      written.push_back(dir / (r.subcommand + "-" + t.name + ".csv"));
      write_file(written.back(), to_csv(r, t));
    }
  }
  if (!r.jsonl.empty()) {
    std::string body;
    for (const auto& line : r.jsonl) body += line.dump() + "\n";
    written.push_back(dir / (r.subcommand + "-transcripts.jsonl"));
    write_file(written.back(), body);
  }
  return written;
}

}  // namespace qrom::cli

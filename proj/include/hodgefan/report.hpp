#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hodgefan {

// One named check inside a report. Informational items carry a verdict that
// is reported but excluded from the overall conjunction (used for properties
// that are stronger than what the command certifies).
struct ReportItem {
  std::string name;
  bool ok = true;
  std::string detail;
  bool informational = false;
};

// Where the reported input came from and how the run was parameterized.
// input_path/input_hash stay empty when the input was built in memory.
struct ReportProvenance {
  std::string input_path;
  std::string input_hash;
  std::string tool = "hodgefan 1.0.0";
  std::uint64_t seed = 2026;
};

// Structured outcome of one verification or construction: named checks, an
// overall verdict, command-specific payload, and the qualifiers that scope
// what the verdict means. Serializes to JSON and to a markdown summary that
// agree on every verdict.
struct Report {
  std::string command;
  bool ok = true;
  std::vector<ReportItem> items;
  std::vector<std::string> qualifiers;
  std::vector<std::string> footnotes;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();
  ReportProvenance provenance;
  // Set only when timing was requested; absent by default so that report
  // output is byte-for-byte deterministic.
  std::optional<double> elapsed_seconds;

  ReportItem& add(std::string name, bool item_ok, std::string detail = "");
  ReportItem& add_informational(std::string name, bool item_ok, std::string detail = "");
  // Recompute the overall verdict as the conjunction of all non-informational
  // items and return it.
  bool recompute();
};

// 64-bit FNV-1a hash of a byte string, rendered as "fnv1a:<16 hex digits>".
std::string fnv1a_hex(const std::string& bytes);

nlohmann::ordered_json report_to_json(const Report& r);
std::string report_to_markdown(const Report& r);

}  // namespace hodgefan

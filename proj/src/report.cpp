#include "hodgefan/report.hpp"

#include <cstdio>

namespace hodgefan {

ReportItem& Report::add(std::string name, bool item_ok, std::string detail) {
  items.push_back(ReportItem{std::move(name), item_ok, std::move(detail), false});
  if (!item_ok) ok = false;
  return items.back();
}

ReportItem& Report::add_informational(std::string name, bool item_ok, std::string detail) {
  items.push_back(ReportItem{std::move(name), item_ok, std::move(detail), true});
  return items.back();
}

bool Report::recompute() {
  ok = true;
  for (const ReportItem& it : items) {
    if (!it.informational && !it.ok) ok = false;
  }
  return ok;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

nlohmann::ordered_json report_to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["ok"] = r.ok;
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const ReportItem& it : r.items) {
    nlohmann::ordered_json v;
    v["name"] = it.name;
    v["ok"] = it.ok;
    if (!it.detail.empty()) v["detail"] = it.detail;
    if (it.informational) v["informational"] = true;
    items.push_back(v);
  }
  j["checks"] = items;
  if (!r.qualifiers.empty()) j["qualifiers"] = r.qualifiers;
  if (!r.footnotes.empty()) j["footnotes"] = r.footnotes;
  if (!r.payload.empty()) j["payload"] = r.payload;
  nlohmann::ordered_json prov;
  if (!r.provenance.input_path.empty()) prov["input"] = r.provenance.input_path;
  if (!r.provenance.input_hash.empty()) prov["input_hash"] = r.provenance.input_hash;
  prov["tool"] = r.provenance.tool;
  prov["seed"] = r.provenance.seed;
  j["provenance"] = prov;
  if (r.elapsed_seconds) j["elapsed_seconds"] = *r.elapsed_seconds;
  return j;
}

std::string report_to_markdown(const Report& r) {
  std::string out;
  out += "# " + r.command + "\n\n";
  out += std::string("Verdict: ") + (r.ok ? "PASS" : "FAIL") + "\n\n";
  for (const ReportItem& it : r.items) {
    out += std::string("- [") + (it.ok ? "ok" : "FAIL") + "] " + it.name;
    if (it.informational) out += " (informational)";
    if (!it.detail.empty()) out += " — " + it.detail;
    out += "\n";
  }
  if (!r.qualifiers.empty()) {
    out += "\nQualifiers:\n";
    for (const std::string& q : r.qualifiers) out += "- " + q + "\n";
  }
  if (!r.footnotes.empty()) {
    out += "\nNotes:\n";
    for (const std::string& f : r.footnotes) out += "- " + f + "\n";
  }
  out += "\nProvenance: " + r.provenance.tool;
  if (!r.provenance.input_path.empty()) {
    out += ", input " + r.provenance.input_path;
  }
  if (!r.provenance.input_hash.empty()) {
    out += " (" + r.provenance.input_hash + ")";
  }
  out += ", seed " + std::to_string(r.provenance.seed) + "\n";
  if (r.elapsed_seconds) {
    out += "Elapsed: " + std::to_string(*r.elapsed_seconds) + " s\n";
  }
  return out;
}

}  // namespace hodgefan

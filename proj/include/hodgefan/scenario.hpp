#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hodgefan/fan_check.hpp"
#include "hodgefan/lattice.hpp"
#include "hodgefan/logmod.hpp"
#include "hodgefan/reductions.hpp"
#include "hodgefan/report.hpp"

namespace hodgefan {

// The file could not be read or is not JSON at all.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// The JSON parsed but does not have the scenario shape; the message names
// the offending field.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// The scenario is well formed but violates a mathematical invariant or a
// cross-reference; the message names the field and the check.
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

// A command name outside the dispatch table.
struct UnknownCommandError : std::runtime_error {
  explicit UnknownCommandError(const std::string& what) : std::runtime_error(what) {}
};

// A cone as written in a scenario file: generators are names into the
// matrix pool.
struct ConeSpec {
  std::string name;
  std::vector<std::string> generators;
};

// A group element as written in a scenario file.
struct WitnessSpec {
  std::string name;
  std::string matrix;
};

// A local chart as written in a scenario file: logs are names into the
// matrix pool, psi0 an optional filtration name (empty for none).
struct ChartSpec {
  std::string name;
  int dim = 0;
  std::vector<std::string> divisors;
  std::vector<std::string> logs;
  std::string psi0;
};

// Command-specific knobs carried inside the scenario file, so that a
// fixture is a complete description of one run.
struct ScenarioOptions {
  // jm: matrix names to analyze; empty means every nilpotent pool matrix.
  std::vector<std::string> jm_targets;
  // classify: intended type tag per cone; the report fails on mismatch,
  // which makes fixtures self-auditing.
  std::map<std::string, std::string> expected_types;
  // reduce: "I" or "IV", the cone to reduce (defaults to the only cone),
  // and the declared positivity sign of the source form.
  std::string reduction;
  std::string reduction_cone;
  int reduction_sign = 1;
  // logmod / subdivide: the source cone and the cones of the target fan.
  std::string source_cone;
  std::vector<std::string> target_cones;
};

// An in-memory scenario file: the symbolic form is the source of truth and
// library objects are materialized on demand, so serialization is exact.
struct Scenario {
  int schema_version = 1;
  std::string name;
  std::string description;
  SymplecticLattice lattice;
  std::vector<std::pair<std::string, Mat<Rat>>> matrices;
  std::vector<ConeSpec> cones;
  std::vector<std::pair<std::string, HodgeFiltration>> filtrations;
  std::vector<WitnessSpec> witnesses;
  // Cone name -> filtration name of its limit certificate.
  std::map<std::string, std::string> orbit_witnesses;
  std::set<std::string> phi;
  std::vector<ChartSpec> charts;
  ScenarioOptions options;

  const Mat<Rat>* find_matrix(const std::string& n) const;
  const HodgeFiltration* find_filtration(const std::string& n) const;
  const ConeSpec* find_cone(const std::string& n) const;
  const ChartSpec* find_chart(const std::string& n) const;

  // Materializers; they throw InvariantError on an unresolved name.
  const Mat<Rat>& matrix(const std::string& n) const;
  const HodgeFiltration& filtration(const std::string& n) const;
  NilpotentCone cone(const std::string& n) const;
  LocalChart chart(const std::string& n) const;
  ConeSystem cone_system() const;

  // Full invariant layer: lattice axioms (Q antisymmetry first), matrix
  // sizes, cone nilpotency/commutation/form compatibility, filtration
  // shapes, witness integrality, chart coherence, and cross-reference
  // resolution. Throws InvariantError naming the field and the check.
  void validate() const;
};

// Shape layer: JSON value -> Scenario, throwing SchemaError with the field
// name for every wrong type, missing requirement, or unknown key.
Scenario scenario_from_json(const nlohmann::ordered_json& js);

// Exact inverse on validated scenarios: ingest(write(serialize(s))) == s.
nlohmann::ordered_json scenario_to_json(const Scenario& s);

// Load, shape-check, and validate a scenario file.
Scenario ingest(const std::string& path);

// Repackage a reduction result as a standalone weight-1 scenario. The
// positivity sign is folded into the stored form so the output classifies
// on its own; the description records the source, method, and sign.
Scenario reduced_to_scenario(const ReducedScenario& r);

// Per-run switches shared by every command.
struct RunFlags {
  std::uint64_t seed = 2026;
  // Overrides the scenario's admissible-type set for fan commands.
  std::optional<std::set<std::string>> phi;
  // Cells of dimension above this are summarized, not listed, in payloads.
  std::optional<int> max_dim;
  bool timing = false;
  std::string input_path;
  std::string input_hash;
};

// Dispatch one command against a validated scenario. Commands: jm,
// classify, check-orbit, check-fan, build-fan, reduce, logmod, subdivide.
// Throws UnknownCommandError for anything else; scenario and module errors
// pass through. The report's ok is the conjunction of its checks.
Report run_command(const std::string& command, const Scenario& s, const RunFlags& flags);

}  // namespace hodgefan

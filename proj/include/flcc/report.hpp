#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flcc/serialization.hpp"

namespace flcc {

// One pipeline run. Ratios are present only when the reference is positive.
struct RunReport {
  std::string instance_id;
  std::string digest;     // FNV-1a 64 of the normalized instance JSON
  InstanceKind kind = InstanceKind::Flpm;
  std::string variant;    // bench suite name, or the kind for single runs
  std::string algorithm;  // stages joined by '>'
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json costs = nlohmann::json::object();
  double total = 0.0;
  std::optional<double> oracle;
  std::optional<double> lp_bound;
  std::optional<double> ratio;
  std::optional<double> lp_ratio;
  double millis = 0.0;
  bool fallback = false;  // no facility opened; best single facility used instead
  nlohmann::json solution;
  std::size_t n_fac = 0, n_cli = 0;
  int horizon = 0;

  nlohmann::json to_json() const;
};

struct SolveOptions {
  bool oracle = false;
  bool lp_bound = false;
  double tol = 1e-9;
  bool timing = true;
  bool override_guard = false;
  bool trace = false;
};

struct SolveOutput {
  RunReport report;
  nlohmann::json trace = nlohmann::json::array();  // JMS events when requested
};

std::string fnv1a_digest(const std::string& text);

// flpm -> jms; ncc -> reduction -> jms; sirpfl -> lot-sizing envelope ->
// ncc reduction -> jms -> lift. The emitted solution is re-validated.
SolveOutput solve_instance(const AnyInstance& inst, const SolveOptions& opts = {});

enum class Suite { Flp, Ncc, SirpflU, SirpflS, SirpflUs };
Suite suite_from_string(const std::string& s);
std::string to_string(Suite s);

struct BenchOptions {
  Suite suite = Suite::Flp;
  int count = 10;
  std::uint64_t seed = 1;
  bool parallel = false;
  bool timing = false;
};

// Generated instance number `index` of a suite; deterministic in (seed, index).
AnyInstance bench_instance(Suite suite, std::uint64_t seed, int index);

// Reports in index order, each with oracle and LP bound.
std::vector<RunReport> run_bench(const BenchOptions& opts);

std::string bench_csv(const std::vector<RunReport>& reports);
nlohmann::json bench_json(const std::vector<RunReport>& reports);

}  // namespace flcc

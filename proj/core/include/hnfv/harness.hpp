#pragma once

// Experiment runner: power ratios, CSV/state/solution emission, oracle
// comparison and parameter sweeps over a worker pool.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hnfv/capacity.hpp"
#include "hnfv/mva.hpp"
#include "hnfv/oracle.hpp"
#include "hnfv/scenarios.hpp"

namespace hnfv {

// run / reference. Throws ZeroReference.
double eta(Watts run_power, Watts reference_power);
// (1 - eta_min) / (1 - eta_min_baseline). Throws DegenerateBaseline when the
// baseline saves nothing.
double eta_bar(double eta_min, double eta_min_baseline);

struct ExperimentResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t psi = 1;
  std::vector<FlowSpec> flows;
  SolveAllResult solve;
  Watts reference_power = 0.0;
  Watts reference_idle_power = 0.0;
  double eta = 0.0;
  double eta_idle = 0.0;
  std::size_t served = 0;
  std::size_t rejected = 0;
  std::size_t mdra_calls = 0;
  ValidationReport report;
  double wall_seconds = 0.0;
};

// Solves, validates and measures one scenario with beam width `psi`.
ExperimentResult run_scenario(const Scenario& scenario, std::uint64_t seed,
                              std::size_t psi);

extern const char* const kResultsHeader;
extern const char* const kSummaryHeader;
void write_results_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_row(std::ostream& out, const ExperimentResult& result);
// Final on/off census and placements.
void write_state(std::ostream& out, const NetworkGraph& graph, const NfCatalog& catalog,
                 const NetworkState& state);

// Writes results.csv, summary.csv, state.txt and solution.txt under `out_dir`,
// each through a temporary file and a rename.
void write_outputs(const std::filesystem::path& out_dir, const Scenario& scenario,
                   const ExperimentResult& result);

// Generates, runs and writes one experiment. Throws ConfigParseError, IoError.
ExperimentResult run_experiment(const ScenarioSpec& spec,
                                const std::filesystem::path& out_dir);

struct OracleComparison {
  std::string scenario;
  bool mva_served_all = false;
  bool oracle_feasible = false;
  Watts mva_power = 0.0;
  Watts oracle_power = 0.0;
  // mva / oracle when both serve every flow; 1 when both draw nothing.
  std::optional<double> ratio;
  std::uint64_t oracle_expansions = 0;
};

// Runs MVA and the exhaustive solver on the same instance. BudgetExceeded
// propagates.
OracleComparison compare_with_oracle(const Scenario& scenario, std::size_t psi,
                                     const OracleLimits& limits = {});

extern const char* const kOracleHeader;
void write_oracle_row(std::ostream& out, const OracleComparison& comparison);

// key=value override in config syntax. Attachment counts keep the switch
// fabric unless `links` is set explicitly.
ScenarioSpec apply_param(const ScenarioSpec& spec, const std::string& key,
                         const std::string& value);

struct SweepPoint {
  std::string key;
  std::string value;
  ExperimentResult result;
};

// One experiment per value, run on `workers` threads. Results come back in
// value order; each run writes under out_dir/<key>=<value>/ and the
// combined table goes to out_dir/sweep.csv.
std::vector<SweepPoint> sweep(const ScenarioSpec& spec, const std::string& key,
                              const std::vector<std::string>& values,
                              const std::filesystem::path& out_dir, std::size_t workers);

// HNFV_WORKERS, else the hardware concurrency (at least 1).
std::size_t worker_count_from_env();

}  // namespace hnfv

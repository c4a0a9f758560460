// hnfv: run, validate and sweep energy-aware chain placement experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hnfv/error.hpp"
#include "hnfv/harness.hpp"
#include "hnfv/text.hpp"

namespace {

constexpr int kViolationExit = 2;

void print_summary(const hnfv::ExperimentResult& r) {
  std::printf("%s seed=%llu psi=%zu served=%zu rejected=%zu objective=%s W total=%s W "
              "eta=%s eta_idle=%s violations=%zu wall=%.3fs\n",
              r.scenario.c_str(), static_cast<unsigned long long>(r.seed), r.psi, r.served,
              r.rejected, hnfv::format_double(r.solve.objective_power).c_str(),
              hnfv::format_double(r.solve.total_power).c_str(),
              hnfv::format_double(r.eta).c_str(), hnfv::format_double(r.eta_idle).c_str(),
              r.report.violations.size(), r.wall_seconds);
}

int run(const std::string& config, const std::string& out_dir,
        std::optional<std::uint64_t> seed, std::optional<std::size_t> psi, bool oracle) {
  hnfv::ScenarioSpec spec = hnfv::load_config(config);
  if (seed) spec.seed = *seed;
  if (psi) spec.psi = *psi;
  const hnfv::Scenario scenario = hnfv::generate(spec);
  const hnfv::ExperimentResult result = hnfv::run_scenario(scenario, spec.seed, spec.psi);
  hnfv::write_outputs(out_dir, scenario, result);
  print_summary(result);
  if (oracle) {
    const auto cmp = hnfv::compare_with_oracle(scenario, spec.psi);
    std::ofstream out(std::filesystem::path(out_dir) / "oracle.csv");
    out << hnfv::kOracleHeader << '\n';
    hnfv::write_oracle_row(out, cmp);
    std::printf("oracle objective=%s W ratio=%s\n",
                cmp.oracle_feasible ? hnfv::format_double(cmp.oracle_power).c_str()
                                    : "infeasible",
                cmp.ratio ? hnfv::format_double(*cmp.ratio).c_str() : "n/a");
  }
  if (!result.report.ok()) {
    hnfv::write_report(std::cerr, result.report);
    return kViolationExit;
  }
  return 0;
}

int validate(const std::string& path) {
  const hnfv::SolutionFile file = hnfv::load_solution(path);
  const auto& s = file.scenario;
  const auto report = hnfv::validate_solution(s.graph, s.catalog, s.flows, file.assignments,
                                              &s.initial,
                                              file.claimed ? &*file.claimed : nullptr);
  hnfv::write_report(std::cout, report);
  if (!report.ok()) return kViolationExit;
  std::printf("ok: %zu assignments, no violations\n", file.assignments.size());
  return 0;
}

int sweep(const std::string& config, const std::string& param, const std::string& out_dir) {
  const auto eq = param.find('=');
  if (eq == std::string::npos) {
    throw hnfv::Error(hnfv::ErrorCode::kInvalidArgument, "--param expects key=v1,v2,...");
  }
  const std::string key = param.substr(0, eq);
  std::vector<std::string> values;
  for (auto v : hnfv::split(std::string_view(param).substr(eq + 1), ',')) {
    values.emplace_back(hnfv::trim(v));
  }
  const hnfv::ScenarioSpec spec = hnfv::load_config(config);
  const auto points = hnfv::sweep(spec, key, values, out_dir, hnfv::worker_count_from_env());
  int code = 0;
  for (const auto& p : points) {
    std::printf("%s=%s ", p.key.c_str(), p.value.c_str());
    print_summary(p.result);
    if (!p.result.report.ok()) code = kViolationExit;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware service chain placement on partially SDN, hybrid NFV networks"};
  app.require_subcommand(1);

  std::string config, out_dir = "results", solution, param;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> psi;
  bool oracle = false;

  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
  run_cmd->add_option("config", config, "Scenario config (key=value)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--psi", psi, "Override the beam width")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--oracle", oracle, "Also run the exhaustive solver");

  auto* validate_cmd = app.add_subcommand("validate", "Check a solution file");
  validate_cmd->add_option("solution", solution, "solution.txt written by run")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Run one experiment per parameter value");
  sweep_cmd->add_option("config", config, "Scenario config (key=value)")->required();
  sweep_cmd->add_option("--param", param, "key=v1,v2,...")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(config, out_dir, seed, psi, oracle);
    if (*validate_cmd) return validate(solution);
    if (*sweep_cmd) return sweep(config, param, out_dir);
  } catch (const hnfv::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

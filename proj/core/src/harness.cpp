#include "hnfv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "hnfv/error.hpp"
#include "hnfv/power.hpp"
#include "hnfv/text.hpp"

namespace hnfv {

double eta(Watts run_power, Watts reference_power) {
  if (!(reference_power > 0.0)) {
    throw Error(ErrorCode::kZeroReference, "reference power must be positive");
  }
  return run_power / reference_power;
}

double eta_bar(double eta_min, double eta_min_baseline) {
  if (!(eta_min_baseline < 1.0)) {
    throw Error(ErrorCode::kDegenerateBaseline,
                "baseline eta " + format_double(eta_min_baseline) + " saves nothing");
  }
  return (1.0 - eta_min) / (1.0 - eta_min_baseline);
}

ExperimentResult run_scenario(const Scenario& scenario, std::uint64_t seed,
                              std::size_t psi) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult r;
  r.scenario = scenario.name;
  r.seed = seed;
  r.psi = psi;
  r.flows = scenario.flows;
  const WeightParams params = WeightParams::defaults_for(scenario.graph);
  r.solve = solve_all(scenario.graph, scenario.catalog, scenario.flows, BeamConfig{psi},
                      params, &scenario.initial);
  for (const FlowOutcome& o : r.solve.outcomes) {
    (o.assignment ? r.served : r.rejected) += 1;
    r.mdra_calls += o.mdra_calls;
  }
  r.report = validate_solution(scenario.graph, scenario.catalog, scenario.flows,
                               r.solve.assignments(), &scenario.initial, &r.solve.state);
  r.reference_power = reference_power(scenario.graph, r.solve.state, true);
  r.reference_idle_power = reference_power(scenario.graph, r.solve.state, false);
  r.eta = eta(r.solve.total_power, r.reference_power);
  r.eta_idle = eta(r.solve.total_power, r.reference_idle_power);
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

const char* const kResultsHeader =
    "flow,source,destination,rate_bps,status,stage,reason,weight,placements,route_links,"
    "mdra_calls";

const char* const kSummaryHeader =
    "scenario,seed,psi,flows,served,rejected,objective_w,total_w,reference_w,"
    "reference_idle_w,eta,eta_idle,nodes_on,links_on,mdra_calls,violations";

void write_results_csv(std::ostream& out, const ExperimentResult& r) {
  out << kResultsHeader << '\n';
  for (std::size_t i = 0; i < r.solve.outcomes.size(); ++i) {
    const FlowOutcome& o = r.solve.outcomes[i];
    const FlowSpec& f = r.flows[i];
    out << f.id << ',' << f.source << ',' << f.destination << ',' << f.rate << ',';
    if (o.assignment) {
      out << "served,,," << format_double(o.weight) << ',';
      for (std::size_t k = 0; k < o.assignment->placements.size(); ++k) {
        out << (k ? " " : "") << o.assignment->placements[k];
      }
      out << ',';
      for (std::size_t s = 0; s < o.assignment->segments.size(); ++s) {
        if (s) out << '|';
        const auto& seg = o.assignment->segments[s];
        if (seg.empty()) out << '-';
        for (std::size_t j = 0; j < seg.size(); ++j) out << (j ? " " : "") << seg[j];
      }
    } else {
      out << "rejected," << o.rejected_stage << ',' << to_string(*o.rejection) << ",,,";
    }
    out << ',' << o.mdra_calls << '\n';
  }
}

void write_summary_row(std::ostream& out, const ExperimentResult& r) {
  out << r.scenario << ',' << r.seed << ',' << r.psi << ',' << r.flows.size() << ','
      << r.served << ',' << r.rejected << ',' << format_double(r.solve.objective_power)
      << ',' << format_double(r.solve.total_power) << ','
      << format_double(r.reference_power) << ',' << format_double(r.reference_idle_power)
      << ',' << format_double(r.eta) << ',' << format_double(r.eta_idle) << ','
      << r.solve.state.nodes_on() << ',' << r.solve.state.links_on() << ','
      << r.mdra_calls << ',' << r.report.violations.size() << '\n';
}

void write_state(std::ostream& out, const NetworkGraph& graph, const NfCatalog& catalog,
                 const NetworkState& state) {
  out << "nodes_on " << state.nodes_on() << " of " << graph.node_count() << '\n';
  out << "links_on " << state.links_on() << " of " << graph.link_count() << '\n';
  for (const Node& n : graph.nodes()) {
    out << "node " << n.id << ' ' << to_string(n.kind) << ' '
        << (state.node_on(n.id) ? "on" : "off");
    if (n.hosts_functions()) out << " ingress_load=" << state.node_ingress_load(n.id);
    std::string vnfs;
    for (const NetworkFunction& nf : catalog.functions()) {
      if (state.placed(n.id, nf.id)) vnfs += (vnfs.empty() ? "" : ",") + nf.name;
    }
    if (!vnfs.empty()) out << " vnfs=" << vnfs;
    out << '\n';
  }
  for (const Link& l : graph.links()) {
    out << "link " << l.id << ' ' << (state.link_on(l.id) ? "on" : "off")
        << " residual=" << state.residual_link(l.id) << '\n';
  }
}

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename to " + path.string());
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

}  // namespace

void write_outputs(const std::filesystem::path& out_dir, const Scenario& scenario,
                   const ExperimentResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string());
  write_atomically(out_dir / "results.csv",
                   render([&](std::ostream& o) { write_results_csv(o, result); }));
  write_atomically(out_dir / "summary.csv", render([&](std::ostream& o) {
                     o << kSummaryHeader << '\n';
                     write_summary_row(o, result);
                   }));
  write_atomically(out_dir / "state.txt", render([&](std::ostream& o) {
                     write_state(o, scenario.graph, scenario.catalog, result.solve.state);
                   }));
  write_atomically(out_dir / "solution.txt", render([&](std::ostream& o) {
                     write_solution(o, scenario, result.solve.assignments(),
                                    result.solve.state);
                   }));
}

ExperimentResult run_experiment(const ScenarioSpec& spec,
                                const std::filesystem::path& out_dir) {
  const Scenario scenario = generate(spec);
  ExperimentResult result = run_scenario(scenario, spec.seed, spec.psi);
  write_outputs(out_dir, scenario, result);
  return result;
}

OracleComparison compare_with_oracle(const Scenario& scenario, std::size_t psi,
                                     const OracleLimits& limits) {
  OracleComparison c;
  c.scenario = scenario.name;
  const auto params = WeightParams::defaults_for(scenario.graph);
  const SolveAllResult mva = solve_all(scenario.graph, scenario.catalog, scenario.flows,
                                       BeamConfig{psi}, params, &scenario.initial);
  c.mva_served_all = std::all_of(mva.outcomes.begin(), mva.outcomes.end(),
                                 [](const FlowOutcome& o) { return o.assignment.has_value(); });
  c.mva_power = mva.objective_power;
  try {
    const OracleResult best = exhaustive_solve(scenario.graph, scenario.catalog,
                                               scenario.flows, limits, &scenario.initial);
    c.oracle_feasible = true;
    c.oracle_power = best.objective_power;
    c.oracle_expansions = best.expansions;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasible) throw;
  }
  if (c.mva_served_all && c.oracle_feasible) {
    if (c.oracle_power > 0.0) {
      c.ratio = c.mva_power / c.oracle_power;
    } else if (c.mva_power == 0.0) {
      c.ratio = 1.0;
    }
  }
  return c;
}

const char* const kOracleHeader =
    "scenario,mva_status,oracle_status,mva_objective_w,oracle_objective_w,ratio,"
    "oracle_expansions";

void write_oracle_row(std::ostream& out, const OracleComparison& c) {
  out << c.scenario << ',' << (c.mva_served_all ? "served" : "rejected") << ','
      << (c.oracle_feasible ? "served" : "infeasible") << ',' << format_double(c.mva_power)
      << ',' << (c.oracle_feasible ? format_double(c.oracle_power) : "") << ','
      << (c.ratio ? format_double(*c.ratio) : "") << ',' << c.oracle_expansions << '\n';
}

ScenarioSpec apply_param(const ScenarioSpec& spec, const std::string& key,
                         const std::string& value) {
  std::string text;
  std::istringstream lines(serialize_config(spec));
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind(key + "=", 0) != 0) text += line + '\n';
  }
  text += key + "=" + value + '\n';
  ScenarioSpec next = parse_config(text);
  const bool attachment = key == "access" || key == "ixp" || key == "sgw" ||
                          key == "pgw" || key == "nfv";
  if (attachment) {
    const auto before = static_cast<std::int64_t>(spec.counts.access + spec.counts.ixp +
                                                  spec.counts.sgw + spec.counts.pgw +
                                                  spec.counts.nfv);
    const auto after = static_cast<std::int64_t>(next.counts.access + next.counts.ixp +
                                                 next.counts.sgw + next.counts.pgw +
                                                 next.counts.nfv);
    const auto links = static_cast<std::int64_t>(spec.counts.links) + after - before;
    next.counts.links = static_cast<std::size_t>(std::max<std::int64_t>(0, links));
  }
  return next;
}

std::vector<SweepPoint> sweep(const ScenarioSpec& spec, const std::string& key,
                              const std::vector<std::string>& values,
                              const std::filesystem::path& out_dir, std::size_t workers) {
  std::vector<SweepPoint> points(values.size());
  std::vector<ScenarioSpec> specs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    points[i].key = key;
    points[i].value = values[i];
    specs.push_back(apply_param(spec, key, values[i]));
  }
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        points[i].result = run_experiment(specs[i], out_dir / (key + "=" + values[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::max<std::size_t>(1, std::min(workers, values.size()));
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  write_atomically(out_dir / "sweep.csv", render([&](std::ostream& o) {
                     o << "param,value," << kSummaryHeader << '\n';
                     for (const SweepPoint& p : points) {
                       o << p.key << ',' << p.value << ',';
                       write_summary_row(o, p.result);
                     }
                   }));
  return points;
}

std::size_t worker_count_from_env() {
  if (const char* env = std::getenv("HNFV_WORKERS")) {
    if (auto n = parse_uint(env); n && *n > 0) return static_cast<std::size_t>(*n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace hnfv

#pragma once

// Scenario construction: the network-size presets, the node and function
// catalog of the evaluation, the six 11-node structures, a seeded topology
// generator, the flat key=value config and the line-oriented fixture format.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hnfv/capacity.hpp"
#include "hnfv/model.hpp"

namespace hnfv {

struct TopologyCounts {
  std::size_t access = 0;
  std::size_t switches = 0;
  std::size_t links = 0;
  std::size_t backbone = 0;
  std::size_t sgw = 0;
  std::size_t pgw = 0;
  std::size_t nfv = 0;
  std::size_t ixp = 0;

  friend bool operator==(const TopologyCounts&, const TopologyCounts&) = default;
};

// "small", "medium" or "large". Throws InvalidArgument otherwise.
TopologyCounts size_preset(std::string_view size);

struct ScenarioSpec {
  std::string size = "small";
  TopologyCounts counts = size_preset("small");
  // Share of switches that are SDN-capable.
  double sdn_fraction = 1.0;
  std::uint64_t seed = 0;
  std::size_t psi = 1;
  // Defaults to one flow per access node.
  std::optional<std::size_t> flows;
  double rate_min_mbps = 1.0;
  double rate_max_mbps = 900.0;
  // When set, rates are drawn from [0.5, 1.5] x mean instead of [min, max].
  std::optional<double> rate_mean_mbps;
  double link_capacity_min_mbps = 1.0;
  double link_capacity_max_mbps = 1000.0;
  double backbone_capacity_gbps = 40.0;
  double tau = 1.0;
  // 1..6 selects an 11-node structure instead of the generator.
  int structure = 0;
  // Structure access rate in normalized units (1 unit = 1 Mbps).
  double access_rate = 1.0;
  // Fixture file replacing generation entirely.
  std::string fixture;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct Scenario {
  std::string name;
  NetworkGraph graph;
  NfCatalog catalog;
  std::vector<FlowSpec> flows;
  NetworkState initial;
};

// g1..g5 with CPU demands, 1 Gbps instance ingress and rising factors.
NfCatalog paper_catalog();
// Node templates of the evaluation (id and kind-specific fields set).
Node sgw_node(NodeId id, const NfCatalog& catalog);
Node pgw_node(NodeId id, const NfCatalog& catalog);
Node nfv_node(NodeId id, const NfCatalog& catalog);
constexpr Watts kSwitchPower = 1500.0;
constexpr Watts kLinkPower = 5.0;

// Counts of one structure row: NFV, non-NFV, SDN switches, access nodes.
struct StructureRow {
  std::size_t nfv = 0;
  std::size_t non_nfv = 0;
  std::size_t sdn = 0;
  std::size_t access = 0;
};
StructureRow structure_row(int n);
ScenarioSpec structure_preset(int n, double access_rate = 1.0);

// Deterministic in the spec. Throws InfeasibleCounts.
Scenario generate(const ScenarioSpec& spec);

// Flat key=value text, '#' comments. Throws ConfigParseError.
ScenarioSpec parse_config(std::string_view text);
// Relative fixture paths resolve against the config's directory.
ScenarioSpec load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioSpec& spec);

// Fixture lines:
//   option relaxed_attachment
//   resources <L>
//   nf <id> <name> <ingress> <gamma> <demand>...
//   node <id> <nonsdn|sdn|nfv|pfn> [pmax=W] [theta=x] [ingress=bps] [res=a,b] [nfs=i,j]
//   link <id> <u> <v> <capacity> <sdn 0|1> <pmax> [tau]
//   flow <id> <src> <dst> <rate> <nf>...
//   place <node> <nf>
//   on node|link <id>
Scenario parse_fixture(std::string_view text, std::string name = "fixture");
Scenario load_fixture(const std::filesystem::path& path);
void write_fixture(std::ostream& out, const Scenario& scenario);

// Fixture plus "assign <flow> place <p>... seg <l>...|- ..." lines and the
// claimed final census as "final on node|link <id>" / "final place <node> <nf>".
struct SolutionFile {
  Scenario scenario;
  std::vector<Assignment> assignments;
  std::optional<NetworkState> claimed;
};
void write_solution(std::ostream& out, const Scenario& scenario,
                    const std::vector<Assignment>& assignments,
                    const NetworkState& final_state);
SolutionFile parse_solution(std::string_view text);
SolutionFile load_solution(const std::filesystem::path& path);

// Seeded uniform draws shared by the generator and the tests. mt19937_64,
// uniform doubles from the top 53 bits, integers by scaling.
class Rng {
 public:
  // Independent stream per (seed, stream) via splitmix64.
  Rng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  double uniform();  // [0, 1)
  // Inclusive range. lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hnfv

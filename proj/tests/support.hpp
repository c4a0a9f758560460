#pragma once

// Shared helpers for the unit and acceptance tests: random desk-size
// instances and brute-force reference solvers that avoid the code under test.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hnfv/capacity.hpp"
#include "hnfv/model.hpp"
#include "hnfv/power.hpp"
#include "hnfv/scenarios.hpp"

namespace hnfv::testing {

Scenario load_test_fixture(const std::string& name);

enum class FunctionMix { kHybrid, kNfvOnly, kPhysicalOnly };

struct RandomOptions {
  std::size_t min_nodes = 4;
  std::size_t max_nodes = 10;
  std::size_t max_flows = 2;
  std::size_t max_chain = 3;
  FunctionMix mix = FunctionMix::kHybrid;
  double extra_edge_probability = 0.25;
};

Scenario random_scenario(std::uint64_t seed, const RandomOptions& options = {});

// Minimum over simple paths of the left-to-right sum of link prices.
std::optional<double> brute_force_route(const NetworkGraph& graph,
                                        const NetworkState& state,
                                        const FlowWeights& weights, NodeId from,
                                        NodeId to, Rate rate);

// Minimum weight over every placement sequence joined by MDRA routes whose
// commit succeeds: the unbounded-beam optimum of the stage decomposition.
std::optional<double> brute_force_stage_optimum(const NetworkGraph& graph,
                                                const NfCatalog& catalog,
                                                const NetworkState& state,
                                                const FlowSpec& flow,
                                                const WeightParams& params);

// Objective power minimum over all placements and simple routes of every
// flow, checked by sequential commits. Tiny instances only.
std::optional<Watts> brute_force_optimum(const NetworkGraph& graph,
                                         const NfCatalog& catalog,
                                         const std::vector<FlowSpec>& flows);

// Residuals and census summed directly from the assignments, without the
// incremental editor. Compares equal to a NetworkState cell by cell.
bool matches_from_scratch(const NetworkGraph& graph, const NfCatalog& catalog,
                          const std::vector<FlowSpec>& flows,
                          const std::vector<Assignment>& assignments,
                          const NetworkState& state, std::string* mismatch = nullptr);

}  // namespace hnfv::testing

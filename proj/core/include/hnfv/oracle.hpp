#pragma once

// Exact solver for desk-size instances: depth-first enumeration over flows,
// then chain placements, then simple routes between consecutive placements,
// with branch-and-bound on objective power.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hnfv/capacity.hpp"
#include "hnfv/model.hpp"

namespace hnfv {

struct OracleLimits {
  std::size_t max_nodes = 12;
  std::size_t max_flows = 3;
  std::size_t max_chain = 5;
  // Search-tree expansions before BudgetExceeded.
  std::uint64_t budget = 20'000'000;
};

struct OracleResult {
  // One per flow, in input order.
  std::vector<Assignment> assignments;
  NetworkState state;
  Watts objective_power = 0.0;
  std::uint64_t expansions = 0;
};

// Minimizes objective power with every flow served. Among equal-power optima
// the lexicographically smallest (placements, segment node walks) sequence
// wins. Throws InvalidArgument outside `limits`, BudgetExceeded, Infeasible.
OracleResult exhaustive_solve(const NetworkGraph& graph, const NfCatalog& catalog,
                              const std::vector<FlowSpec>& flows,
                              const OracleLimits& limits = {},
                              const NetworkState* initial = nullptr);

}  // namespace hnfv

#pragma once

// Power model of nodes and links and the per-flow weight assignment that
// steers routing towards components that are already switched on.

#include <vector>

#include "hnfv/capacity.hpp"
#include "hnfv/model.hpp"

namespace hnfv {

struct WeightParams {
  Watts epsilon_node = 1e-6;
  Watts epsilon_link = 1e-6;

  // epsilon = 1e-6 x the smallest positive p_max among nodes and links.
  static WeightParams defaults_for(const NetworkGraph& graph);
};

// a(u). Switches draw p_max when on; function nodes scale linearly with the
// ingress load between theta * p_max and p_max. Throws
// IngressExceedsCapacity when the load exceeds the node's ingress limit.
Watts node_power(const Node& node, bool on, Rate current_ingress);

// a(u,v). Legacy links cannot be switched off, so `on` is ignored for them.
Watts link_power(const Link& link, bool on);

// w^f(u). Clamped below at epsilon_node so that every weight stays positive.
double node_weight(const Node& node, bool on, const FlowSpec& flow,
                   const WeightParams& params);
// w^f(u,v).
double link_weight(const Link& link, bool on, const WeightParams& params);

enum class PowerMode {
  // Z: every node except legacy switches plus SDN links.
  kObjective,
  // Every component that is on.
  kTotal,
};

Watts total_power(const NetworkGraph& graph, const NetworkState& state,
                  PowerMode mode);

// Power of the same network with every component on. Function nodes draw
// their committed load (`loaded`) or sit idle.
Watts reference_power(const NetworkGraph& graph, const NetworkState& state,
                      bool loaded = true);

// Per-flow weights of every node and link, from the state the flow sees.
struct FlowWeights {
  std::vector<double> node;
  std::vector<double> link;
};

FlowWeights compute_flow_weights(const NetworkGraph& graph,
                                 const NetworkState& state, const FlowSpec& flow,
                                 const WeightParams& params);

}  // namespace hnfv

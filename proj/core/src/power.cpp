#include "hnfv/power.hpp"

#include <algorithm>
#include <limits>

#include "hnfv/error.hpp"

namespace hnfv {

WeightParams WeightParams::defaults_for(const NetworkGraph& graph) {
  double smallest = std::numeric_limits<double>::infinity();
  for (const Node& n : graph.nodes()) {
    if (n.p_max > 0.0) smallest = std::min(smallest, n.p_max);
  }
  for (const Link& l : graph.links()) {
    if (l.p_max > 0.0) smallest = std::min(smallest, l.p_max);
  }
  if (!(smallest < std::numeric_limits<double>::infinity())) smallest = 1.0;
  return WeightParams{1e-6 * smallest, 1e-6 * smallest};
}

Watts node_power(const Node& node, bool on, Rate current_ingress) {
  if (!on) return 0.0;
  if (node.is_switch()) return node.p_max;
  if (!node.ingress_capacity) return node.theta * node.p_max;
  const Rate cap = *node.ingress_capacity;
  if (current_ingress > cap) {
    throw Error(ErrorCode::kIngressExceedsCapacity,
                "node " + std::to_string(node.id) + " carries " +
                    std::to_string(current_ingress) + " of " + std::to_string(cap));
  }
  const double load = static_cast<double>(current_ingress) / static_cast<double>(cap);
  return (node.theta + (1.0 - node.theta) * load) * node.p_max;
}

Watts link_power(const Link& link, bool on) {
  if (!link.is_sdn) return link.p_max;
  return on ? link.p_max : 0.0;
}

double node_weight(const Node& node, bool on, const FlowSpec& flow,
                   const WeightParams& params) {
  switch (node.kind) {
    case NodeKind::kNonSdnSwitch:
      return params.epsilon_node;
    case NodeKind::kSdnSwitch:
      return on ? params.epsilon_node : node.p_max;
    case NodeKind::kNfvServer:
    case NodeKind::kPhysicalFunctionNode:
      break;
  }
  if (!on) return std::max(node.theta * node.p_max, params.epsilon_node);
  if (!node.ingress_capacity) return params.epsilon_node;
  // Multiply before dividing so that integral inputs stay exact.
  const double marginal = (1.0 - node.theta) * node.p_max *
                          static_cast<double>(flow.rate) /
                          static_cast<double>(*node.ingress_capacity);
  return std::max(marginal, params.epsilon_node);
}

double link_weight(const Link& link, bool on, const WeightParams& params) {
  if (!link.is_sdn || on) return params.epsilon_link;
  return link.p_max;
}

Watts total_power(const NetworkGraph& graph, const NetworkState& state,
                  PowerMode mode) {
  if (state.node_count() != graph.node_count() ||
      state.link_count() != graph.link_count()) {
    throw Error(ErrorCode::kInconsistentState, "state does not match graph");
  }
  Watts sum = 0.0;
  for (const Node& n : graph.nodes()) {
    if (mode == PowerMode::kObjective && n.kind == NodeKind::kNonSdnSwitch) continue;
    if (!state.node_on(n.id)) continue;
    sum += node_power(n, true, state.node_ingress_load(n.id));
  }
  for (const Link& l : graph.links()) {
    if (mode == PowerMode::kObjective && !l.is_sdn) continue;
    if (!state.link_on(l.id)) continue;
    sum += link_power(l, true);
  }
  return sum;
}

Watts reference_power(const NetworkGraph& graph, const NetworkState& state,
                      bool loaded) {
  Watts sum = 0.0;
  for (const Node& n : graph.nodes()) {
    sum += node_power(n, true, loaded ? state.node_ingress_load(n.id) : 0);
  }
  for (const Link& l : graph.links()) sum += link_power(l, true);
  return sum;
}

FlowWeights compute_flow_weights(const NetworkGraph& graph,
                                 const NetworkState& state, const FlowSpec& flow,
                                 const WeightParams& params) {
  FlowWeights w;
  w.node.reserve(graph.node_count());
  for (const Node& n : graph.nodes()) {
    w.node.push_back(node_weight(n, state.node_on(n.id), flow, params));
  }
  w.link.reserve(graph.link_count());
  for (const Link& l : graph.links()) {
    w.link.push_back(link_weight(l, state.link_on(l.id), params));
  }
  return w;
}

}  // namespace hnfv

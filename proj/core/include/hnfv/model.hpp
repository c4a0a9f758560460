#pragma once

// Domain types for a partially-SDN, hybrid-NFV core network: typed nodes and
// links, the network-function catalog and flows with service chains.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hnfv {

using NodeId = std::int32_t;
using LinkId = std::int32_t;
using NfId = std::int32_t;
using FlowId = std::int32_t;

// Rates and capacities in bits per second. Signed so that replayed residuals
// can go negative and be reported instead of wrapping.
using Rate = std::int64_t;
using Watts = double;

constexpr Rate kMbps = 1'000'000;
constexpr Rate kGbps = 1'000'000'000;

enum class NodeKind {
  kNonSdnSwitch,
  kSdnSwitch,
  kNfvServer,
  kPhysicalFunctionNode,
};

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::kSdnSwitch;
  Watts p_max = 0.0;
  // Idle-to-peak power ratio.
  double theta = 1.0;
  // Node-level ingress limit. Required for physical function nodes; optional
  // for NFV servers (absent means unlimited). Unused for switches.
  std::optional<Rate> ingress_capacity;
  // NFV servers only, one entry per resource type.
  std::vector<double> resource_capacity;
  // Physical function nodes only.
  std::vector<NfId> supported_nfs;

  bool is_switch() const {
    return kind == NodeKind::kNonSdnSwitch || kind == NodeKind::kSdnSwitch;
  }
  bool hosts_functions() const { return !is_switch(); }
  // Everything except legacy switches can be switched on and off.
  bool controllable() const { return kind != NodeKind::kNonSdnSwitch; }
  bool supports(NfId nf) const;
};

struct Link {
  LinkId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  Rate capacity = 0;
  // tau: usable fraction of the capacity.
  double utilization_factor = 1.0;
  Watts p_max = 0.0;
  bool is_sdn = false;

  NodeId other(NodeId end) const { return end == u ? v : u; }
  bool touches(NodeId n) const { return n == u || n == v; }
};

struct NetworkFunction {
  NfId id = 0;
  std::string name;
  std::vector<double> resource_demand;
  // Ingress limit of one virtualized instance.
  Rate processing_capacity = 0;
  double rising_factor = 1.0;
};

class NfCatalog {
 public:
  NfCatalog() = default;
  NfCatalog(std::vector<NetworkFunction> functions, std::size_t resource_types);

  std::size_t size() const { return functions_.size(); }
  std::size_t resource_types() const { return resource_types_; }
  const NetworkFunction& at(NfId id) const;
  const std::vector<NetworkFunction>& functions() const { return functions_; }
  std::optional<NfId> find(std::string_view name) const;
  bool contains(NfId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < functions_.size();
  }
  // Sum of per-instance ingress limits over all functions.
  Rate aggregate_processing_capacity() const;

 private:
  std::vector<NetworkFunction> functions_;
  std::size_t resource_types_ = 1;
};

struct FlowSpec {
  FlowId id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  Rate rate = 0;
  std::vector<NfId> chain;
};

struct GraphOptions {
  // Each NFV server / physical function node hangs off exactly one switch.
  // Hand-drawn fixtures with direct function-node links turn this off.
  bool require_single_attachment = true;
};

class NetworkGraph {
 public:
  NetworkGraph() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Link& link(LinkId id) const { return links_[static_cast<std::size_t>(id)]; }
  bool has_node(NodeId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
  }
  bool has_link(LinkId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < links_.size();
  }
  std::span<const LinkId> incident(NodeId id) const {
    return adjacency_[static_cast<std::size_t>(id)];
  }
  std::optional<LinkId> link_between(NodeId a, NodeId b) const;
  // floor(tau * c): what C11 lets a switched-on link carry.
  Rate usable_capacity(LinkId id) const {
    return usable_[static_cast<std::size_t>(id)];
  }
  std::size_t count(NodeKind kind) const;
  // Nodes that may host a chain position (N_M + N_N).
  std::size_t function_node_count() const {
    return count(NodeKind::kNfvServer) + count(NodeKind::kPhysicalFunctionNode);
  }
  const GraphOptions& options() const { return options_; }

 private:
  friend NetworkGraph build_graph(std::vector<Node>, std::vector<Link>,
                                  GraphOptions);

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> adjacency_;
  std::vector<Rate> usable_;
  GraphOptions options_;
};

// Validates and indexes a topology. Node and link ids must be dense from 0
// (in any input order).
NetworkGraph build_graph(std::vector<Node> nodes, std::vector<Link> links,
                         GraphOptions options = {});

// Derived SDN membership: a link is SDN iff one endpoint is not a legacy switch.
bool derive_is_sdn(const Node& a, const Node& b);

// Half-up rounding of a non-negative real rate to whole bits/s.
Rate round_rate(long double bits_per_second);

// Rate entering chain position `position` (1-based): r * prod_{j<position} gamma_j.
Rate chain_ingress_rate(const FlowSpec& flow, const NfCatalog& catalog,
                        int position);
// Rate leaving the last function of the chain.
Rate chain_egress_rate(const FlowSpec& flow, const NfCatalog& catalog);

void validate_flow(const FlowSpec& flow, const NetworkGraph& graph,
                   const NfCatalog& catalog);

}  // namespace hnfv

#include "hnfv/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hnfv/error.hpp"

namespace hnfv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kServerDegreeViolation: return "ServerDegreeViolation";
    case ErrorCode::kSdnFlagMismatch: return "SdnFlagMismatch";
    case ErrorCode::kInvalidNode: return "InvalidNode";
    case ErrorCode::kInvalidLink: return "InvalidLink";
    case ErrorCode::kInvalidFlow: return "InvalidFlow";
    case ErrorCode::kPositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::kIngressExceedsCapacity: return "IngressExceedsCapacity";
    case ErrorCode::kInconsistentState: return "InconsistentState";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kNoFeasiblePath: return "NoFeasiblePath";
    case ErrorCode::kEmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::kNoExtension: return "NoExtension";
    case ErrorCode::kFlowRejected: return "FlowRejected";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kInfeasibleCounts: return "InfeasibleCounts";
    case ErrorCode::kConfigParseError: return "ConfigParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kDegenerateBaseline: return "DegenerateBaseline";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kNonSdnSwitch: return "nonsdn";
    case NodeKind::kSdnSwitch: return "sdn";
    case NodeKind::kNfvServer: return "nfv";
    case NodeKind::kPhysicalFunctionNode: return "pfn";
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "nonsdn") return NodeKind::kNonSdnSwitch;
  if (text == "sdn") return NodeKind::kSdnSwitch;
  if (text == "nfv") return NodeKind::kNfvServer;
  if (text == "pfn") return NodeKind::kPhysicalFunctionNode;
  return std::nullopt;
}

bool Node::supports(NfId nf) const {
  if (kind == NodeKind::kNfvServer) return true;
  if (kind != NodeKind::kPhysicalFunctionNode) return false;
  return std::find(supported_nfs.begin(), supported_nfs.end(), nf) !=
         supported_nfs.end();
}

NfCatalog::NfCatalog(std::vector<NetworkFunction> functions,
                     std::size_t resource_types)
    : functions_(std::move(functions)), resource_types_(resource_types) {
  std::sort(functions_.begin(), functions_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    const auto& nf = functions_[i];
    if (nf.id != static_cast<NfId>(i)) {
      throw Error(ErrorCode::kDuplicateId,
                  "network function ids must be dense from 0, got " +
                      std::to_string(nf.id));
    }
    if (nf.resource_demand.size() != resource_types_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "function " + nf.name + " has wrong resource vector length");
    }
    if (!(nf.rising_factor > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "function " + nf.name + " needs a positive rising factor");
    }
    if (nf.processing_capacity <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "function " + nf.name + " needs a positive ingress capacity");
    }
    for (double d : nf.resource_demand) {
      if (d < 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "function " + nf.name + " has a negative demand");
      }
    }
  }
}

const NetworkFunction& NfCatalog::at(NfId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown network function " + std::to_string(id));
  }
  return functions_[static_cast<std::size_t>(id)];
}

std::optional<NfId> NfCatalog::find(std::string_view name) const {
  for (const auto& nf : functions_) {
    if (nf.name == name) return nf.id;
  }
  return std::nullopt;
}

Rate NfCatalog::aggregate_processing_capacity() const {
  Rate total = 0;
  for (const auto& nf : functions_) total += nf.processing_capacity;
  return total;
}

std::optional<LinkId> NetworkGraph::link_between(NodeId a, NodeId b) const {
  for (LinkId id : incident(a)) {
    if (link(id).other(a) == b) return id;
  }
  return std::nullopt;
}

std::size_t NetworkGraph::count(NodeKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(),
      [kind](const Node& n) { return n.kind == kind; }));
}

bool derive_is_sdn(const Node& a, const Node& b) {
  return a.kind != NodeKind::kNonSdnSwitch || b.kind != NodeKind::kNonSdnSwitch;
}

namespace {

void check_node(const Node& n) {
  const std::string who = "node " + std::to_string(n.id);
  if (!(n.p_max >= 0.0)) {
    throw Error(ErrorCode::kInvalidNode, who + ": p_max must be >= 0");
  }
  if (!(n.theta >= 0.0 && n.theta <= 1.0)) {
    throw Error(ErrorCode::kInvalidNode, who + ": theta must lie in [0,1]");
  }
  const bool server = n.kind == NodeKind::kNfvServer;
  const bool pfn = n.kind == NodeKind::kPhysicalFunctionNode;
  if (server != !n.resource_capacity.empty()) {
    throw Error(ErrorCode::kInvalidNode,
                who + ": resource capacity is present iff the node is an NFV server");
  }
  if (!pfn && !n.supported_nfs.empty()) {
    throw Error(ErrorCode::kInvalidNode,
                who + ": only physical function nodes list supported functions");
  }
  if (pfn && (!n.ingress_capacity || *n.ingress_capacity <= 0)) {
    throw Error(ErrorCode::kInvalidNode,
                who + ": physical function nodes need a positive ingress capacity");
  }
  if (n.ingress_capacity && *n.ingress_capacity <= 0) {
    throw Error(ErrorCode::kInvalidNode, who + ": ingress capacity must be positive");
  }
  for (double c : n.resource_capacity) {
    if (c < 0.0) throw Error(ErrorCode::kInvalidNode, who + ": negative resource");
  }
}

}  // namespace

NetworkGraph build_graph(std::vector<Node> nodes, std::vector<Link> links,
                         GraphOptions options) {
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  std::sort(links.begin(), links.end(),
            [](const Link& a, const Link& b) { return a.id < b.id; });

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && nodes[i].id == nodes[i - 1].id) {
      throw Error(ErrorCode::kDuplicateId,
                  "node id " + std::to_string(nodes[i].id) + " appears twice");
    }
    if (nodes[i].id != static_cast<NodeId>(i)) {
      throw Error(ErrorCode::kInvalidNode, "node ids must be dense from 0");
    }
    check_node(nodes[i]);
  }
  if (nodes.empty()) {
    throw Error(ErrorCode::kDisconnectedGraph, "graph has no nodes");
  }

  NetworkGraph g;
  g.adjacency_.assign(nodes.size(), {});
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    if (i > 0 && l.id == links[i - 1].id) {
      throw Error(ErrorCode::kDuplicateId,
                  "link id " + std::to_string(l.id) + " appears twice");
    }
    if (l.id != static_cast<LinkId>(i)) {
      throw Error(ErrorCode::kInvalidLink, "link ids must be dense from 0");
    }
    const std::string who = "link " + std::to_string(l.id);
    if (l.u < 0 || l.v < 0 || static_cast<std::size_t>(l.u) >= nodes.size() ||
        static_cast<std::size_t>(l.v) >= nodes.size()) {
      throw Error(ErrorCode::kInvalidLink, who + ": unknown endpoint");
    }
    if (l.u == l.v) throw Error(ErrorCode::kInvalidLink, who + ": self-loop");
    if (l.capacity <= 0) {
      throw Error(ErrorCode::kInvalidLink, who + ": capacity must be positive");
    }
    if (!(l.utilization_factor > 0.0 && l.utilization_factor <= 1.0)) {
      throw Error(ErrorCode::kInvalidLink, who + ": utilization factor outside (0,1]");
    }
    if (!(l.p_max >= 0.0)) {
      throw Error(ErrorCode::kInvalidLink, who + ": p_max must be >= 0");
    }
    if (l.is_sdn != derive_is_sdn(nodes[static_cast<std::size_t>(l.u)],
                                  nodes[static_cast<std::size_t>(l.v)])) {
      throw Error(ErrorCode::kSdnFlagMismatch, who);
    }
    for (LinkId other : g.adjacency_[static_cast<std::size_t>(l.u)]) {
      if (links[static_cast<std::size_t>(other)].other(l.u) == l.v) {
        throw Error(ErrorCode::kInvalidLink, who + ": parallel link");
      }
    }
    g.adjacency_[static_cast<std::size_t>(l.u)].push_back(l.id);
    g.adjacency_[static_cast<std::size_t>(l.v)].push_back(l.id);
  }

  if (options.require_single_attachment) {
    for (const Node& n : nodes) {
      if (!n.hosts_functions()) continue;
      const auto& inc = g.adjacency_[static_cast<std::size_t>(n.id)];
      if (inc.size() != 1 ||
          !nodes[static_cast<std::size_t>(
                     links[static_cast<std::size_t>(inc[0])].other(n.id))]
               .is_switch()) {
        throw Error(ErrorCode::kServerDegreeViolation,
                    "node " + std::to_string(n.id) +
                        " must attach to exactly one switch");
      }
    }
  }

  // Undirected connectivity.
  std::vector<char> seen(nodes.size(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId at = stack.back();
    stack.pop_back();
    for (LinkId id : g.adjacency_[static_cast<std::size_t>(at)]) {
      NodeId nb = links[static_cast<std::size_t>(id)].other(at);
      if (!seen[static_cast<std::size_t>(nb)]) {
        seen[static_cast<std::size_t>(nb)] = 1;
        ++reached;
        stack.push_back(nb);
      }
    }
  }
  if (reached != nodes.size()) {
    throw Error(ErrorCode::kDisconnectedGraph,
                std::to_string(nodes.size() - reached) + " nodes unreachable");
  }

  g.usable_.reserve(links.size());
  for (const Link& l : links) {
    g.usable_.push_back(static_cast<Rate>(
        std::floor(static_cast<long double>(l.utilization_factor) *
                   static_cast<long double>(l.capacity))));
  }
  g.nodes_ = std::move(nodes);
  g.links_ = std::move(links);
  g.options_ = options;
  return g;
}

Rate round_rate(long double bits_per_second) {
  return static_cast<Rate>(std::floor(bits_per_second + 0.5L));
}

Rate chain_ingress_rate(const FlowSpec& flow, const NfCatalog& catalog,
                        int position) {
  if (position < 1 || static_cast<std::size_t>(position) > flow.chain.size()) {
    throw Error(ErrorCode::kPositionOutOfRange,
                "position " + std::to_string(position) + " of chain length " +
                    std::to_string(flow.chain.size()));
  }
  long double rate = static_cast<long double>(flow.rate);
  for (int j = 0; j + 1 < position; ++j) {
    rate *= static_cast<long double>(
        catalog.at(flow.chain[static_cast<std::size_t>(j)]).rising_factor);
  }
  return round_rate(rate);
}

Rate chain_egress_rate(const FlowSpec& flow, const NfCatalog& catalog) {
  long double rate = static_cast<long double>(flow.rate);
  for (NfId nf : flow.chain) {
    rate *= static_cast<long double>(catalog.at(nf).rising_factor);
  }
  return round_rate(rate);
}

void validate_flow(const FlowSpec& flow, const NetworkGraph& graph,
                   const NfCatalog& catalog) {
  const std::string who = "flow " + std::to_string(flow.id);
  if (!graph.has_node(flow.source) || !graph.has_node(flow.destination)) {
    throw Error(ErrorCode::kInvalidFlow, who + ": unknown endpoint");
  }
  if (flow.source == flow.destination) {
    throw Error(ErrorCode::kInvalidFlow, who + ": source equals destination");
  }
  if (flow.rate <= 0) throw Error(ErrorCode::kInvalidFlow, who + ": rate must be > 0");
  if (flow.chain.empty()) throw Error(ErrorCode::kInvalidFlow, who + ": empty chain");
  for (NfId nf : flow.chain) {
    if (!catalog.contains(nf)) {
      throw Error(ErrorCode::kInvalidFlow,
                  who + ": unknown function " + std::to_string(nf));
    }
  }
}

}  // namespace hnfv

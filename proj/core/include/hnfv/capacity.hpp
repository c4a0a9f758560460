#pragma once

// Mutable network state (on/off flags, placed VNFs, residual capacities),
// transactional per-flow commits and a replay validator for C1-C11.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hnfv/model.hpp"

namespace hnfv {

constexpr Rate kUnlimitedRate = std::numeric_limits<Rate>::max() / 4;

class NetworkState {
 public:
  NetworkState() = default;

  std::size_t node_count() const { return node_on_.size(); }
  std::size_t link_count() const { return link_on_.size(); }
  std::size_t nf_count() const { return nf_count_; }
  std::size_t resource_types() const { return resource_types_; }

  bool node_on(NodeId u) const { return node_on_[idx(u)] != 0; }
  bool link_on(LinkId l) const { return link_on_[idx(l)] != 0; }
  // mu_u^k
  bool placed(NodeId u, NfId k) const { return placed_[cell(u, k)] != 0; }

  // Residuals exactly as committed: zero (or the negative of any load) for
  // components that are off.
  double residual_resource(NodeId u, std::size_t l) const {
    return residual_resources_[idx(u) * resource_types_ + l];
  }
  Rate residual_node_ingress(NodeId u) const { return residual_node_ingress_[idx(u)]; }
  Rate residual_vnf_ingress(NodeId u, NfId k) const {
    return residual_vnf_ingress_[cell(u, k)];
  }
  Rate residual_link(LinkId l) const { return residual_link_[idx(l)]; }
  // r^c_u: committed ingress into a function node, consecutive chain
  // positions on the node counted once.
  Rate node_ingress_load(NodeId u) const { return node_ingress_load_[idx(u)]; }

  // Would-be residuals: what the component offers if the algorithm switches
  // it on. Equal to the committed residual when it is already on.
  double effective_resource(const NetworkGraph& g, NodeId u, std::size_t l) const;
  Rate effective_node_ingress(const NetworkGraph& g, NodeId u) const;
  Rate effective_link(const NetworkGraph& g, LinkId l) const;

  std::size_t nodes_on() const;
  std::size_t links_on() const;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;

 private:
  friend NetworkState init_state(const NetworkGraph&, const NfCatalog&);
  friend class StateEditor;

  static std::size_t idx(std::int32_t i) { return static_cast<std::size_t>(i); }
  std::size_t cell(NodeId u, NfId k) const {
    return idx(u) * nf_count_ + idx(k);
  }

  std::size_t nf_count_ = 0;
  std::size_t resource_types_ = 1;
  std::vector<char> node_on_;
  std::vector<char> link_on_;
  std::vector<char> placed_;
  std::vector<double> residual_resources_;
  std::vector<Rate> residual_node_ingress_;
  std::vector<Rate> residual_vnf_ingress_;
  std::vector<Rate> residual_link_;
  std::vector<Rate> node_ingress_load_;
};

// Low-level mutation of a state. Used by commit, replay, fixtures and the
// exhaustive search; keeps the residual bookkeeping in one place.
class StateEditor {
 public:
  StateEditor(const NetworkGraph& graph, const NfCatalog& catalog,
              NetworkState& state)
      : g_(graph), cat_(catalog), s_(state) {}

  // Switching on exposes the full capacity to later deductions.
  void switch_on_node(NodeId u);
  void switch_on_link(LinkId l);
  // Registers mu_u^k = 1 and deducts c_k; switches u on.
  void place_vnf(NodeId u, NfId k);
  void add_node_ingress(NodeId u, Rate rate);
  void add_vnf_ingress(NodeId u, NfId k, Rate rate);
  void add_link_load(LinkId l, Rate rate);

 private:
  const NetworkGraph& g_;
  const NfCatalog& cat_;
  NetworkState& s_;
};

// All controllable nodes and links off, legacy ones on, nothing placed.
NetworkState init_state(const NetworkGraph& graph, const NfCatalog& catalog);

struct Assignment {
  FlowId flow = 0;
  // Node running chain position k (index k-1).
  std::vector<NodeId> placements;
  // K+1 link walks: source->p1, p1->p2, ..., pK->destination. A segment
  // between equal nodes is empty.
  std::vector<std::vector<LinkId>> segments;

  // zeta for positions 1..K: false when the previous position ran on the
  // same function node.
  std::vector<bool> zeta(const NetworkGraph& graph) const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Node sequence of one segment walk starting at `from`. Empty optional when
// the links do not form a walk from `from`.
std::optional<std::vector<NodeId>> walk_nodes(const NetworkGraph& graph,
                                              NodeId from,
                                              std::span<const LinkId> links);

bool check_c5(const NetworkGraph& graph, const NetworkState& state, NodeId node,
              const NetworkFunction& nf);
bool check_c6(const NetworkGraph& graph, const NetworkState& state, NodeId node,
              Rate ingress, bool zeta);
bool check_c7(const NetworkState& state, NodeId node, const NetworkFunction& nf,
              Rate ingress);
bool check_c11(const NetworkState& state, LinkId link, Rate additional_rate);

// Applies one flow's assignment. Throws ValidationFailed, leaving `state`
// untouched, if any constraint would break.
NetworkState commit(const NetworkGraph& graph, const NfCatalog& catalog,
                    const NetworkState& state, const FlowSpec& flow,
                    const Assignment& assignment);

struct Violation {
  std::string tag;  // "C1" ... "C11", or "STATE"
  std::vector<std::int64_t> ids;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(std::string_view tag) const;
};

// One "<tag> <ids...>" line per violation.
void write_report(std::ostream& out, const ValidationReport& report);

// Rebuilds a state from scratch by summing every assignment's usage onto
// `base` (no feasibility checks; residuals may go negative).
NetworkState replay_state(const NetworkGraph& graph, const NfCatalog& catalog,
                          const std::vector<FlowSpec>& flows,
                          const std::vector<Assignment>& assignments,
                          const NetworkState& base);

// Checks C1, C2, placement-implies-on and residual signs of one state.
ValidationReport validate_state(const NetworkGraph& graph, const NetworkState& state);

// Replays all assignments from `initial` (init_state when omitted) and
// reports every C1-C11 violation. When `claimed` is given, its on/off census
// and placements must match the replay.
ValidationReport validate_solution(const NetworkGraph& graph,
                                   const NfCatalog& catalog,
                                   const std::vector<FlowSpec>& flows,
                                   const std::vector<Assignment>& assignments,
                                   const NetworkState* initial = nullptr,
                                   const NetworkState* claimed = nullptr);

}  // namespace hnfv

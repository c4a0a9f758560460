#pragma once

// Modified Viterbi search over a flow's multi-stage graph. Stage 0 is the
// source, stages 1..K hold the nodes able to run each chain position and
// stage K+1 is the destination. Every candidate node keeps the `width`
// lightest partial paths reaching it; each partial path carries its own
// residual deductions so that reusing a node later in the chain is checked
// against what the path itself has already consumed.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hnfv/capacity.hpp"
#include "hnfv/error.hpp"
#include "hnfv/mdra.hpp"
#include "hnfv/model.hpp"
#include "hnfv/power.hpp"

namespace hnfv {

struct BeamConfig {
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
  // psi: paths stored per candidate node and stage.
  std::size_t width = 1;
};

class StagePath {
 public:
  FlowId flow = 0;
  int stage = 0;
  NodeId terminal = 0;
  std::vector<NodeId> placements;
  std::vector<std::vector<LinkId>> segments;
  // Concatenated walk from the source, used for tie-breaking.
  std::vector<NodeId> route_nodes;
  double weight = 0.0;

  // Would-be residuals after this path's own deductions.
  double path_resource(const NetworkGraph& g, const NetworkState& s, NodeId u,
                       std::size_t l) const;
  Rate path_node_ingress(const NetworkGraph& g, const NetworkState& s, NodeId u) const;
  // nullopt when the function is neither placed globally nor by this path.
  std::optional<Rate> path_vnf_ingress(const NetworkState& s, const NfCatalog& c,
                                       NodeId u, NfId k) const;
  Rate path_link(const NetworkGraph& g, const NetworkState& s, LinkId l) const;
  bool places_fresh(NodeId u, NfId k) const;

  // Weight first, then the walk, then the placements.
  friend bool operator<(const StagePath& a, const StagePath& b);

 private:
  friend std::optional<StagePath> try_extend(const NetworkGraph&, const NfCatalog&,
                                             const NetworkState&, const FlowSpec&,
                                             const StagePath&, const RoutedEdge&, int);

  std::vector<std::pair<NodeId, std::vector<double>>> resource_use_;
  std::vector<std::pair<NodeId, NfId>> fresh_vnfs_;
  std::vector<std::pair<std::pair<NodeId, NfId>, Rate>> vnf_ingress_use_;
  std::vector<std::pair<NodeId, Rate>> node_ingress_use_;
  std::vector<std::pair<LinkId, Rate>> link_use_;
};

// Stored paths per candidate node of one stage.
using BeamSet = std::map<NodeId, std::vector<StagePath>>;

enum class RejectReason { kEmptyCandidateSet, kNoExtension, kNoRouteToDestination };

std::string_view to_string(RejectReason reason);

class FlowRejected : public Error {
 public:
  FlowRejected(FlowId flow, int stage, RejectReason reason)
      : Error(ErrorCode::kFlowRejected,
              "flow " + std::to_string(flow) + " at stage " + std::to_string(stage) +
                  ": " + std::string(to_string(reason))),
        stage_(stage),
        reason_(reason) {}
  int stage() const { return stage_; }
  RejectReason reason() const { return reason_; }
  std::size_t mdra_calls() const { return mdra_calls_; }
  void set_mdra_calls(std::size_t calls) { mdra_calls_ = calls; }

 private:
  int stage_;
  RejectReason reason_;
  std::size_t mdra_calls_ = 0;
};

// Pi_k: physical function nodes supporting the function with ingress room
// (or a possible same-node predecessor), NFV servers already running it with
// VNF ingress room, and NFV servers with resources for a fresh instance.
// Throws EmptyCandidateSet.
std::vector<NodeId> candidate_set(const NetworkGraph& graph, const NetworkState& state,
                                  const FlowSpec& flow, const NfCatalog& catalog,
                                  int stage);

// Appends `edge` to `beam` and runs chain position `stage` on edge.to
// (stage K+1 means arriving at the destination). nullopt when the path's own
// residuals cannot take it.
std::optional<StagePath> try_extend(const NetworkGraph& graph, const NfCatalog& catalog,
                                    const NetworkState& state, const FlowSpec& flow,
                                    const StagePath& beam, const RoutedEdge& edge,
                                    int stage);

BeamSet initial_beams(const FlowSpec& flow);

// One MVA step. Throws NoExtension when no candidate keeps any path.
BeamSet extend_stage(const NetworkGraph& graph, const NfCatalog& catalog,
                     const NetworkState& state, const FlowSpec& flow,
                     const Router& router, const BeamSet& previous,
                     const std::vector<NodeId>& candidates, int stage,
                     const BeamConfig& config);

// Connects every surviving stage-K path to the destination; sorted.
std::vector<StagePath> connect_destination(const NetworkGraph& graph,
                                           const NfCatalog& catalog,
                                           const NetworkState& state,
                                           const FlowSpec& flow, const Router& router,
                                           const BeamSet& last);

struct MvaTrace {
  std::vector<std::vector<NodeId>> candidates;  // index k-1
  std::vector<BeamSet> stages;                  // index k, stage 0 included
  std::vector<StagePath> complete;
};

struct MvaResult {
  Assignment assignment;
  NetworkState state;
  double weight = 0.0;
  std::size_t mdra_calls = 0;
};

// Solves and commits one flow. Throws FlowRejected.
MvaResult mva_solve(const NetworkGraph& graph, const NfCatalog& catalog,
                    const NetworkState& state, const FlowSpec& flow,
                    const BeamConfig& config, const WeightParams& params,
                    MvaTrace* trace = nullptr);

struct FlowOutcome {
  FlowId flow = 0;
  std::optional<Assignment> assignment;
  double weight = 0.0;
  int rejected_stage = 0;
  std::optional<RejectReason> rejection;
  std::size_t mdra_calls = 0;
};

struct SolveAllResult {
  std::vector<FlowOutcome> outcomes;
  NetworkState state;
  Watts objective_power = 0.0;
  Watts total_power = 0.0;

  std::vector<Assignment> assignments() const;
};

// Flows in the given order, each against the state left by its
// predecessors. Rejections are outcomes, not errors.
SolveAllResult solve_all(const NetworkGraph& graph, const NfCatalog& catalog,
                         const std::vector<FlowSpec>& flows, const BeamConfig& config,
                         const WeightParams& params,
                         const NetworkState* initial = nullptr);

}  // namespace hnfv

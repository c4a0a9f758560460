#include "hnfv/mva.hpp"

#include <algorithm>
#include <tuple>

namespace hnfv {

namespace {

template <typename Key, typename Value>
Value* find_entry(std::vector<std::pair<Key, Value>>& entries, const Key& key) {
  for (auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

template <typename Key, typename Value>
const Value* find_entry(const std::vector<std::pair<Key, Value>>& entries,
                        const Key& key) {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

template <typename Key>
void add_rate(std::vector<std::pair<Key, Rate>>& entries, const Key& key, Rate rate) {
  if (Rate* v = find_entry(entries, key)) {
    *v += rate;
  } else {
    entries.emplace_back(key, rate);
  }
}

Rate segment_rate(const FlowSpec& flow, const NfCatalog& catalog, int stage) {
  const int k = static_cast<int>(flow.chain.size());
  return stage <= k ? chain_ingress_rate(flow, catalog, stage)
                    : chain_egress_rate(flow, catalog);
}

void keep_lightest(std::vector<StagePath>& pool, std::size_t width) {
  if (pool.size() > width) {
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(width),
                      pool.end());
    pool.resize(width);
  } else {
    std::sort(pool.begin(), pool.end());
  }
}

}  // namespace

double StagePath::path_resource(const NetworkGraph& g, const NetworkState& s, NodeId u,
                                std::size_t l) const {
  double r = s.effective_resource(g, u, l);
  if (const auto* used = find_entry(resource_use_, u)) r -= (*used)[l];
  return r;
}

Rate StagePath::path_node_ingress(const NetworkGraph& g, const NetworkState& s,
                                  NodeId u) const {
  Rate r = s.effective_node_ingress(g, u);
  if (const Rate* used = find_entry(node_ingress_use_, u)) r -= *used;
  return r;
}

std::optional<Rate> StagePath::path_vnf_ingress(const NetworkState& s,
                                                const NfCatalog& c, NodeId u,
                                                NfId k) const {
  Rate r;
  if (s.placed(u, k)) {
    r = s.residual_vnf_ingress(u, k);
  } else if (places_fresh(u, k)) {
    r = c.at(k).processing_capacity;
  } else {
    return std::nullopt;
  }
  if (const Rate* used = find_entry(vnf_ingress_use_, std::pair{u, k})) r -= *used;
  return r;
}

Rate StagePath::path_link(const NetworkGraph& g, const NetworkState& s, LinkId l) const {
  Rate r = s.effective_link(g, l);
  if (const Rate* used = find_entry(link_use_, l)) r -= *used;
  return r;
}

bool StagePath::places_fresh(NodeId u, NfId k) const {
  return std::find(fresh_vnfs_.begin(), fresh_vnfs_.end(), std::pair{u, k}) !=
         fresh_vnfs_.end();
}

bool operator<(const StagePath& a, const StagePath& b) {
  return std::tie(a.weight, a.route_nodes, a.placements) <
         std::tie(b.weight, b.route_nodes, b.placements);
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kEmptyCandidateSet:
      return "EmptyCandidateSet";
    case RejectReason::kNoExtension:
      return "NoExtension";
    case RejectReason::kNoRouteToDestination:
      return "NoRouteToDestination";
  }
  return "?";
}

std::vector<NodeId> candidate_set(const NetworkGraph& graph, const NetworkState& state,
                                  const FlowSpec& flow, const NfCatalog& catalog,
                                  int stage) {
  const NfId nf_id = flow.chain.at(static_cast<std::size_t>(stage - 1));
  const NetworkFunction& nf = catalog.at(nf_id);
  const Rate ingress = chain_ingress_rate(flow, catalog, stage);
  std::vector<NodeId> out;
  for (const Node& n : graph.nodes()) {
    if (n.kind == NodeKind::kPhysicalFunctionNode) {
      if (!n.supports(nf_id)) continue;
      // A same-node predecessor would make this position free of new ingress.
      const bool may_continue =
          stage > 1 && n.supports(flow.chain[static_cast<std::size_t>(stage - 2)]);
      if (may_continue || check_c6(graph, state, n.id, ingress, true)) {
        out.push_back(n.id);
      }
    } else if (n.kind == NodeKind::kNfvServer) {
      const bool ok = state.placed(n.id, nf_id) ? check_c7(state, n.id, nf, ingress)
                                                : check_c5(graph, state, n.id, nf);
      if (ok) out.push_back(n.id);
    }
  }
  if (out.empty()) {
    throw Error(ErrorCode::kEmptyCandidateSet,
                "flow " + std::to_string(flow.id) + " stage " + std::to_string(stage));
  }
  return out;
}

std::optional<StagePath> try_extend(const NetworkGraph& graph, const NfCatalog& catalog,
                                    const NetworkState& state, const FlowSpec& flow,
                                    const StagePath& beam, const RoutedEdge& edge,
                                    int stage) {
  const int chain_length = static_cast<int>(flow.chain.size());
  const Rate rate = segment_rate(flow, catalog, stage);

  StagePath next = beam;
  for (LinkId l : edge.path) {
    if (next.path_link(graph, state, l) < rate) return std::nullopt;
    add_rate(next.link_use_, l, rate);
  }

  if (stage <= chain_length) {
    const NodeId v = edge.to;
    const Node& node = graph.node(v);
    const NfId nf_id = flow.chain[static_cast<std::size_t>(stage - 1)];
    if (!node.supports(nf_id)) return std::nullopt;
    const Rate ingress = chain_ingress_rate(flow, catalog, stage);

    const bool run_start = beam.placements.empty() || beam.placements.back() != v;
    if (run_start && node.ingress_capacity) {
      if (next.path_node_ingress(graph, state, v) < ingress) return std::nullopt;
      add_rate(next.node_ingress_use_, v, ingress);
    }

    if (node.kind == NodeKind::kNfvServer) {
      const NetworkFunction& nf = catalog.at(nf_id);
      if (!state.placed(v, nf_id) && !next.places_fresh(v, nf_id)) {
        for (std::size_t l = 0; l < nf.resource_demand.size(); ++l) {
          if (next.path_resource(graph, state, v, l) < nf.resource_demand[l]) {
            return std::nullopt;
          }
        }
        auto* used = find_entry(next.resource_use_, v);
        if (!used) {
          next.resource_use_.emplace_back(
              v, std::vector<double>(nf.resource_demand.size(), 0.0));
          used = &next.resource_use_.back().second;
        }
        for (std::size_t l = 0; l < nf.resource_demand.size(); ++l) {
          (*used)[l] += nf.resource_demand[l];
        }
        next.fresh_vnfs_.emplace_back(v, nf_id);
      }
      const std::optional<Rate> room = next.path_vnf_ingress(state, catalog, v, nf_id);
      if (!room || *room < ingress) return std::nullopt;
      add_rate(next.vnf_ingress_use_, std::pair{v, nf_id}, ingress);
    }
    next.placements.push_back(v);
  }

  next.segments.push_back(edge.path);
  next.route_nodes.insert(next.route_nodes.end(), edge.nodes.begin() + 1,
                          edge.nodes.end());
  next.weight += edge.weight;
  next.stage = stage;
  next.terminal = edge.to;
  return next;
}

BeamSet initial_beams(const FlowSpec& flow) {
  StagePath start;
  start.flow = flow.id;
  start.terminal = flow.source;
  start.route_nodes = {flow.source};
  return BeamSet{{flow.source, {start}}};
}

BeamSet extend_stage(const NetworkGraph& graph, const NfCatalog& catalog,
                     const NetworkState& state, const FlowSpec& flow,
                     const Router& router, const BeamSet& previous,
                     const std::vector<NodeId>& candidates, int stage,
                     const BeamConfig& config) {
  const Rate rate = segment_rate(flow, catalog, stage);
  BeamSet out;
  for (NodeId v : candidates) {
    std::vector<StagePath> pool;
    for (const auto& [u, beams] : previous) {
      if (beams.empty()) continue;
      const auto edge = router.try_route(u, v, rate);
      if (!edge) continue;
      for (const StagePath& b : beams) {
        if (auto e = try_extend(graph, catalog, state, flow, b, *edge, stage)) {
          pool.push_back(std::move(*e));
        }
      }
    }
    if (pool.empty()) continue;
    keep_lightest(pool, config.width);
    out.emplace(v, std::move(pool));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kNoExtension,
                "flow " + std::to_string(flow.id) + " stage " + std::to_string(stage));
  }
  return out;
}

std::vector<StagePath> connect_destination(const NetworkGraph& graph,
                                           const NfCatalog& catalog,
                                           const NetworkState& state,
                                           const FlowSpec& flow, const Router& router,
                                           const BeamSet& last) {
  const int stage = static_cast<int>(flow.chain.size()) + 1;
  const Rate rate = segment_rate(flow, catalog, stage);
  std::vector<StagePath> out;
  for (const auto& [u, beams] : last) {
    if (beams.empty()) continue;
    const auto edge = router.try_route(u, flow.destination, rate);
    if (!edge) continue;
    for (const StagePath& b : beams) {
      if (auto e = try_extend(graph, catalog, state, flow, b, *edge, stage)) {
        out.push_back(std::move(*e));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Stages 1..K and the destination connection. Throws FlowRejected.
std::vector<StagePath> search(const NetworkGraph& graph, const NfCatalog& catalog,
                              const NetworkState& state, const FlowSpec& flow,
                              const BeamConfig& config, const Router& router,
                              MvaTrace* trace) {
  BeamSet beams = initial_beams(flow);
  if (trace) trace->stages.push_back(beams);
  const int chain_length = static_cast<int>(flow.chain.size());
  for (int k = 1; k <= chain_length; ++k) {
    std::vector<NodeId> candidates;
    try {
      candidates = candidate_set(graph, state, flow, catalog, k);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyCandidateSet) throw;
      throw FlowRejected(flow.id, k, RejectReason::kEmptyCandidateSet);
    }
    try {
      beams = extend_stage(graph, catalog, state, flow, router, beams, candidates, k,
                           config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoExtension) throw;
      throw FlowRejected(flow.id, k, RejectReason::kNoExtension);
    }
    if (trace) {
      trace->candidates.push_back(std::move(candidates));
      trace->stages.push_back(beams);
    }
  }
  std::vector<StagePath> complete =
      connect_destination(graph, catalog, state, flow, router, beams);
  if (trace) trace->complete = complete;
  if (complete.empty()) {
    throw FlowRejected(flow.id, chain_length + 1, RejectReason::kNoRouteToDestination);
  }
  return complete;
}

}  // namespace

MvaResult mva_solve(const NetworkGraph& graph, const NfCatalog& catalog,
                    const NetworkState& state, const FlowSpec& flow,
                    const BeamConfig& config, const WeightParams& params,
                    MvaTrace* trace) {
  validate_flow(flow, graph, catalog);
  if (config.width == 0) {
    throw Error(ErrorCode::kInvalidArgument, "beam width must be positive");
  }
  if (trace) *trace = MvaTrace{};
  Router router(graph, state, compute_flow_weights(graph, state, flow, params));
  std::vector<StagePath> complete;
  try {
    complete = search(graph, catalog, state, flow, config, router, trace);
  } catch (FlowRejected& e) {
    e.set_mdra_calls(router.calls());
    throw;
  }

  const StagePath& best = complete.front();
  MvaResult result;
  result.assignment = Assignment{flow.id, best.placements, best.segments};
  result.state = commit(graph, catalog, state, flow, result.assignment);
  result.weight = best.weight;
  result.mdra_calls = router.calls();
  return result;
}

std::vector<Assignment> SolveAllResult::assignments() const {
  std::vector<Assignment> out;
  for (const FlowOutcome& o : outcomes) {
    if (o.assignment) out.push_back(*o.assignment);
  }
  return out;
}

SolveAllResult solve_all(const NetworkGraph& graph, const NfCatalog& catalog,
                         const std::vector<FlowSpec>& flows, const BeamConfig& config,
                         const WeightParams& params, const NetworkState* initial) {
  SolveAllResult result;
  result.state = initial ? *initial : init_state(graph, catalog);
  for (const FlowSpec& flow : flows) {
    FlowOutcome outcome;
    outcome.flow = flow.id;
    try {
      MvaResult r = mva_solve(graph, catalog, result.state, flow, config, params);
      outcome.assignment = std::move(r.assignment);
      outcome.weight = r.weight;
      outcome.mdra_calls = r.mdra_calls;
      result.state = std::move(r.state);
    } catch (const FlowRejected& e) {
      outcome.rejected_stage = e.stage();
      outcome.rejection = e.reason();
      outcome.mdra_calls = e.mdra_calls();
    }
    result.outcomes.push_back(std::move(outcome));
  }
  result.objective_power = total_power(graph, result.state, PowerMode::kObjective);
  result.total_power = total_power(graph, result.state, PowerMode::kTotal);
  return result;
}

}  // namespace hnfv

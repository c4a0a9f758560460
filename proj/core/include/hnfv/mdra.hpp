#pragma once

// Modified Dijkstra routing: each link is priced at its own weight plus the
// weights of both endpoints, and links that cannot carry the required rate
// are excluded.

#include <cstddef>
#include <optional>
#include <vector>

#include "hnfv/capacity.hpp"
#include "hnfv/model.hpp"
#include "hnfv/power.hpp"

namespace hnfv {

struct RoutedEdge {
  NodeId from = 0;
  NodeId to = 0;
  std::vector<LinkId> path;
  // from, ..., to. A single entry for the self path.
  std::vector<NodeId> nodes;
  double weight = 0.0;
};

// Routes over one (graph, state, flow) snapshot. Weights are fixed at
// construction; the snapshot must outlive the router.
class Router {
 public:
  Router(const NetworkGraph& graph, const NetworkState& state, FlowWeights weights);

  // w~(u,v) = w(u,v) + w(u) + w(v) for a link that fits `required_rate`
  // against its would-be residual; nullopt stands for an infinite price.
  std::optional<double> link_price(LinkId link, Rate required_rate) const;

  // Shortest path by folded weight. Ties go to the lexicographically smallest
  // node sequence. nullopt when every route is priced out.
  std::optional<RoutedEdge> try_route(NodeId from, NodeId to, Rate required_rate) const;
  // Throws NoFeasiblePath instead of returning nullopt.
  RoutedEdge route(NodeId from, NodeId to, Rate required_rate) const;

  std::size_t calls() const { return calls_; }
  const FlowWeights& weights() const { return weights_; }

 private:
  const NetworkGraph& graph_;
  const NetworkState& state_;
  FlowWeights weights_;
  mutable std::size_t calls_ = 0;
};

RoutedEdge mdra_shortest_path(const NetworkGraph& graph, const NetworkState& state,
                              const FlowSpec& flow, NodeId from, NodeId to,
                              Rate required_rate, const WeightParams& params);

}  // namespace hnfv

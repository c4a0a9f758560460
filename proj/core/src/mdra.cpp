#include "hnfv/mdra.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "hnfv/error.hpp"

namespace hnfv {

Router::Router(const NetworkGraph& graph, const NetworkState& state,
               FlowWeights weights)
    : graph_(graph), state_(state), weights_(std::move(weights)) {}

std::optional<double> Router::link_price(LinkId link, Rate required_rate) const {
  if (required_rate > state_.effective_link(graph_, link)) return std::nullopt;
  const Link& l = graph_.link(link);
  return weights_.link[static_cast<std::size_t>(link)] +
         weights_.node[static_cast<std::size_t>(l.u)] +
         weights_.node[static_cast<std::size_t>(l.v)];
}

std::optional<RoutedEdge> Router::try_route(NodeId from, NodeId to,
                                            Rate required_rate) const {
  ++calls_;
  if (from == to) return RoutedEdge{from, to, {}, {from}, 0.0};

  const std::size_t n = graph_.node_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<char> done(n, 0);
  std::vector<std::vector<NodeId>> best(n);
  std::vector<LinkId> via(n, -1);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[static_cast<std::size_t>(from)] = 0.0;
  best[static_cast<std::size_t>(from)] = {from};
  queue.push({0.0, from});

  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (done[ui] || d != dist[ui]) continue;
    done[ui] = 1;
    if (u == to) break;
    for (LinkId id : graph_.incident(u)) {
      auto price = link_price(id, required_rate);
      if (!price) continue;
      const NodeId v = graph_.link(id).other(u);
      const auto vi = static_cast<std::size_t>(v);
      if (done[vi]) continue;
      const double candidate = d + *price;
      if (candidate > dist[vi]) continue;
      std::vector<NodeId> mine = best[ui];
      mine.push_back(v);
      // Equal weight: keep the lexicographically smaller node sequence.
      if (candidate == dist[vi] && !(mine < best[vi])) continue;
      dist[vi] = candidate;
      best[vi] = std::move(mine);
      via[vi] = id;
      queue.push({candidate, v});
    }
  }

  const auto ti = static_cast<std::size_t>(to);
  if (!done[ti]) return std::nullopt;
  RoutedEdge edge{from, to, {}, best[ti], dist[ti]};
  edge.path.reserve(edge.nodes.size() - 1);
  for (NodeId at = to; at != from;) {
    LinkId id = via[static_cast<std::size_t>(at)];
    edge.path.push_back(id);
    at = graph_.link(id).other(at);
  }
  std::reverse(edge.path.begin(), edge.path.end());
  return edge;
}

RoutedEdge Router::route(NodeId from, NodeId to, Rate required_rate) const {
  auto edge = try_route(from, to, required_rate);
  if (!edge) {
    throw Error(ErrorCode::kNoFeasiblePath,
                std::to_string(from) + " -> " + std::to_string(to) + " at " +
                    std::to_string(required_rate) + " bit/s");
  }
  return std::move(*edge);
}

RoutedEdge mdra_shortest_path(const NetworkGraph& graph, const NetworkState& state,
                              const FlowSpec& flow, NodeId from, NodeId to,
                              Rate required_rate, const WeightParams& params) {
  Router router(graph, state, compute_flow_weights(graph, state, flow, params));
  return router.route(from, to, required_rate);
}

}  // namespace hnfv

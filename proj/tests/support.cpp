#include "support.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "hnfv/error.hpp"
#include "hnfv/mdra.hpp"

namespace hnfv::testing {

Scenario load_test_fixture(const std::string& name) {
  return load_fixture(std::string(HNFV_FIXTURE_DIR) + "/" + name);
}

Scenario random_scenario(std::uint64_t seed, const RandomOptions& o) {
  Rng rng(seed, 1000);
  const auto n = static_cast<NodeId>(rng.uniform_int(
      static_cast<std::int64_t>(o.min_nodes), static_cast<std::int64_t>(o.max_nodes)));

  const auto nf_count = static_cast<NfId>(rng.uniform_int(2, 4));
  const Rate ingress_choices[] = {200 * kMbps, 500 * kMbps, kGbps};
  const double gammas[] = {1.0, 1.0, 1.1, 0.8};
  std::vector<NetworkFunction> nfs;
  for (NfId k = 0; k < nf_count; ++k) {
    nfs.push_back({k, "f" + std::to_string(k),
                   {static_cast<double>(rng.uniform_int(1, 6))},
                   ingress_choices[rng.uniform_int(0, 2)], gammas[rng.uniform_int(0, 3)]});
  }
  NfCatalog catalog(std::move(nfs), 1);

  std::vector<Node> nodes;
  const double thetas[] = {0.3, 0.5, 0.8, 1.0};
  for (NodeId id = 0; id < n; ++id) {
    Node node;
    node.id = id;
    // The first two nodes are switches so every instance has flow endpoints.
    const bool function = id >= 2 && rng.uniform() < 0.5;
    if (!function) {
      node.kind = rng.uniform() < 0.75 ? NodeKind::kSdnSwitch : NodeKind::kNonSdnSwitch;
      node.p_max = static_cast<double>(rng.uniform_int(1, 10));
    } else {
      bool nfv = rng.uniform() < 0.5;
      if (o.mix == FunctionMix::kNfvOnly) nfv = true;
      if (o.mix == FunctionMix::kPhysicalOnly) nfv = false;
      node.theta = thetas[rng.uniform_int(0, 3)];
      if (nfv) {
        node.kind = NodeKind::kNfvServer;
        node.p_max = static_cast<double>(rng.uniform_int(5, 50));
        node.resource_capacity = {static_cast<double>(rng.uniform_int(6, 16))};
        if (rng.uniform() < 0.5) node.ingress_capacity = ingress_choices[rng.uniform_int(1, 2)] * 2;
      } else {
        node.kind = NodeKind::kPhysicalFunctionNode;
        node.p_max = static_cast<double>(rng.uniform_int(10, 100));
        node.ingress_capacity = ingress_choices[rng.uniform_int(0, 2)] * 2;
        for (NfId k = 0; k < nf_count; ++k) {
          if (rng.uniform() < 0.5) node.supported_nfs.push_back(k);
        }
        if (node.supported_nfs.empty()) {
          node.supported_nfs.push_back(static_cast<NfId>(rng.uniform_int(0, nf_count - 1)));
        }
      }
    }
    nodes.push_back(std::move(node));
  }

  std::vector<Link> links;
  std::vector<std::vector<char>> adjacent(static_cast<std::size_t>(n),
                                          std::vector<char>(static_cast<std::size_t>(n), 0));
  auto add_link = [&](NodeId u, NodeId v) {
    if (u == v || adjacent[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) return;
    adjacent[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
    adjacent[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    Link l;
    l.id = static_cast<LinkId>(links.size());
    l.u = u;
    l.v = v;
    l.capacity = rng.uniform_int(50, 1000) * kMbps;
    l.utilization_factor = rng.uniform() < 0.2 ? 0.9 : 1.0;
    l.p_max = static_cast<double>(rng.uniform_int(1, 5));
    l.is_sdn = derive_is_sdn(nodes[static_cast<std::size_t>(u)],
                             nodes[static_cast<std::size_t>(v)]);
    links.push_back(l);
  };
  for (NodeId v = 1; v < n; ++v) add_link(static_cast<NodeId>(rng.uniform_int(0, v - 1)), v);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < o.extra_edge_probability) add_link(u, v);
    }
  }

  Scenario s;
  s.name = "random-" + std::to_string(seed);
  s.graph = build_graph(std::move(nodes), std::move(links), GraphOptions{false});
  s.catalog = std::move(catalog);
  std::vector<NodeId> switches;
  for (const Node& node : s.graph.nodes()) {
    if (node.is_switch()) switches.push_back(node.id);
  }
  const auto flow_count = rng.uniform_int(1, static_cast<std::int64_t>(o.max_flows));
  for (std::int64_t i = 0; i < flow_count; ++i) {
    FlowSpec f;
    f.id = static_cast<FlowId>(i);
    const auto last = static_cast<std::int64_t>(switches.size() - 1);
    f.source = switches[static_cast<std::size_t>(rng.uniform_int(0, last))];
    f.destination = switches[static_cast<std::size_t>(rng.uniform_int(0, last - 1))];
    if (f.destination == f.source) f.destination = switches.back();
    f.rate = rng.uniform_int(10, 400) * kMbps;
    const auto len = rng.uniform_int(1, static_cast<std::int64_t>(o.max_chain));
    for (std::int64_t k = 0; k < len; ++k) {
      f.chain.push_back(static_cast<NfId>(rng.uniform_int(0, nf_count - 1)));
    }
    s.flows.push_back(std::move(f));
  }
  s.initial = init_state(s.graph, s.catalog);
  return s;
}

std::optional<double> brute_force_route(const NetworkGraph& graph,
                                        const NetworkState& state,
                                        const FlowWeights& weights, NodeId from,
                                        NodeId to, Rate rate) {
  if (from == to) return 0.0;
  std::optional<double> best;
  std::vector<char> visited(graph.node_count(), 0);
  std::function<void(NodeId, double)> dfs = [&](NodeId at, double sum) {
    if (at == to) {
      if (!best || sum < *best) best = sum;
      return;
    }
    visited[static_cast<std::size_t>(at)] = 1;
    for (const Link& l : graph.links()) {
      if (!l.touches(at)) continue;
      const NodeId v = l.other(at);
      if (visited[static_cast<std::size_t>(v)]) continue;
      const Rate room = state.link_on(l.id) ? state.residual_link(l.id)
                                            : graph.usable_capacity(l.id);
      if (room < rate) continue;
      const double price = weights.link[static_cast<std::size_t>(l.id)] +
                           weights.node[static_cast<std::size_t>(l.u)] +
                           weights.node[static_cast<std::size_t>(l.v)];
      dfs(v, sum + price);
    }
    visited[static_cast<std::size_t>(at)] = 0;
  };
  dfs(from, 0.0);
  return best;
}

std::optional<double> brute_force_stage_optimum(const NetworkGraph& graph,
                                                const NfCatalog& catalog,
                                                const NetworkState& state,
                                                const FlowSpec& flow,
                                                const WeightParams& params) {
  Router router(graph, state, compute_flow_weights(graph, state, flow, params));
  const std::size_t k_count = flow.chain.size();
  std::optional<double> best;
  std::vector<NodeId> placements;
  std::function<void()> place = [&]() {
    const std::size_t k = placements.size();
    if (k == k_count) {
      Assignment a{flow.id, placements, {}};
      double weight = 0.0;
      for (std::size_t i = 0; i <= k_count; ++i) {
        const NodeId from = i == 0 ? flow.source : placements[i - 1];
        const NodeId to = i == k_count ? flow.destination : placements[i];
        const Rate rate = i < k_count
                              ? chain_ingress_rate(flow, catalog, static_cast<int>(i + 1))
                              : chain_egress_rate(flow, catalog);
        auto edge = router.try_route(from, to, rate);
        if (!edge) return;
        weight += edge->weight;
        a.segments.push_back(edge->path);
      }
      try {
        commit(graph, catalog, state, flow, a);
      } catch (const Error&) {
        return;
      }
      if (!best || weight < *best) best = weight;
      return;
    }
    for (const Node& n : graph.nodes()) {
      if (!n.hosts_functions() || !n.supports(flow.chain[k])) continue;
      placements.push_back(n.id);
      place();
      placements.pop_back();
    }
  };
  place();
  return best;
}

namespace {

void simple_paths(const NetworkGraph& graph, NodeId from, NodeId to,
                  std::vector<std::vector<LinkId>>& out) {
  std::vector<char> visited(graph.node_count(), 0);
  std::vector<LinkId> path;
  std::function<void(NodeId)> dfs = [&](NodeId at) {
    if (at == to) {
      out.push_back(path);
      return;
    }
    visited[static_cast<std::size_t>(at)] = 1;
    for (const Link& l : graph.links()) {
      if (!l.touches(at) || visited[static_cast<std::size_t>(l.other(at))]) continue;
      path.push_back(l.id);
      dfs(l.other(at));
      path.pop_back();
    }
    visited[static_cast<std::size_t>(at)] = 0;
  };
  dfs(from);
}

}  // namespace

std::optional<Watts> brute_force_optimum(const NetworkGraph& graph,
                                         const NfCatalog& catalog,
                                         const std::vector<FlowSpec>& flows) {
  std::map<std::pair<NodeId, NodeId>, std::vector<std::vector<LinkId>>> paths;
  auto paths_between = [&](NodeId a, NodeId b) -> const std::vector<std::vector<LinkId>>& {
    auto it = paths.find({a, b});
    if (it == paths.end()) {
      std::vector<std::vector<LinkId>> found;
      simple_paths(graph, a, b, found);
      it = paths.emplace(std::pair{a, b}, std::move(found)).first;
    }
    return it->second;
  };

  std::optional<Watts> best;
  std::function<void(std::size_t, const NetworkState&)> next_flow;
  next_flow = [&](std::size_t fi, const NetworkState& state) {
    if (fi == flows.size()) {
      const Watts z = total_power(graph, state, PowerMode::kObjective);
      if (!best || z < *best) best = z;
      return;
    }
    const FlowSpec& f = flows[fi];
    std::vector<NodeId> placements;
    std::function<void()> place = [&]() {
      if (placements.size() < f.chain.size()) {
        for (const Node& n : graph.nodes()) {
          if (!n.hosts_functions() || !n.supports(f.chain[placements.size()])) continue;
          placements.push_back(n.id);
          place();
          placements.pop_back();
        }
        return;
      }
      Assignment a{f.id, placements, {}};
      std::function<void(std::size_t)> route = [&](std::size_t i) {
        if (i > f.chain.size()) {
          try {
            next_flow(fi + 1, commit(graph, catalog, state, f, a));
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kValidationFailed) throw;
          }
          return;
        }
        const NodeId from = i == 0 ? f.source : placements[i - 1];
        const NodeId to = i == f.chain.size() ? f.destination : placements[i];
        for (const auto& p : paths_between(from, to)) {
          a.segments.push_back(p);
          route(i + 1);
          a.segments.pop_back();
        }
      };
      route(0);
    };
    place();
  };
  next_flow(0, init_state(graph, catalog));
  return best;
}

bool matches_from_scratch(const NetworkGraph& graph, const NfCatalog& catalog,
                          const std::vector<FlowSpec>& flows,
                          const std::vector<Assignment>& assignments,
                          const NetworkState& state, std::string* mismatch) {
  const std::size_t n = graph.node_count();
  const std::size_t K = catalog.size();
  std::vector<char> node_touched(n, 0), link_touched(graph.link_count(), 0);
  std::vector<char> placed(n * K, 0);
  std::vector<Rate> node_load(n, 0), vnf_load(n * K, 0), link_load(graph.link_count(), 0);

  for (const Assignment& a : assignments) {
    const FlowSpec& f = *std::find_if(flows.begin(), flows.end(),
                                      [&](const FlowSpec& x) { return x.id == a.flow; });
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
      const Rate rate = i < f.chain.size()
                            ? chain_ingress_rate(f, catalog, static_cast<int>(i + 1))
                            : chain_egress_rate(f, catalog);
      for (LinkId l : a.segments[i]) {
        link_touched[static_cast<std::size_t>(l)] = 1;
        node_touched[static_cast<std::size_t>(graph.link(l).u)] = 1;
        node_touched[static_cast<std::size_t>(graph.link(l).v)] = 1;
        link_load[static_cast<std::size_t>(l)] += rate;
      }
    }
    for (std::size_t k = 0; k < a.placements.size(); ++k) {
      const auto u = static_cast<std::size_t>(a.placements[k]);
      const Rate ingress = chain_ingress_rate(f, catalog, static_cast<int>(k + 1));
      node_touched[u] = 1;
      if (k == 0 || a.placements[k - 1] != a.placements[k]) node_load[u] += ingress;
      if (graph.node(a.placements[k]).kind == NodeKind::kNfvServer) {
        const std::size_t cell = u * K + static_cast<std::size_t>(f.chain[k]);
        placed[cell] = 1;
        vnf_load[cell] += ingress;
      }
    }
  }

  auto fail = [&](const std::string& what) {
    if (mismatch) *mismatch = what;
    return false;
  };
  for (const Node& node : graph.nodes()) {
    const auto u = static_cast<std::size_t>(node.id);
    const bool on = !node.controllable() || node_touched[u];
    if (state.node_on(node.id) != on) return fail("on flag of node " + std::to_string(u));
    if (state.node_ingress_load(node.id) != node_load[u]) {
      return fail("ingress load of node " + std::to_string(u));
    }
    const Rate ingress = on && node.ingress_capacity ? *node.ingress_capacity - node_load[u] : 0;
    if (state.residual_node_ingress(node.id) != ingress) {
      return fail("node ingress residual of " + std::to_string(u));
    }
    for (std::size_t l = 0; l < catalog.resource_types(); ++l) {
      double expected = 0.0;
      if (on && l < node.resource_capacity.size()) {
        double used = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          if (placed[u * K + k]) used += catalog.at(static_cast<NfId>(k)).resource_demand[l];
        }
        expected = node.resource_capacity[l] - used;
      }
      if (state.residual_resource(node.id, l) != expected) {
        return fail("resource residual of node " + std::to_string(u));
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      const auto nf = static_cast<NfId>(k);
      if (state.placed(node.id, nf) != (placed[u * K + k] != 0)) {
        return fail("placement of " + std::to_string(k) + " on " + std::to_string(u));
      }
      const Rate expected =
          placed[u * K + k] ? catalog.at(nf).processing_capacity - vnf_load[u * K + k] : 0;
      if (state.residual_vnf_ingress(node.id, nf) != expected) {
        return fail("vnf ingress residual of " + std::to_string(k) + " on " +
                    std::to_string(u));
      }
    }
  }
  for (const Link& l : graph.links()) {
    const auto i = static_cast<std::size_t>(l.id);
    const bool on = !l.is_sdn || link_touched[i];
    if (state.link_on(l.id) != on) return fail("on flag of link " + std::to_string(i));
    const Rate expected = on ? graph.usable_capacity(l.id) - link_load[i] : 0;
    if (state.residual_link(l.id) != expected) {
      return fail("residual of link " + std::to_string(i));
    }
  }
  return true;
}

}  // namespace hnfv::testing

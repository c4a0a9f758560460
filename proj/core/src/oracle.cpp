#include "hnfv/oracle.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <string>

#include "hnfv/error.hpp"
#include "hnfv/power.hpp"

namespace hnfv {

namespace {

class Search {
 public:
  Search(const NetworkGraph& g, const NfCatalog& c, const std::vector<FlowSpec>& flows,
         const OracleLimits& limits)
      : g_(g), cat_(c), flows_(flows), limits_(limits) {
    for (const FlowSpec& f : flows_) {
      std::vector<std::vector<NodeId>> per_position;
      for (NfId nf : f.chain) {
        std::vector<NodeId> eligible;
        for (const Node& n : g_.nodes()) {
          if (n.hosts_functions() && n.supports(nf)) eligible.push_back(n.id);
        }
        per_position.push_back(std::move(eligible));
      }
      eligible_.push_back(std::move(per_position));
    }
    current_.resize(flows_.size());
    none_.assign(g_.node_count(), 0);
  }

  void run(const NetworkState& start) {
    if (statically_feasible()) next_flow(0, start);
  }

  const std::optional<OracleResult>& best() const { return best_; }
  std::uint64_t expansions() const { return expansions_; }

 private:
  void tick() {
    if (++expansions_ > limits_.budget) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "more than " + std::to_string(limits_.budget) + " expansions");
    }
  }

  // Every chain position needs a node that could take it on an empty network.
  bool statically_feasible() const {
    for (std::size_t fi = 0; fi < flows_.size(); ++fi) {
      const FlowSpec& f = flows_[fi];
      for (std::size_t k = 0; k < f.chain.size(); ++k) {
        const NetworkFunction& nf = cat_.at(f.chain[k]);
        const Rate ingress = chain_ingress_rate(f, cat_, static_cast<int>(k + 1));
        const auto& nodes = eligible_[fi][k];
        const bool any = std::any_of(nodes.begin(), nodes.end(), [&](NodeId v) {
          const Node& n = g_.node(v);
          if (n.ingress_capacity && *n.ingress_capacity < ingress) return false;
          if (n.kind != NodeKind::kNfvServer) return true;
          if (nf.processing_capacity < ingress) return false;
          for (std::size_t l = 0; l < nf.resource_demand.size(); ++l) {
            const double cap = l < n.resource_capacity.size() ? n.resource_capacity[l] : 0.0;
            if (nf.resource_demand[l] > cap) return false;
          }
          return true;
        });
        if (!any) return false;
      }
    }
    return true;
  }

  bool pruned(const NetworkState& s) const {
    return best_ && total_power(g_, s, PowerMode::kObjective) >= best_->objective_power;
  }

  void next_flow(std::size_t fi, const NetworkState& s) {
    if (fi == flows_.size()) {
      const Watts z = total_power(g_, s, PowerMode::kObjective);
      if (!best_ || z < best_->objective_power) {
        best_ = OracleResult{current_, s, z, 0};
      }
      return;
    }
    Assignment& a = current_[fi];
    a = Assignment{flows_[fi].id, {}, {}};
    place(fi, 0, s);
  }

  void place(std::size_t fi, std::size_t k, const NetworkState& s) {
    const FlowSpec& f = flows_[fi];
    Assignment& a = current_[fi];
    if (k == f.chain.size()) {
      a.segments.clear();
      route(fi, 0, s);
      return;
    }
    const NfId nf = f.chain[k];
    const Rate ingress = chain_ingress_rate(f, cat_, static_cast<int>(k + 1));
    for (NodeId v : eligible_[fi][k]) {
      tick();
      NetworkState next = s;
      StateEditor ed(g_, cat_, next);
      ed.switch_on_node(v);
      const Node& n = g_.node(v);
      if (k == 0 || a.placements[k - 1] != v) {
        ed.add_node_ingress(v, ingress);
        if (n.ingress_capacity && next.residual_node_ingress(v) < 0) continue;
      }
      if (n.kind == NodeKind::kNfvServer) {
        ed.place_vnf(v, nf);
        ed.add_vnf_ingress(v, nf, ingress);
        bool fits = next.residual_vnf_ingress(v, nf) >= 0;
        for (std::size_t l = 0; l < next.resource_types(); ++l) {
          fits = fits && next.residual_resource(v, l) >= 0.0;
        }
        if (!fits) continue;
      }
      if (pruned(next)) continue;
      a.placements.push_back(v);
      place(fi, k + 1, next);
      a.placements.pop_back();
    }
  }

  void route(std::size_t fi, std::size_t i, const NetworkState& s) {
    const FlowSpec& f = flows_[fi];
    Assignment& a = current_[fi];
    const std::size_t k_count = f.chain.size();
    if (i == k_count + 1) {
      next_flow(fi + 1, s);
      return;
    }
    const NodeId from = i == 0 ? f.source : a.placements[i - 1];
    const NodeId to = i == k_count ? f.destination : a.placements[i];
    const Rate rate = i < k_count ? chain_ingress_rate(f, cat_, static_cast<int>(i + 1))
                                  : chain_egress_rate(f, cat_);
    std::vector<char> visited(g_.node_count(), 0);
    visited[static_cast<std::size_t>(from)] = 1;
    a.segments.emplace_back();
    walk(fi, i, from, to, rate, visited, s);
    a.segments.pop_back();
  }

  // Simple paths in lexicographic order of their node sequences.
  void walk(std::size_t fi, std::size_t i, NodeId at, NodeId to, Rate rate,
            std::vector<char>& visited, const NetworkState& s) {
    Assignment& a = current_[fi];
    if (at == to) {
      route(fi, i + 1, s);
      return;
    }
    std::vector<std::pair<NodeId, LinkId>> steps;
    for (LinkId l : g_.incident(at)) steps.emplace_back(g_.link(l).other(at), l);
    std::sort(steps.begin(), steps.end());
    for (auto [v, l] : steps) {
      const auto vi = static_cast<std::size_t>(v);
      if (visited[vi]) continue;
      tick();
      if (s.effective_link(g_, l) < rate) continue;
      NetworkState next = s;
      StateEditor ed(g_, cat_, next);
      ed.switch_on_node(at);
      ed.switch_on_node(v);
      ed.switch_on_link(l);
      ed.add_link_load(l, rate);
      if (pruned(next)) continue;
      visited[vi] = 1;
      if (!completable(fi, i, v, to, rate, visited, next)) {
        visited[vi] = 0;
        continue;
      }
      a.segments.back().push_back(l);
      walk(fi, i, v, to, rate, visited, next);
      a.segments.back().pop_back();
      visited[vi] = 0;
    }
  }

  // Whether `to` is reachable from `from` over unvisited nodes and links with
  // room for `rate`.
  bool reachable(NodeId from, NodeId to, Rate rate, const std::vector<char>& visited,
                 const NetworkState& s) {
    const NodeId targets[] = {to};
    return reachable_any(from, targets, rate, visited, s);
  }

  bool reachable_any(NodeId from, std::span<const NodeId> targets, Rate rate,
                     const std::vector<char>& visited, const NetworkState& s) {
    auto is_target = [&](NodeId v) {
      return std::find(targets.begin(), targets.end(), v) != targets.end();
    };
    if (is_target(from)) return true;
    seen_.assign(g_.node_count(), 0);
    stack_.assign(1, from);
    seen_[static_cast<std::size_t>(from)] = 1;
    while (!stack_.empty()) {
      const NodeId at = stack_.back();
      stack_.pop_back();
      for (LinkId l : g_.incident(at)) {
        const NodeId v = g_.link(l).other(at);
        const auto vi = static_cast<std::size_t>(v);
        if (seen_[vi] || s.effective_link(g_, l) < rate) continue;
        if (is_target(v)) return true;
        if (visited[vi]) continue;
        seen_[vi] = 1;
        stack_.push_back(v);
      }
    }
    return false;
  }

  // Later flows must still be able to leave their source and reach their
  // destination.
  bool later_flows_routable(std::size_t fi, const NetworkState& s) {
    for (std::size_t fj = fi + 1; fj < flows_.size(); ++fj) {
      const FlowSpec& f = flows_[fj];
      const Rate first = chain_ingress_rate(f, cat_, 1);
      if (!reachable_any(f.source, eligible_[fj].front(), first, none_, s)) return false;
      const Rate last = chain_egress_rate(f, cat_);
      if (!reachable_any(f.destination, eligible_[fj].back(), last, none_, s)) return false;
    }
    return true;
  }

  // Necessary condition for finishing the flow after stepping onto `at`: the
  // open segment can still reach its end and every later segment is routable.
  bool completable(std::size_t fi, std::size_t i, NodeId at, NodeId to, Rate rate,
                   const std::vector<char>& visited, const NetworkState& s) {
    if (!reachable(at, to, rate, visited, s)) return false;
    const FlowSpec& f = flows_[fi];
    const Assignment& a = current_[fi];
    const std::size_t k_count = f.chain.size();
    for (std::size_t j = i + 1; j <= k_count; ++j) {
      const NodeId from = a.placements[j - 1];
      const NodeId end = j == k_count ? f.destination : a.placements[j];
      const Rate r = j < k_count ? chain_ingress_rate(f, cat_, static_cast<int>(j + 1))
                                 : chain_egress_rate(f, cat_);
      if (!reachable(from, end, r, none_, s)) return false;
    }
    return later_flows_routable(fi, s);
  }

  const NetworkGraph& g_;
  const NfCatalog& cat_;
  const std::vector<FlowSpec>& flows_;
  OracleLimits limits_;
  std::vector<std::vector<std::vector<NodeId>>> eligible_;
  std::vector<Assignment> current_;
  std::optional<OracleResult> best_;
  std::uint64_t expansions_ = 0;
  std::vector<char> none_;
  std::vector<char> seen_;
  std::vector<NodeId> stack_;
};

}  // namespace

OracleResult exhaustive_solve(const NetworkGraph& graph, const NfCatalog& catalog,
                              const std::vector<FlowSpec>& flows,
                              const OracleLimits& limits, const NetworkState* initial) {
  if (graph.node_count() > limits.max_nodes || flows.size() > limits.max_flows) {
    throw Error(ErrorCode::kInvalidArgument, "instance exceeds oracle limits");
  }
  for (const FlowSpec& f : flows) {
    validate_flow(f, graph, catalog);
    if (f.chain.size() > limits.max_chain) {
      throw Error(ErrorCode::kInvalidArgument, "chain exceeds oracle limits");
    }
  }
  const NetworkState start = initial ? *initial : init_state(graph, catalog);
  Search search(graph, catalog, flows, limits);
  search.run(start);
  if (!search.best()) {
    throw Error(ErrorCode::kInfeasible, "no assignment serves every flow");
  }
  OracleResult result = *search.best();
  result.expansions = search.expansions();
  const ValidationReport report =
      validate_solution(graph, catalog, flows, result.assignments, &start, &result.state);
  if (!report.ok()) {
    throw Error(ErrorCode::kInconsistentState, "oracle produced an invalid solution");
  }
  return result;
}

}  // namespace hnfv

#include "hnfv/capacity.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "hnfv/error.hpp"

namespace hnfv {

double NetworkState::effective_resource(const NetworkGraph& g, NodeId u,
                                        std::size_t l) const {
  if (node_on(u)) return residual_resource(u, l);
  const Node& n = g.node(u);
  return l < n.resource_capacity.size() ? n.resource_capacity[l] : 0.0;
}

Rate NetworkState::effective_node_ingress(const NetworkGraph& g, NodeId u) const {
  const Node& n = g.node(u);
  if (!n.ingress_capacity) return kUnlimitedRate;
  return node_on(u) ? residual_node_ingress(u) : *n.ingress_capacity;
}

Rate NetworkState::effective_link(const NetworkGraph& g, LinkId l) const {
  return link_on(l) ? residual_link(l) : g.usable_capacity(l);
}

std::size_t NetworkState::nodes_on() const {
  return static_cast<std::size_t>(std::count(node_on_.begin(), node_on_.end(), 1));
}

std::size_t NetworkState::links_on() const {
  return static_cast<std::size_t>(std::count(link_on_.begin(), link_on_.end(), 1));
}

NetworkState init_state(const NetworkGraph& graph, const NfCatalog& catalog) {
  NetworkState s;
  const std::size_t n = graph.node_count();
  s.nf_count_ = catalog.size();
  s.resource_types_ = catalog.resource_types();
  s.node_on_.assign(n, 0);
  s.link_on_.assign(graph.link_count(), 0);
  s.placed_.assign(n * s.nf_count_, 0);
  s.residual_resources_.assign(n * s.resource_types_, 0.0);
  s.residual_node_ingress_.assign(n, 0);
  s.residual_vnf_ingress_.assign(n * s.nf_count_, 0);
  s.residual_link_.assign(graph.link_count(), 0);
  s.node_ingress_load_.assign(n, 0);
  for (const Node& node : graph.nodes()) {
    if (!node.controllable()) s.node_on_[NetworkState::idx(node.id)] = 1;
  }
  for (const Link& link : graph.links()) {
    if (!link.is_sdn) {
      s.link_on_[NetworkState::idx(link.id)] = 1;
      s.residual_link_[NetworkState::idx(link.id)] = graph.usable_capacity(link.id);
    }
  }
  return s;
}

void StateEditor::switch_on_node(NodeId u) {
  auto i = NetworkState::idx(u);
  if (s_.node_on_[i]) return;
  s_.node_on_[i] = 1;
  const Node& n = g_.node(u);
  for (std::size_t l = 0; l < n.resource_capacity.size() && l < s_.resource_types_; ++l) {
    s_.residual_resources_[i * s_.resource_types_ + l] += n.resource_capacity[l];
  }
  if (n.ingress_capacity) s_.residual_node_ingress_[i] += *n.ingress_capacity;
}

void StateEditor::switch_on_link(LinkId l) {
  auto i = NetworkState::idx(l);
  if (s_.link_on_[i]) return;
  s_.link_on_[i] = 1;
  s_.residual_link_[i] += g_.usable_capacity(l);
}

void StateEditor::place_vnf(NodeId u, NfId k) {
  const auto c = s_.cell(u, k);
  if (s_.placed_[c]) return;
  switch_on_node(u);
  s_.placed_[c] = 1;
  const auto& nf = cat_.at(k);
  const auto base = NetworkState::idx(u) * s_.resource_types_;
  for (std::size_t l = 0; l < s_.resource_types_; ++l) {
    s_.residual_resources_[base + l] -= nf.resource_demand[l];
  }
  s_.residual_vnf_ingress_[c] += nf.processing_capacity;
}

void StateEditor::add_node_ingress(NodeId u, Rate rate) {
  auto i = NetworkState::idx(u);
  s_.node_ingress_load_[i] += rate;
  if (g_.node(u).ingress_capacity) s_.residual_node_ingress_[i] -= rate;
}

void StateEditor::add_vnf_ingress(NodeId u, NfId k, Rate rate) {
  s_.residual_vnf_ingress_[s_.cell(u, k)] -= rate;
}

void StateEditor::add_link_load(LinkId l, Rate rate) {
  s_.residual_link_[NetworkState::idx(l)] -= rate;
}

std::vector<bool> Assignment::zeta(const NetworkGraph& graph) const {
  std::vector<bool> z(placements.size(), true);
  for (std::size_t k = 1; k < placements.size(); ++k) {
    if (placements[k] == placements[k - 1] && graph.node(placements[k]).hosts_functions()) {
      z[k] = false;
    }
  }
  return z;
}

std::optional<std::vector<NodeId>> walk_nodes(const NetworkGraph& graph,
                                              NodeId from,
                                              std::span<const LinkId> links) {
  std::vector<NodeId> nodes{from};
  NodeId at = from;
  for (LinkId id : links) {
    if (!graph.has_link(id)) return std::nullopt;
    const Link& l = graph.link(id);
    if (!l.touches(at)) return std::nullopt;
    at = l.other(at);
    nodes.push_back(at);
  }
  return nodes;
}

bool check_c5(const NetworkGraph& graph, const NetworkState& state, NodeId node,
              const NetworkFunction& nf) {
  for (std::size_t l = 0; l < nf.resource_demand.size(); ++l) {
    if (nf.resource_demand[l] > state.effective_resource(graph, node, l)) return false;
  }
  return true;
}

bool check_c6(const NetworkGraph& graph, const NetworkState& state, NodeId node,
              Rate ingress, bool zeta) {
  if (!zeta) return true;
  return ingress <= state.effective_node_ingress(graph, node);
}

bool check_c7(const NetworkState& state, NodeId node, const NetworkFunction& nf,
              Rate ingress) {
  return ingress <= state.residual_vnf_ingress(node, nf.id);
}

bool check_c11(const NetworkState& state, LinkId link, Rate additional_rate) {
  return additional_rate <= state.residual_link(link);
}

namespace {

const FlowSpec* find_flow(const std::vector<FlowSpec>& flows, FlowId id) {
  for (const auto& f : flows) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

// C3, C4 and C8-C10. Returns true when the assignment is well-formed enough
// to be replayed.
bool check_structure(const NetworkGraph& graph, const FlowSpec& flow,
                     const Assignment& a, std::vector<Violation>& out) {
  const auto k_count = flow.chain.size();
  if (a.placements.size() != k_count) {
    out.push_back({"C4", {a.flow}});
    return false;
  }
  bool ok = true;
  for (std::size_t k = 0; k < k_count; ++k) {
    NodeId v = a.placements[k];
    if (!graph.has_node(v) || !graph.node(v).supports(flow.chain[k])) {
      out.push_back({"C3", {a.flow, static_cast<std::int64_t>(k + 1), v}});
      ok = false;
    }
  }
  if (a.segments.size() != k_count + 1) {
    out.push_back({"C9", {a.flow, -1}});
    return false;
  }
  for (std::size_t i = 0; i <= k_count; ++i) {
    NodeId from = i == 0 ? flow.source : a.placements[i - 1];
    NodeId to = i == k_count ? flow.destination : a.placements[i];
    const char* tag = i == 0 ? "C8" : (i == k_count ? "C10" : "C9");
    if (!graph.has_node(from) || !graph.has_node(to)) {
      ok = false;
      continue;
    }
    auto walk = walk_nodes(graph, from, a.segments[i]);
    bool good = walk && walk->back() == to;
    if (good) {
      auto sorted = *walk;
      std::sort(sorted.begin(), sorted.end());
      good = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    }
    if (!good) {
      out.push_back({tag, {a.flow, static_cast<std::int64_t>(i)}});
      ok = false;
    }
  }
  return ok;
}

// Adds one flow's usage to a state through the editor.
void apply_usage(StateEditor& ed, const NetworkGraph& graph,
                 const NfCatalog& catalog, const FlowSpec& flow,
                 const Assignment& a) {
  const auto k_count = flow.chain.size();
  for (std::size_t i = 0; i <= k_count; ++i) {
    Rate rate = i < k_count ? chain_ingress_rate(flow, catalog, static_cast<int>(i + 1))
                            : chain_egress_rate(flow, catalog);
    for (LinkId l : a.segments[i]) {
      const Link& link = graph.link(l);
      ed.switch_on_node(link.u);
      ed.switch_on_node(link.v);
      ed.switch_on_link(l);
      ed.add_link_load(l, rate);
    }
  }
  const std::vector<bool> zeta = a.zeta(graph);
  for (std::size_t k = 0; k < k_count; ++k) {
    NodeId v = a.placements[k];
    NfId nf = flow.chain[k];
    Rate ingress = chain_ingress_rate(flow, catalog, static_cast<int>(k + 1));
    ed.switch_on_node(v);
    if (zeta[k]) ed.add_node_ingress(v, ingress);
    if (graph.node(v).kind == NodeKind::kNfvServer) {
      ed.place_vnf(v, nf);
      ed.add_vnf_ingress(v, nf, ingress);
    }
  }
}

void check_residuals(const NetworkGraph& graph, const NetworkState& s,
                     std::vector<Violation>& out) {
  for (const Node& n : graph.nodes()) {
    if (n.kind == NodeKind::kNfvServer) {
      for (std::size_t l = 0; l < s.resource_types(); ++l) {
        if (s.residual_resource(n.id, l) < 0.0) {
          out.push_back({"C5", {n.id, static_cast<std::int64_t>(l)}});
        }
      }
      for (std::size_t k = 0; k < s.nf_count(); ++k) {
        auto nf = static_cast<NfId>(k);
        if (s.placed(n.id, nf) && s.residual_vnf_ingress(n.id, nf) < 0) {
          out.push_back({"C7", {n.id, nf}});
        }
      }
    }
    if (n.ingress_capacity && s.residual_node_ingress(n.id) < 0) {
      out.push_back({"C6", {n.id}});
    }
  }
  for (const Link& l : graph.links()) {
    if (s.residual_link(l.id) < 0) out.push_back({"C11", {l.id}});
  }
}

}  // namespace

NetworkState commit(const NetworkGraph& graph, const NfCatalog& catalog,
                    const NetworkState& state, const FlowSpec& flow,
                    const Assignment& assignment) {
  std::vector<Violation> structural;
  if (assignment.flow != flow.id ||
      !check_structure(graph, flow, assignment, structural)) {
    std::string detail = "flow " + std::to_string(flow.id) + " is malformed";
    if (!structural.empty()) detail += " (" + structural.front().tag + ")";
    throw Error(ErrorCode::kValidationFailed, detail);
  }
  NetworkState next = state;
  StateEditor ed(graph, catalog, next);
  apply_usage(ed, graph, catalog, flow, assignment);

  // Only components this flow touched can have been pushed negative.
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kValidationFailed,
                "flow " + std::to_string(flow.id) + ": " + what);
  };
  for (const auto& seg : assignment.segments) {
    for (LinkId l : seg) {
      if (next.residual_link(l) < 0) fail("C11 on link " + std::to_string(l));
    }
  }
  for (std::size_t k = 0; k < assignment.placements.size(); ++k) {
    NodeId v = assignment.placements[k];
    const Node& n = graph.node(v);
    if (n.ingress_capacity && next.residual_node_ingress(v) < 0) {
      fail("C6 on node " + std::to_string(v));
    }
    if (n.kind == NodeKind::kNfvServer) {
      for (std::size_t l = 0; l < next.resource_types(); ++l) {
        if (next.residual_resource(v, l) < 0.0) fail("C5 on node " + std::to_string(v));
      }
      if (next.residual_vnf_ingress(v, flow.chain[k]) < 0) {
        fail("C7 on node " + std::to_string(v));
      }
    }
  }
  return next;
}

bool ValidationReport::has(std::string_view tag) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.tag == tag; });
}

void write_report(std::ostream& out, const ValidationReport& report) {
  for (const auto& v : report.violations) {
    out << v.tag;
    for (auto id : v.ids) out << ' ' << id;
    out << '\n';
  }
}

NetworkState replay_state(const NetworkGraph& graph, const NfCatalog& catalog,
                          const std::vector<FlowSpec>& flows,
                          const std::vector<Assignment>& assignments,
                          const NetworkState& base) {
  NetworkState s = base;
  StateEditor ed(graph, catalog, s);
  for (const auto& a : assignments) {
    const FlowSpec* f = find_flow(flows, a.flow);
    if (f == nullptr) {
      throw Error(ErrorCode::kInconsistentState,
                  "assignment for unknown flow " + std::to_string(a.flow));
    }
    std::vector<Violation> ignored;
    if (!check_structure(graph, *f, a, ignored)) {
      throw Error(ErrorCode::kInconsistentState,
                  "malformed assignment for flow " + std::to_string(a.flow));
    }
    apply_usage(ed, graph, catalog, *f, a);
  }
  return s;
}

ValidationReport validate_state(const NetworkGraph& graph, const NetworkState& s) {
  ValidationReport report;
  if (s.node_count() != graph.node_count() || s.link_count() != graph.link_count()) {
    throw Error(ErrorCode::kInconsistentState, "state does not match graph");
  }
  for (const Link& l : graph.links()) {
    if (!s.link_on(l.id)) continue;
    for (NodeId end : {l.u, l.v}) {
      if (!s.node_on(end)) report.violations.push_back({"C1", {l.id, end}});
    }
  }
  for (const Node& n : graph.nodes()) {
    if (!n.controllable() || !s.node_on(n.id)) continue;
    auto inc = graph.incident(n.id);
    bool any = std::any_of(inc.begin(), inc.end(),
                           [&](LinkId l) { return s.link_on(l); });
    if (!any) report.violations.push_back({"C2", {n.id}});
  }
  for (const Node& n : graph.nodes()) {
    for (std::size_t k = 0; k < s.nf_count(); ++k) {
      if (s.placed(n.id, static_cast<NfId>(k)) &&
          (!s.node_on(n.id) || n.kind != NodeKind::kNfvServer)) {
        report.violations.push_back({"C5", {n.id, static_cast<std::int64_t>(k)}});
      }
    }
  }
  check_residuals(graph, s, report.violations);
  return report;
}

ValidationReport validate_solution(const NetworkGraph& graph,
                                   const NfCatalog& catalog,
                                   const std::vector<FlowSpec>& flows,
                                   const std::vector<Assignment>& assignments,
                                   const NetworkState* initial,
                                   const NetworkState* claimed) {
  ValidationReport report;
  NetworkState replayed = initial ? *initial : init_state(graph, catalog);
  StateEditor ed(graph, catalog, replayed);
  std::map<FlowId, int> seen;
  for (const auto& a : assignments) {
    const FlowSpec* f = find_flow(flows, a.flow);
    if (f == nullptr || seen[a.flow]++ > 0) {
      report.violations.push_back({"C4", {a.flow}});
      continue;
    }
    if (check_structure(graph, *f, a, report.violations)) {
      apply_usage(ed, graph, catalog, *f, a);
    }
  }
  const NetworkState& judged = claimed ? *claimed : replayed;
  if (claimed) {
    for (const Node& n : graph.nodes()) {
      if (claimed->node_on(n.id) != replayed.node_on(n.id)) {
        report.violations.push_back({"STATE", {0, n.id}});
      }
      for (std::size_t k = 0; k < replayed.nf_count(); ++k) {
        auto nf = static_cast<NfId>(k);
        if (claimed->placed(n.id, nf) != replayed.placed(n.id, nf)) {
          report.violations.push_back({"STATE", {2, n.id, nf}});
        }
      }
    }
    for (const Link& l : graph.links()) {
      if (claimed->link_on(l.id) != replayed.link_on(l.id)) {
        report.violations.push_back({"STATE", {1, l.id}});
      }
    }
    // Capacity sums come from the replay, on/off coupling from the claim.
    check_residuals(graph, replayed, report.violations);
    auto coupling = validate_state(graph, judged);
    for (auto& v : coupling.violations) {
      if (v.tag == "C1" || v.tag == "C2") report.violations.push_back(v);
    }
  } else {
    auto r = validate_state(graph, judged);
    report.violations.insert(report.violations.end(), r.violations.begin(),
                             r.violations.end());
  }
  return report;
}

}  // namespace hnfv

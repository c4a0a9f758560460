#include "hnfv/scenarios.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hnfv/error.hpp"
#include "hnfv/text.hpp"

namespace hnfv {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfigParseError, what);
}

[[noreturn]] void infeasible(const std::string& what) {
  throw Error(ErrorCode::kInfeasibleCounts, what);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rate mbps_to_rate(double mbps) { return round_rate(static_cast<long double>(mbps) * 1e6L); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed;
  std::uint64_t mixed = splitmix64(x);
  x = mixed ^ (stream * 0xD1B54A32D192ED03ULL);
  engine_.seed(splitmix64(x));
}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<double>(hi - lo) + 1.0;
  const auto offset = static_cast<std::int64_t>(uniform() * span);
  return std::min(hi, lo + offset);
}

TopologyCounts size_preset(std::string_view size) {
  if (size == "small") return {16, 32, 88, 4, 4, 2, 8, 1};
  if (size == "medium") return {60, 90, 282, 42, 6, 3, 12, 3};
  if (size == "large") return {100, 150, 460, 60, 10, 5, 25, 5};
  if (size == "custom") return {};
  throw Error(ErrorCode::kInvalidArgument, "unknown size preset " + std::string(size));
}

NfCatalog paper_catalog() {
  const std::array<double, 5> cpu{2, 6, 4, 4, 8};
  const std::array<double, 5> gamma{1.0, 1.1, 1.0, 1.0, 1.05};
  std::vector<NetworkFunction> nfs;
  for (NfId k = 0; k < 5; ++k) {
    nfs.push_back({k, "g" + std::to_string(k + 1), {cpu[static_cast<std::size_t>(k)]},
                   kGbps, gamma[static_cast<std::size_t>(k)]});
  }
  return NfCatalog(std::move(nfs), 1);
}

namespace {

Node function_node(NodeId id, Watts idle, Watts peak, Rate ingress,
                   std::vector<NfId> nfs) {
  Node n;
  n.id = id;
  n.kind = NodeKind::kPhysicalFunctionNode;
  n.p_max = peak;
  n.theta = idle / peak;
  n.ingress_capacity = ingress;
  n.supported_nfs = std::move(nfs);
  return n;
}

std::vector<NfId> nf_ids(const NfCatalog& catalog,
                         std::initializer_list<std::string_view> names) {
  std::vector<NfId> out;
  for (auto name : names) {
    auto id = catalog.find(name);
    if (!id) throw Error(ErrorCode::kInvalidArgument, "catalog lacks " + std::string(name));
    out.push_back(*id);
  }
  return out;
}

}  // namespace

Node sgw_node(NodeId id, const NfCatalog& catalog) {
  return function_node(id, 8000, 20000, 10 * kGbps, nf_ids(catalog, {"g1", "g2", "g3"}));
}

Node pgw_node(NodeId id, const NfCatalog& catalog) {
  return function_node(id, 8000, 20000, 20 * kGbps, nf_ids(catalog, {"g4", "g5"}));
}

Node nfv_node(NodeId id, const NfCatalog& catalog) {
  Node n;
  n.id = id;
  n.kind = NodeKind::kNfvServer;
  n.p_max = 2000;
  n.theta = 0.5;
  n.resource_capacity = {16};
  // The server's ingress is the sum of what its instances can take.
  n.ingress_capacity = catalog.aggregate_processing_capacity();
  return n;
}

StructureRow structure_row(int n) {
  switch (n) {
    case 1: return {0, 2, 7, 2};
    case 2: return {2, 0, 7, 2};
    case 3: return {4, 0, 5, 2};
    case 4: return {8, 0, 1, 2};
    case 5: return {2, 2, 5, 2};
    case 6: return {4, 2, 3, 2};
    default:
      throw Error(ErrorCode::kInvalidArgument, "structure must be 1..6");
  }
}

ScenarioSpec structure_preset(int n, double access_rate) {
  structure_row(n);
  ScenarioSpec spec;
  spec.size = "custom";
  spec.counts = {};
  spec.structure = n;
  spec.access_rate = access_rate;
  spec.flows = 2;
  return spec;
}

namespace {

constexpr std::array<std::pair<int, int>, 19> kStructureLinks{{
    {0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 6}, {5, 6}, {5, 7},
    {6, 8}, {7, 8}, {7, 9}, {8, 9}, {9, 10}, {8, 10}, {1, 5}, {2, 6}, {4, 7},
}};
// Interior nodes in the order they take roles: non-NFV, then NFV, then switches.
constexpr std::array<NodeId, 9> kRolePriority{3, 6, 4, 5, 7, 2, 8, 1, 9};

// NFV node type used by a structure: 0, 1 or 2.
int structure_nfv_type(int n) {
  if (n == 3 || n == 6) return 1;
  if (n == 4) return 2;
  return 0;
}

Scenario build_structure(const ScenarioSpec& spec) {
  const int n = spec.structure;
  const StructureRow row = structure_row(n);
  const int type = structure_nfv_type(n);
  const double scale = 1.0 / static_cast<double>(1 << type);
  const Rate unit = kMbps;

  std::vector<NetworkFunction> nfs;
  for (NfId k = 0; k < 5; ++k) {
    const double demand = (k < 3 ? 20.0 : 30.0) * scale;
    nfs.push_back({k, "g" + std::to_string(k + 1), {demand},
                   round_rate(10.0L * scale * unit), 1.0});
  }
  NfCatalog catalog(std::move(nfs), 1);

  std::vector<Node> nodes(11);
  for (NodeId id = 0; id < 11; ++id) {
    nodes[static_cast<std::size_t>(id)].id = id;
    nodes[static_cast<std::size_t>(id)].kind = NodeKind::kSdnSwitch;
    nodes[static_cast<std::size_t>(id)].p_max = 10;
  }
  for (NodeId access : {0, 10}) {
    nodes[static_cast<std::size_t>(access)].kind = NodeKind::kNonSdnSwitch;
    nodes[static_cast<std::size_t>(access)].p_max = 0;
  }
  std::size_t next = 0;
  for (std::size_t i = 0; i < row.non_nfv; ++i, ++next) {
    const NodeId id = kRolePriority[next];
    nodes[static_cast<std::size_t>(id)] =
        function_node(id, 50, 50, 10 * unit,
                      i == 0 ? std::vector<NfId>{0, 1, 2} : std::vector<NfId>{3, 4});
  }
  for (std::size_t i = 0; i < row.nfv; ++i, ++next) {
    Node& node = nodes[static_cast<std::size_t>(kRolePriority[next])];
    node.kind = NodeKind::kNfvServer;
    node.p_max = 50 * scale;
    node.theta = 1.0;
    node.resource_capacity = {60 * scale};
    node.ingress_capacity = round_rate(10.0L * scale * unit);
  }

  std::vector<Link> links;
  for (const auto& [u, v] : kStructureLinks) {
    Link l;
    l.id = static_cast<LinkId>(links.size());
    l.u = u;
    l.v = v;
    l.capacity = 5 * unit;
    l.utilization_factor = spec.tau;
    l.p_max = 5;
    l.is_sdn = derive_is_sdn(nodes[static_cast<std::size_t>(u)],
                             nodes[static_cast<std::size_t>(v)]);
    links.push_back(l);
  }

  Scenario s;
  s.name = "structure" + std::to_string(n);
  s.graph = build_graph(std::move(nodes), std::move(links), GraphOptions{false});
  s.catalog = std::move(catalog);
  const Rate rate = round_rate(static_cast<long double>(spec.access_rate) * unit);
  const std::vector<NfId> chain{0, 1, 2, 3, 4};
  const std::size_t count = spec.flows.value_or(2);
  for (std::size_t i = 0; i < count; ++i) {
    const bool forward = i % 2 == 0;
    s.flows.push_back({static_cast<FlowId>(i), forward ? 0 : 10, forward ? 10 : 0, rate,
                       chain});
  }
  s.initial = init_state(s.graph, s.catalog);
  return s;
}

Scenario build_generated(const ScenarioSpec& spec) {
  const TopologyCounts& c = spec.counts;
  const std::size_t attachments = c.access + c.ixp + c.sgw + c.pgw + c.nfv;
  if (c.switches == 0) infeasible("at least one switch is required");
  if (c.links < attachments + c.switches - 1) {
    infeasible(std::to_string(c.links) + " links cannot connect " +
               std::to_string(c.switches) + " switches and attach " +
               std::to_string(attachments) + " nodes");
  }
  const std::size_t fabric = c.links - attachments;
  if (fabric > c.switches * (c.switches - 1) / 2) {
    infeasible(std::to_string(fabric) + " switch links exceed a simple graph on " +
               std::to_string(c.switches) + " switches");
  }
  if (c.backbone > fabric) infeasible("more backbone links than switch links");
  const std::size_t flow_count = spec.flows.value_or(c.access);
  if (flow_count > 0 && (c.access == 0 || c.ixp == 0)) {
    infeasible("flows need access and exchange nodes");
  }
  if (!(spec.sdn_fraction >= 0.0 && spec.sdn_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sdn_fraction must be in [0, 1]");
  }
  const Rate cap_lo = mbps_to_rate(spec.link_capacity_min_mbps);
  const Rate cap_hi = mbps_to_rate(spec.link_capacity_max_mbps);
  if (cap_lo <= 0 || cap_lo > cap_hi) {
    throw Error(ErrorCode::kInvalidArgument, "bad link capacity range");
  }

  const NfCatalog catalog = paper_catalog();
  std::vector<Node> nodes;
  const auto S = static_cast<NodeId>(c.switches);

  Rng sdn_rng(spec.seed, 4);
  std::vector<NodeId> order(c.switches);
  for (NodeId i = 0; i < S; ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(sdn_rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(order[i - 1], order[j]);
  }
  const auto sdn_count = static_cast<std::size_t>(
      round_rate(static_cast<long double>(spec.sdn_fraction) * c.switches));
  std::vector<char> is_sdn(c.switches, 0);
  for (std::size_t i = 0; i < sdn_count; ++i) is_sdn[static_cast<std::size_t>(order[i])] = 1;

  for (NodeId i = 0; i < S; ++i) {
    Node n;
    n.id = i;
    n.kind = is_sdn[static_cast<std::size_t>(i)] ? NodeKind::kSdnSwitch
                                                 : NodeKind::kNonSdnSwitch;
    n.p_max = kSwitchPower;
    nodes.push_back(n);
  }
  auto add_endpoint = [&](std::size_t count, std::vector<NodeId>& ids) {
    for (std::size_t i = 0; i < count; ++i) {
      Node n;
      n.id = static_cast<NodeId>(nodes.size());
      n.kind = NodeKind::kNonSdnSwitch;
      n.p_max = 0;
      ids.push_back(n.id);
      nodes.push_back(n);
    }
  };
  std::vector<NodeId> access, ixp;
  add_endpoint(c.access, access);
  add_endpoint(c.ixp, ixp);
  for (std::size_t i = 0; i < c.sgw; ++i) {
    nodes.push_back(sgw_node(static_cast<NodeId>(nodes.size()), catalog));
  }
  for (std::size_t i = 0; i < c.pgw; ++i) {
    nodes.push_back(pgw_node(static_cast<NodeId>(nodes.size()), catalog));
  }
  for (std::size_t i = 0; i < c.nfv; ++i) {
    nodes.push_back(nfv_node(static_cast<NodeId>(nodes.size()), catalog));
  }

  Rng fabric_rng(spec.seed, 1);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  auto add_edge = [&](NodeId a, NodeId b) {
    auto key = std::minmax(a, b);
    if (a == b || !seen.insert(key).second) return false;
    edges.emplace_back(key.first, key.second);
    return true;
  };
  for (NodeId i = 1; i < S; ++i) add_edge(static_cast<NodeId>(fabric_rng.uniform_int(0, i - 1)), i);
  while (edges.size() < fabric) {
    add_edge(static_cast<NodeId>(fabric_rng.uniform_int(0, S - 1)),
             static_cast<NodeId>(fabric_rng.uniform_int(0, S - 1)));
  }

  Rng backbone_rng(spec.seed, 2);
  std::vector<std::size_t> pick(edges.size());
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  std::vector<char> backbone(edges.size(), 0);
  for (std::size_t i = 0; i < c.backbone; ++i) {
    auto j = static_cast<std::size_t>(
        backbone_rng.uniform_int(static_cast<std::int64_t>(i),
                                 static_cast<std::int64_t>(pick.size() - 1)));
    std::swap(pick[i], pick[j]);
    backbone[pick[i]] = 1;
  }

  std::vector<Link> links;
  auto add_link = [&](NodeId u, NodeId v, Rate capacity) {
    Link l;
    l.id = static_cast<LinkId>(links.size());
    l.u = u;
    l.v = v;
    l.capacity = capacity;
    l.utilization_factor = spec.tau;
    l.p_max = kLinkPower;
    l.is_sdn = derive_is_sdn(nodes[static_cast<std::size_t>(u)],
                             nodes[static_cast<std::size_t>(v)]);
    links.push_back(l);
  };
  Rng capacity_rng(spec.seed, 3);
  const Rate backbone_capacity =
      round_rate(static_cast<long double>(spec.backbone_capacity_gbps) * kGbps);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Rate drawn = capacity_rng.uniform_int(cap_lo, cap_hi);
    add_link(edges[i].first, edges[i].second, backbone[i] ? backbone_capacity : drawn);
  }
  Rng attach_rng(spec.seed, 5);
  for (std::size_t id = c.switches; id < nodes.size(); ++id) {
    const auto sw = static_cast<NodeId>(attach_rng.uniform_int(0, S - 1));
    const Rate capacity = attach_rng.uniform_int(cap_lo, cap_hi);
    add_link(sw, static_cast<NodeId>(id), capacity);
  }

  Scenario s;
  s.name = spec.size + "-seed" + std::to_string(spec.seed);
  s.graph = build_graph(std::move(nodes), std::move(links));
  s.catalog = catalog;

  Rng flow_rng(spec.seed, 6);
  double lo = spec.rate_min_mbps;
  double hi = spec.rate_max_mbps;
  if (spec.rate_mean_mbps) {
    lo = 0.5 * *spec.rate_mean_mbps;
    hi = 1.5 * *spec.rate_mean_mbps;
  }
  if (!(lo > 0.0 && lo <= hi)) throw Error(ErrorCode::kInvalidArgument, "bad rate range");
  const std::vector<NfId> chain{0, 1, 2, 3, 4};
  for (std::size_t i = 0; i < flow_count; ++i) {
    const NodeId dst =
        ixp[static_cast<std::size_t>(flow_rng.uniform_int(0, static_cast<std::int64_t>(ixp.size() - 1)))];
    const double u = flow_rng.uniform();
    s.flows.push_back({static_cast<FlowId>(i), access[i % access.size()], dst,
                       mbps_to_rate(lo + u * (hi - lo)), chain});
  }
  s.initial = init_state(s.graph, s.catalog);
  return s;
}

}  // namespace

Scenario generate(const ScenarioSpec& spec) {
  if (!spec.fixture.empty()) return load_fixture(spec.fixture);
  if (spec.structure != 0) return build_structure(spec);
  return build_generated(spec);
}

// --- config -------------------------------------------------------------

namespace {

std::size_t attachment_count(const TopologyCounts& c) {
  return c.access + c.ixp + c.sgw + c.pgw + c.nfv;
}

}  // namespace

ScenarioSpec parse_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      config_error("line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!kv.emplace(key, value).second) {
      config_error("line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }

  ScenarioSpec spec;
  auto take = [&](std::string_view key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto as_double = [&](std::string_view key, const std::string& v) {
    auto d = parse_double(v);
    if (!d) config_error(std::string(key) + ": not a number: " + v);
    return *d;
  };
  auto as_uint = [&](std::string_view key, const std::string& v) {
    auto d = parse_uint(v);
    if (!d) config_error(std::string(key) + ": not a non-negative integer: " + v);
    return *d;
  };

  if (auto v = take("size")) {
    if (*v != "small" && *v != "medium" && *v != "large" && *v != "custom") {
      config_error("size: unknown preset " + *v);
    }
    spec.size = *v;
  }
  spec.counts = size_preset(spec.size);
  const TopologyCounts base = spec.counts;
  bool links_given = false;
  for (auto [key, field] : std::initializer_list<std::pair<std::string_view, std::size_t TopologyCounts::*>>{
           {"access", &TopologyCounts::access}, {"switches", &TopologyCounts::switches},
           {"links", &TopologyCounts::links}, {"backbone", &TopologyCounts::backbone},
           {"sgw", &TopologyCounts::sgw}, {"pgw", &TopologyCounts::pgw},
           {"nfv", &TopologyCounts::nfv}, {"ixp", &TopologyCounts::ixp}}) {
    if (auto v = take(key)) {
      spec.counts.*field = static_cast<std::size_t>(as_uint(key, *v));
      if (key == "links") links_given = true;
    }
  }
  if (!links_given) {
    // Keep the switch fabric of the preset when attachments change.
    const auto delta = static_cast<std::int64_t>(attachment_count(spec.counts)) -
                       static_cast<std::int64_t>(attachment_count(base));
    const auto links = static_cast<std::int64_t>(base.links) + delta;
    spec.counts.links = static_cast<std::size_t>(std::max<std::int64_t>(0, links));
  }

  auto seed = take("seed");
  if (!seed) config_error("seed is required");
  spec.seed = as_uint("seed", *seed);
  if (auto v = take("sdn_fraction")) spec.sdn_fraction = as_double("sdn_fraction", *v);
  if (auto v = take("psi")) {
    spec.psi = static_cast<std::size_t>(as_uint("psi", *v));
    if (spec.psi == 0) config_error("psi must be at least 1");
  }
  if (auto v = take("flows")) spec.flows = static_cast<std::size_t>(as_uint("flows", *v));
  if (auto v = take("rate_min_mbps")) spec.rate_min_mbps = as_double("rate_min_mbps", *v);
  if (auto v = take("rate_max_mbps")) spec.rate_max_mbps = as_double("rate_max_mbps", *v);
  if (auto v = take("rate_mean_mbps")) spec.rate_mean_mbps = as_double("rate_mean_mbps", *v);
  if (auto v = take("link_capacity_min_mbps")) {
    spec.link_capacity_min_mbps = as_double("link_capacity_min_mbps", *v);
  }
  if (auto v = take("link_capacity_max_mbps")) {
    spec.link_capacity_max_mbps = as_double("link_capacity_max_mbps", *v);
  }
  if (auto v = take("backbone_capacity_gbps")) {
    spec.backbone_capacity_gbps = as_double("backbone_capacity_gbps", *v);
  }
  if (auto v = take("tau")) {
    spec.tau = as_double("tau", *v);
    if (!(spec.tau > 0.0 && spec.tau <= 1.0)) config_error("tau must be in (0, 1]");
  }
  if (auto v = take("structure")) {
    spec.structure = static_cast<int>(as_uint("structure", *v));
    if (spec.structure < 1 || spec.structure > 6) config_error("structure must be 1..6");
  }
  if (auto v = take("access_rate")) spec.access_rate = as_double("access_rate", *v);
  if (auto v = take("fixture")) spec.fixture = *v;
  if (!kv.empty()) config_error("unknown key " + kv.begin()->first);
  return spec;
}

ScenarioSpec load_config(const std::filesystem::path& path) {
  ScenarioSpec spec = parse_config(read_file(path));
  if (!spec.fixture.empty()) {
    std::filesystem::path f(spec.fixture);
    if (f.is_relative()) spec.fixture = (path.parent_path() / f).lexically_normal().string();
  }
  return spec;
}

std::string serialize_config(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "size=" << spec.size << '\n';
  const TopologyCounts& c = spec.counts;
  out << "access=" << c.access << "\nswitches=" << c.switches << "\nlinks=" << c.links
      << "\nbackbone=" << c.backbone << "\nsgw=" << c.sgw << "\npgw=" << c.pgw
      << "\nnfv=" << c.nfv << "\nixp=" << c.ixp << '\n';
  out << "sdn_fraction=" << format_double(spec.sdn_fraction) << '\n';
  out << "seed=" << spec.seed << '\n';
  out << "psi=" << spec.psi << '\n';
  if (spec.flows) out << "flows=" << *spec.flows << '\n';
  out << "rate_min_mbps=" << format_double(spec.rate_min_mbps) << '\n';
  out << "rate_max_mbps=" << format_double(spec.rate_max_mbps) << '\n';
  if (spec.rate_mean_mbps) out << "rate_mean_mbps=" << format_double(*spec.rate_mean_mbps) << '\n';
  out << "link_capacity_min_mbps=" << format_double(spec.link_capacity_min_mbps) << '\n';
  out << "link_capacity_max_mbps=" << format_double(spec.link_capacity_max_mbps) << '\n';
  out << "backbone_capacity_gbps=" << format_double(spec.backbone_capacity_gbps) << '\n';
  out << "tau=" << format_double(spec.tau) << '\n';
  if (spec.structure != 0) out << "structure=" << spec.structure << '\n';
  out << "access_rate=" << format_double(spec.access_rate) << '\n';
  if (!spec.fixture.empty()) out << "fixture=" << spec.fixture << '\n';
  return out.str();
}

// --- fixtures -----------------------------------------------------------

namespace {

struct ParsedFile {
  Scenario scenario;
  std::vector<Assignment> assignments;
  std::optional<NetworkState> claimed;
};

ParsedFile parse_lines(std::string_view text, std::string name, bool allow_solution) {
  std::size_t resource_types = 1;
  GraphOptions options;
  std::vector<NetworkFunction> nfs;
  std::vector<Node> nodes;
  std::vector<std::vector<std::string>> node_nf_names;
  std::vector<Link> links;
  struct PendingFlow {
    FlowSpec spec;
    std::vector<std::string> chain;
  };
  std::vector<PendingFlow> flows;
  struct Directive {
    std::size_t line;
    std::vector<std::string> tokens;
  };
  std::vector<Directive> state_lines, assign_lines, final_lines;

  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    config_error(name + ":" + std::to_string(line_no) + ": " + what);
  };
  auto need_int = [&](std::string_view t) {
    auto v = parse_int(t);
    if (!v) fail("expected an integer, got '" + std::string(t) + "'");
    return *v;
  };
  auto need_double = [&](std::string_view t) {
    auto v = parse_double(t);
    if (!v) fail("expected a number, got '" + std::string(t) + "'");
    return *v;
  };

  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto tok = split_ws(raw);
    if (tok.empty()) continue;
    const std::string_view kw = tok[0];
    if (kw == "option") {
      if (tok.size() != 2 || tok[1] != "relaxed_attachment") fail("unknown option");
      options.require_single_attachment = false;
    } else if (kw == "resources") {
      if (tok.size() != 2) fail("resources <L>");
      resource_types = static_cast<std::size_t>(need_int(tok[1]));
    } else if (kw == "nf") {
      if (tok.size() < 5) fail("nf <id> <name> <ingress> <gamma> <demand>...");
      NetworkFunction nf;
      nf.id = static_cast<NfId>(need_int(tok[1]));
      nf.name = std::string(tok[2]);
      nf.processing_capacity = need_int(tok[3]);
      nf.rising_factor = need_double(tok[4]);
      for (std::size_t i = 5; i < tok.size(); ++i) nf.resource_demand.push_back(need_double(tok[i]));
      nfs.push_back(std::move(nf));
    } else if (kw == "node") {
      if (tok.size() < 3) fail("node <id> <kind> key=value...");
      Node n;
      n.id = static_cast<NodeId>(need_int(tok[1]));
      auto kind = parse_node_kind(tok[2]);
      if (!kind) fail("unknown node kind " + std::string(tok[2]));
      n.kind = *kind;
      std::vector<std::string> nf_names;
      for (std::size_t i = 3; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string_view::npos) fail("expected key=value");
        const auto key = tok[i].substr(0, eq);
        const auto value = tok[i].substr(eq + 1);
        if (key == "pmax") {
          n.p_max = need_double(value);
        } else if (key == "theta") {
          n.theta = need_double(value);
        } else if (key == "ingress") {
          n.ingress_capacity = need_int(value);
        } else if (key == "res") {
          for (auto part : split(value, ',')) n.resource_capacity.push_back(need_double(part));
        } else if (key == "nfs") {
          for (auto part : split(value, ',')) nf_names.emplace_back(part);
        } else {
          fail("unknown node key " + std::string(key));
        }
      }
      nodes.push_back(std::move(n));
      node_nf_names.push_back(std::move(nf_names));
    } else if (kw == "link") {
      if (tok.size() != 7 && tok.size() != 8) {
        fail("link <id> <u> <v> <capacity> <sdn> <pmax> [tau]");
      }
      Link l;
      l.id = static_cast<LinkId>(need_int(tok[1]));
      l.u = static_cast<NodeId>(need_int(tok[2]));
      l.v = static_cast<NodeId>(need_int(tok[3]));
      l.capacity = need_int(tok[4]);
      const auto sdn = need_int(tok[5]);
      if (sdn != 0 && sdn != 1) fail("sdn flag must be 0 or 1");
      l.is_sdn = sdn == 1;
      l.p_max = need_double(tok[6]);
      if (tok.size() == 8) l.utilization_factor = need_double(tok[7]);
      links.push_back(l);
    } else if (kw == "flow") {
      if (tok.size() < 5) fail("flow <id> <src> <dst> <rate> <nf>...");
      PendingFlow f;
      f.spec.id = static_cast<FlowId>(need_int(tok[1]));
      f.spec.source = static_cast<NodeId>(need_int(tok[2]));
      f.spec.destination = static_cast<NodeId>(need_int(tok[3]));
      f.spec.rate = need_int(tok[4]);
      for (std::size_t i = 5; i < tok.size(); ++i) f.chain.emplace_back(tok[i]);
      flows.push_back(std::move(f));
    } else if (kw == "place" || kw == "on") {
      state_lines.push_back({line_no, {tok.begin(), tok.end()}});
    } else if (allow_solution && kw == "assign") {
      assign_lines.push_back({line_no, {tok.begin(), tok.end()}});
    } else if (allow_solution && kw == "final") {
      final_lines.push_back({line_no, {tok.begin(), tok.end()}});
    } else {
      fail("unknown directive " + std::string(kw));
    }
  }

  ParsedFile out;
  Scenario& s = out.scenario;
  s.name = std::move(name);
  line_no = 0;
  std::sort(nfs.begin(), nfs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  try {
    s.catalog = NfCatalog(std::move(nfs), resource_types);
  } catch (const Error& e) {
    config_error(s.name + ": " + e.what());
  }
  auto resolve_nf = [&](const std::string& token) -> NfId {
    if (auto id = s.catalog.find(token)) return *id;
    auto v = parse_int(token);
    if (!v || !s.catalog.contains(static_cast<NfId>(*v))) fail("unknown function " + token);
    return static_cast<NfId>(*v);
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& t : node_nf_names[i]) nodes[i].supported_nfs.push_back(resolve_nf(t));
  }
  s.graph = build_graph(std::move(nodes), std::move(links), options);
  for (auto& f : flows) {
    for (const auto& t : f.chain) f.spec.chain.push_back(resolve_nf(t));
    validate_flow(f.spec, s.graph, s.catalog);
    s.flows.push_back(std::move(f.spec));
  }

  auto node_arg = [&](const std::string& t) {
    auto id = static_cast<NodeId>(need_int(t));
    if (!s.graph.has_node(id)) fail("unknown node " + t);
    return id;
  };
  auto link_arg = [&](const std::string& t) {
    auto id = static_cast<LinkId>(need_int(t));
    if (!s.graph.has_link(id)) fail("unknown link " + t);
    return id;
  };
  auto apply_state = [&](NetworkState& state, const Directive& d, std::size_t offset) {
    line_no = d.line;
    StateEditor ed(s.graph, s.catalog, state);
    const auto& t = d.tokens;
    if (t.size() != offset + 3) fail("expected <kind> <id> [<nf>]");
    if (t[offset] == "place") {
      const NodeId u = node_arg(t[offset + 1]);
      if (s.graph.node(u).kind != NodeKind::kNfvServer) fail("place needs an NFV server");
      ed.place_vnf(u, resolve_nf(t[offset + 2]));
    } else if (t[offset] == "on" && t[offset + 1] == "node") {
      ed.switch_on_node(node_arg(t[offset + 2]));
    } else if (t[offset] == "on" && t[offset + 1] == "link") {
      ed.switch_on_link(link_arg(t[offset + 2]));
    } else {
      fail("malformed state line");
    }
  };

  s.initial = init_state(s.graph, s.catalog);
  for (const auto& d : state_lines) apply_state(s.initial, d, 0);

  for (const auto& d : assign_lines) {
    line_no = d.line;
    const auto& t = d.tokens;
    if (t.size() < 3 || t[2] != "place") fail("assign <flow> place <p>... seg ...");
    Assignment a;
    a.flow = static_cast<FlowId>(need_int(t[1]));
    std::size_t i = 3;
    for (; i < t.size() && t[i] != "seg"; ++i) a.placements.push_back(node_arg(t[i]));
    for (; i < t.size(); ++i) {
      if (t[i] == "seg") {
        a.segments.emplace_back();
      } else if (t[i] != "-") {
        a.segments.back().push_back(link_arg(t[i]));
      }
    }
    out.assignments.push_back(std::move(a));
  }

  if (!final_lines.empty()) {
    NetworkState claimed = init_state(s.graph, s.catalog);
    for (const auto& d : final_lines) apply_state(claimed, d, 1);
    out.claimed = std::move(claimed);
  }
  return out;
}

void write_state_lines(std::ostream& out, const NetworkGraph& g, const NfCatalog& c,
                       const NetworkState& s, std::string_view prefix) {
  for (const Node& n : g.nodes()) {
    for (NfId k = 0; k < static_cast<NfId>(c.size()); ++k) {
      if (s.placed(n.id, k)) out << prefix << "place " << n.id << ' ' << k << '\n';
    }
  }
  for (const Node& n : g.nodes()) {
    if (n.controllable() && s.node_on(n.id)) out << prefix << "on node " << n.id << '\n';
  }
  for (const Link& l : g.links()) {
    if (l.is_sdn && s.link_on(l.id)) out << prefix << "on link " << l.id << '\n';
  }
}

}  // namespace

Scenario parse_fixture(std::string_view text, std::string name) {
  return parse_lines(text, std::move(name), false).scenario;
}

Scenario load_fixture(const std::filesystem::path& path) {
  return parse_fixture(read_file(path), path.filename().string());
}

void write_fixture(std::ostream& out, const Scenario& s) {
  if (!s.graph.options().require_single_attachment) out << "option relaxed_attachment\n";
  out << "resources " << s.catalog.resource_types() << '\n';
  for (const NetworkFunction& nf : s.catalog.functions()) {
    out << "nf " << nf.id << ' ' << nf.name << ' ' << nf.processing_capacity << ' '
        << format_double(nf.rising_factor);
    for (double d : nf.resource_demand) out << ' ' << format_double(d);
    out << '\n';
  }
  for (const Node& n : s.graph.nodes()) {
    out << "node " << n.id << ' ' << to_string(n.kind) << " pmax=" << format_double(n.p_max)
        << " theta=" << format_double(n.theta);
    if (n.ingress_capacity) out << " ingress=" << *n.ingress_capacity;
    if (!n.resource_capacity.empty()) {
      out << " res=";
      for (std::size_t i = 0; i < n.resource_capacity.size(); ++i) {
        out << (i ? "," : "") << format_double(n.resource_capacity[i]);
      }
    }
    if (!n.supported_nfs.empty()) {
      out << " nfs=";
      for (std::size_t i = 0; i < n.supported_nfs.size(); ++i) {
        out << (i ? "," : "") << n.supported_nfs[i];
      }
    }
    out << '\n';
  }
  for (const Link& l : s.graph.links()) {
    out << "link " << l.id << ' ' << l.u << ' ' << l.v << ' ' << l.capacity << ' '
        << (l.is_sdn ? 1 : 0) << ' ' << format_double(l.p_max);
    if (l.utilization_factor != 1.0) out << ' ' << format_double(l.utilization_factor);
    out << '\n';
  }
  for (const FlowSpec& f : s.flows) {
    out << "flow " << f.id << ' ' << f.source << ' ' << f.destination << ' ' << f.rate;
    for (NfId k : f.chain) out << ' ' << k;
    out << '\n';
  }
  write_state_lines(out, s.graph, s.catalog, s.initial, "");
}

void write_solution(std::ostream& out, const Scenario& scenario,
                    const std::vector<Assignment>& assignments,
                    const NetworkState& final_state) {
  write_fixture(out, scenario);
  for (const Assignment& a : assignments) {
    out << "assign " << a.flow << " place";
    for (NodeId p : a.placements) out << ' ' << p;
    for (const auto& seg : a.segments) {
      out << " seg";
      if (seg.empty()) out << " -";
      for (LinkId l : seg) out << ' ' << l;
    }
    out << '\n';
  }
  write_state_lines(out, scenario.graph, scenario.catalog, final_state, "final ");
}

SolutionFile parse_solution(std::string_view text) {
  ParsedFile p = parse_lines(text, "solution", true);
  return SolutionFile{std::move(p.scenario), std::move(p.assignments), std::move(p.claimed)};
}

SolutionFile load_solution(const std::filesystem::path& path) {
  ParsedFile p = parse_lines(read_file(path), path.filename().string(), true);
  return SolutionFile{std::move(p.scenario), std::move(p.assignments), std::move(p.claimed)};
}

}  // namespace hnfv

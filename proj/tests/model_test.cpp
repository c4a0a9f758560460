#include <gtest/gtest.h>

#include "hnfv/error.hpp"
#include "hnfv/model.hpp"
#include "hnfv/scenarios.hpp"

namespace hnfv {
namespace {

Node sw(NodeId id, bool sdn = true) {
  Node n;
  n.id = id;
  n.kind = sdn ? NodeKind::kSdnSwitch : NodeKind::kNonSdnSwitch;
  n.p_max = 10;
  return n;
}

Node server(NodeId id) {
  Node n;
  n.id = id;
  n.kind = NodeKind::kNfvServer;
  n.p_max = 100;
  n.theta = 0.5;
  n.resource_capacity = {16};
  return n;
}

Link link(LinkId id, NodeId u, NodeId v, bool sdn = true) {
  return Link{id, u, v, kGbps, 1.0, 5.0, sdn};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(BuildGraph, AcceptsIdsInAnyOrder) {
  auto g = build_graph({server(2), sw(1), sw(0)}, {link(1, 1, 2), link(0, 0, 1)});
  EXPECT_EQ(g.node(2).kind, NodeKind::kNfvServer);
  EXPECT_EQ(g.link(1).v, 2);
  EXPECT_EQ(g.link_between(2, 1), 1);
  EXPECT_FALSE(g.link_between(0, 2));
  EXPECT_EQ(g.function_node_count(), 1u);
}

TEST(BuildGraph, RejectsMalformedTopologies) {
  EXPECT_EQ(code_of([] { build_graph({sw(0), sw(0)}, {}); }), ErrorCode::kDuplicateId);
  EXPECT_EQ(code_of([] { build_graph({}, {}); }), ErrorCode::kDisconnectedGraph);
  EXPECT_EQ(code_of([] { build_graph({sw(0), sw(1)}, {}); }),
            ErrorCode::kDisconnectedGraph);
  EXPECT_EQ(code_of([] { build_graph({sw(0), sw(1)}, {link(0, 0, 0)}); }),
            ErrorCode::kInvalidLink);
  EXPECT_EQ(code_of([] { build_graph({sw(0), sw(1)}, {link(0, 0, 1), link(1, 1, 0)}); }),
            ErrorCode::kInvalidLink);
  EXPECT_EQ(code_of([] { build_graph({sw(0), sw(1)}, {link(0, 0, 3)}); }),
            ErrorCode::kInvalidLink);
}

TEST(BuildGraph, SdnFlagMustMatchEndpoints) {
  EXPECT_EQ(code_of([] {
              build_graph({sw(0, false), sw(1, false)}, {link(0, 0, 1, true)});
            }),
            ErrorCode::kSdnFlagMismatch);
  EXPECT_EQ(code_of([] { build_graph({sw(0, false), sw(1)}, {link(0, 0, 1, false)}); }),
            ErrorCode::kSdnFlagMismatch);
  EXPECT_NO_THROW(build_graph({sw(0, false), sw(1, false)}, {link(0, 0, 1, false)}));
}

TEST(BuildGraph, FunctionNodesHangOffOneSwitch) {
  EXPECT_EQ(code_of([] {
              build_graph({sw(0), sw(1), server(2)},
                          {link(0, 0, 1), link(1, 0, 2), link(2, 1, 2)});
            }),
            ErrorCode::kServerDegreeViolation);
  EXPECT_EQ(code_of([] {
              build_graph({sw(0), server(1), server(2)}, {link(0, 0, 1), link(1, 1, 2)});
            }),
            ErrorCode::kServerDegreeViolation);
  EXPECT_NO_THROW(build_graph({sw(0), server(1), server(2)},
                              {link(0, 0, 1), link(1, 1, 2)}, GraphOptions{false}));
}

TEST(BuildGraph, RejectsBadNodeFields) {
  Node pfn;
  pfn.id = 1;
  pfn.kind = NodeKind::kPhysicalFunctionNode;
  pfn.p_max = 10;
  EXPECT_EQ(code_of([&] { build_graph({sw(0), pfn}, {link(0, 0, 1)}); }),
            ErrorCode::kInvalidNode);
  Node bad_theta = server(1);
  bad_theta.theta = 1.5;
  EXPECT_EQ(code_of([&] { build_graph({sw(0), bad_theta}, {link(0, 0, 1)}); }),
            ErrorCode::kInvalidNode);
}

TEST(BuildGraph, UsableCapacityFloorsTauTimesCapacity) {
  Link l = link(0, 0, 1);
  l.capacity = 999;
  l.utilization_factor = 0.7;
  auto g = build_graph({sw(0), sw(1)}, {l});
  EXPECT_EQ(g.usable_capacity(0), 699);
}

TEST(Sdn, DerivedFromEndpoints) {
  EXPECT_FALSE(derive_is_sdn(sw(0, false), sw(1, false)));
  EXPECT_TRUE(derive_is_sdn(sw(0, false), sw(1, true)));
  EXPECT_TRUE(derive_is_sdn(sw(0, false), server(1)));
}

TEST(Rates, RoundHalfUp) {
  EXPECT_EQ(round_rate(2.5L), 3);
  EXPECT_EQ(round_rate(2.4999L), 2);
  EXPECT_EQ(round_rate(0.0L), 0);
}

TEST(Rates, ChainRatesCompoundRisingFactors) {
  const NfCatalog catalog = paper_catalog();
  FlowSpec f{0, 0, 1, 100 * kMbps, {0, 1, 4, 2}};
  EXPECT_EQ(chain_ingress_rate(f, catalog, 1), 100 * kMbps);
  EXPECT_EQ(chain_ingress_rate(f, catalog, 2), 100 * kMbps);
  EXPECT_EQ(chain_ingress_rate(f, catalog, 3), 110 * kMbps);
  EXPECT_EQ(chain_ingress_rate(f, catalog, 4), 115'500'000);
  EXPECT_EQ(chain_egress_rate(f, catalog), 115'500'000);
  EXPECT_EQ(code_of([&] { chain_ingress_rate(f, catalog, 0); }),
            ErrorCode::kPositionOutOfRange);
  EXPECT_EQ(code_of([&] { chain_ingress_rate(f, catalog, 5); }),
            ErrorCode::kPositionOutOfRange);
}

TEST(Rates, OddRateRoundsOnce) {
  NfCatalog catalog({{0, "x", {1}, kGbps, 1.1}, {1, "y", {1}, kGbps, 1.1}}, 1);
  FlowSpec f{0, 0, 1, 5, {0, 1}};
  EXPECT_EQ(chain_ingress_rate(f, catalog, 2), 6);  // 5.5
  EXPECT_EQ(chain_egress_rate(f, catalog), 6);      // 6.05
}

TEST(Flows, ValidateFlowRejectsBadSpecs) {
  auto g = build_graph({sw(0), sw(1)}, {link(0, 0, 1)});
  const NfCatalog catalog = paper_catalog();
  EXPECT_NO_THROW(validate_flow({0, 0, 1, 1, {0}}, g, catalog));
  EXPECT_EQ(code_of([&] { validate_flow({0, 0, 0, 1, {0}}, g, catalog); }),
            ErrorCode::kInvalidFlow);
  EXPECT_EQ(code_of([&] { validate_flow({0, 0, 2, 1, {0}}, g, catalog); }),
            ErrorCode::kInvalidFlow);
  EXPECT_EQ(code_of([&] { validate_flow({0, 0, 1, 0, {0}}, g, catalog); }),
            ErrorCode::kInvalidFlow);
  EXPECT_EQ(code_of([&] { validate_flow({0, 0, 1, 1, {}}, g, catalog); }),
            ErrorCode::kInvalidFlow);
  EXPECT_EQ(code_of([&] { validate_flow({0, 0, 1, 1, {9}}, g, catalog); }),
            ErrorCode::kInvalidFlow);
}

TEST(Catalog, LookupAndAggregate) {
  const NfCatalog catalog = paper_catalog();
  EXPECT_EQ(catalog.find("g5"), 4);
  EXPECT_FALSE(catalog.find("g6"));
  EXPECT_EQ(catalog.aggregate_processing_capacity(), 5 * kGbps);
  EXPECT_EQ(code_of([&] { catalog.at(5); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { NfCatalog({{0, "a", {1}, 1, 1}, {0, "b", {1}, 1, 1}}, 1); }),
            ErrorCode::kDuplicateId);
}

}  // namespace
}  // namespace hnfv

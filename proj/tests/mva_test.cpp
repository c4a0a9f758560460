#include <gtest/gtest.h>

#include <algorithm>

#include "hnfv/error.hpp"
#include "hnfv/mva.hpp"
#include "support.hpp"

namespace hnfv {
namespace {

using testing::load_test_fixture;

std::vector<double> weights_at(const BeamSet& beams, NodeId node) {
  std::vector<double> out;
  auto it = beams.find(node);
  if (it == beams.end()) return out;
  for (const StagePath& p : it->second) out.push_back(p.weight);
  std::sort(out.begin(), out.end());
  return out;
}

class WorkedExample : public ::testing::Test {
 protected:
  Scenario s = load_test_fixture("fig3.txt");
  WeightParams params = WeightParams::defaults_for(s.graph);

  MvaResult solve(std::size_t width, MvaTrace* trace = nullptr) {
    return mva_solve(s.graph, s.catalog, s.initial, s.flows.at(0), BeamConfig{width},
                     params, trace);
  }
};

TEST_F(WorkedExample, ViterbiWidthOneSelectsEighteen) {
  EXPECT_EQ(solve(1).weight, 18.0);
}

TEST_F(WorkedExample, WidthThreeSelectsSeventeen) {
  const MvaResult r = solve(3);
  EXPECT_EQ(r.weight, 17.0);
  EXPECT_EQ(r.assignment.placements, (std::vector<NodeId>{1, 1, 4, 4}));
}

TEST_F(WorkedExample, StageThreeBeamsAtNodeFour) {
  MvaTrace trace;
  solve(3, &trace);
  ASSERT_EQ(trace.stages.size(), 5u);
  EXPECT_EQ(weights_at(trace.stages[3], 4), (std::vector<double>{9, 11, 11}));
}

TEST_F(WorkedExample, StageOneCandidatesAreOneAndThree) {
  EXPECT_EQ(candidate_set(s.graph, s.initial, s.flows[0], s.catalog, 1),
            (std::vector<NodeId>{1, 3}));
}

TEST_F(WorkedExample, WidthOneKeepsOnePathPerCandidate) {
  MvaTrace trace;
  solve(1, &trace);
  for (std::size_t k = 1; k < trace.stages.size(); ++k) {
    for (const auto& [node, paths] : trace.stages[k]) EXPECT_EQ(paths.size(), 1u);
  }
}

TEST_F(WorkedExample, SelectedSolutionValidates) {
  const MvaResult r = solve(3);
  const auto report = validate_solution(s.graph, s.catalog, s.flows, {r.assignment},
                                        &s.initial, &r.state);
  EXPECT_TRUE(report.ok());
}

// Two fresh functions of 10 units each on a 16-unit server: the second
// placement on the same server must be evicted from the path.
TEST(Mva, PathLocalResourcesEvictOverdraw) {
  const Scenario s = parse_fixture(R"(
option relaxed_attachment
nf 0 x 1000000000 1 10
nf 1 y 1000000000 1 10
node 0 sdn pmax=1
node 1 nfv pmax=2 theta=0.5 res=16
node 2 nfv pmax=50 theta=0.5 res=16
node 3 sdn pmax=1
link 0 0 1 1000000000 1 1
link 1 1 3 1000000000 1 1
link 2 1 2 1000000000 1 1
flow 0 0 3 1000000 x y
)");
  const auto params = WeightParams::defaults_for(s.graph);
  MvaTrace trace;
  const MvaResult r = mva_solve(s.graph, s.catalog, s.initial, s.flows[0], BeamConfig{8},
                                params, &trace);
  // Stage 2 at node 1 must not contain the path that placed x on node 1.
  for (const StagePath& p : trace.stages[2][1]) {
    EXPECT_NE(p.placements.front(), 1) << "overdrawn path survived";
  }
  EXPECT_NE(r.assignment.placements[0], r.assignment.placements[1]);
}

TEST(Mva, EmptyCandidateSetRejectsAtThatStage) {
  const Scenario s = parse_fixture(R"(
nf 0 big 1000000000 1 8
node 0 sdn pmax=1
node 1 nfv pmax=2 theta=0.5 res=6
node 2 sdn pmax=1
link 0 0 2 1000000000 1 1
link 1 1 2 1000000000 1 1
flow 0 0 2 1000000 big
)");
  const auto params = WeightParams::defaults_for(s.graph);
  EXPECT_THROW(candidate_set(s.graph, s.initial, s.flows[0], s.catalog, 1), Error);
  try {
    mva_solve(s.graph, s.catalog, s.initial, s.flows[0], BeamConfig{1}, params);
    FAIL() << "expected a rejection";
  } catch (const FlowRejected& e) {
    EXPECT_EQ(e.stage(), 1);
    EXPECT_EQ(e.reason(), RejectReason::kEmptyCandidateSet);
  }
}

TEST(Mva, ForcedSingleAssignment) {
  const Scenario s = parse_fixture(R"(
nf 0 fw 1000000000 1 1
node 0 sdn pmax=1
node 1 sdn pmax=1
node 2 nfv pmax=2 theta=0.5 res=4
node 3 sdn pmax=1
link 0 0 1 1000000000 1 1
link 1 1 2 1000000000 1 1
link 2 1 3 1000000000 1 1
flow 0 0 3 1000000 fw
)");
  const auto params = WeightParams::defaults_for(s.graph);
  const MvaResult r =
      mva_solve(s.graph, s.catalog, s.initial, s.flows[0], BeamConfig{1}, params);
  EXPECT_EQ(r.assignment.placements, std::vector<NodeId>{2});
  EXPECT_EQ(r.assignment.segments,
            (std::vector<std::vector<LinkId>>{{0, 1}, {1, 2}}));
}

TEST(Mva, ZeroWidthIsRejected) {
  const Scenario s = load_test_fixture("fig3.txt");
  EXPECT_THROW(mva_solve(s.graph, s.catalog, s.initial, s.flows[0], BeamConfig{0},
                         WeightParams::defaults_for(s.graph)),
               Error);
}

TEST(SolveAll, EmptyFlowListLeavesEverythingOff) {
  const Scenario s = load_test_fixture("fig3.txt");
  const auto r = solve_all(s.graph, s.catalog, {}, BeamConfig{2},
                           WeightParams::defaults_for(s.graph));
  EXPECT_TRUE(r.outcomes.empty());
  EXPECT_EQ(r.objective_power, 0.0);
  EXPECT_EQ(r.state, init_state(s.graph, s.catalog));
}

TEST(SolveAll, OneFlowMatchesMvaSolve) {
  const Scenario s = load_test_fixture("fig3.txt");
  const auto params = WeightParams::defaults_for(s.graph);
  const auto all = solve_all(s.graph, s.catalog, s.flows, BeamConfig{3}, params, &s.initial);
  const auto one = mva_solve(s.graph, s.catalog, s.initial, s.flows[0], BeamConfig{3}, params);
  ASSERT_TRUE(all.outcomes[0].assignment);
  EXPECT_EQ(*all.outcomes[0].assignment, one.assignment);
  EXPECT_EQ(all.state, one.state);
  EXPECT_EQ(all.outcomes[0].mdra_calls, one.mdra_calls);
}

TEST(MvaProperty, RandomInstancesProduceValidSolutions) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const Scenario s = testing::random_scenario(seed);
    const auto params = WeightParams::defaults_for(s.graph);
    const auto r = solve_all(s.graph, s.catalog, s.flows, BeamConfig{4}, params);
    const auto report =
        validate_solution(s.graph, s.catalog, s.flows, r.assignments(), nullptr, &r.state);
    EXPECT_TRUE(report.ok()) << "seed " << seed;
    EXPECT_TRUE(testing::matches_from_scratch(s.graph, s.catalog, s.flows, r.assignments(),
                                              r.state))
        << "seed " << seed;
  }
}

TEST(MvaProperty, UnboundedWidthMatchesStageDecompositionOptimum) {
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Scenario s = testing::random_scenario(seed, {4, 8, 1, 3});
    const auto params = WeightParams::defaults_for(s.graph);
    const FlowSpec& f = s.flows[0];
    const auto expected = testing::brute_force_stage_optimum(s.graph, s.catalog, s.initial, f, params);
    std::optional<double> got;
    try {
      got = mva_solve(s.graph, s.catalog, s.initial, f, BeamConfig{BeamConfig::kUnbounded},
                      params)
                .weight;
    } catch (const FlowRejected&) {
    }
    EXPECT_EQ(got.has_value(), expected.has_value()) << "seed " << seed;
    if (got && expected) {
      EXPECT_EQ(*got, *expected) << "seed " << seed;
      ++compared;
    }
  }
  EXPECT_GT(compared, 50);
}

TEST(MvaProperty, CallCountWithinStageBound) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Scenario s = testing::random_scenario(seed);
    const auto params = WeightParams::defaults_for(s.graph);
    const std::size_t m = s.graph.function_node_count();
    const auto r = solve_all(s.graph, s.catalog, s.flows, BeamConfig{16}, params);
    for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
      EXPECT_LE(r.outcomes[i].mdra_calls, s.flows[i].chain.size() * m * m + m)
          << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace hnfv

#include <gtest/gtest.h>

#include "campaign.hpp"
#include "ocds/report.hpp"
#include "ocds/simulator.hpp"
#include "test_util.hpp"

namespace ocds {
namespace {

using testing::read_scenario_file;

Scenario story(const char* file) { return parse_scenario(read_scenario_file(file)); }

TEST(Run, StoryOne) {
  auto rep = run(story("story1.ocds"));
  EXPECT_TRUE(rep.all_passed()) << render_report(rep, ReportFormat::Text);
  EXPECT_EQ(rep.assertions.size(), 5u);
  EXPECT_EQ(rep.final_states.at(PeerId("P")), (ElementSet{1, 2, 3, 4, 6}));
  EXPECT_EQ(rep.final_states.at(PeerId("Q")), (ElementSet{2, 3, 6, 9}));
  EXPECT_EQ(rep.messages, 1u);
}

TEST(Run, StoryTwoFiltered) {
  RunOptions opts;
  opts.trace = true;
  auto rep = run(story("story2.ocds"), opts);
  EXPECT_TRUE(rep.all_passed()) << render_report(rep, ReportFormat::Text);
  EXPECT_EQ(rep.final_states.at(PeerId("Q")), (ElementSet{2, 3, 4, 6, 9}));
  bool saw_discard = false;
  for (const auto& t : rep.trace) {
    saw_discard |= t.text == "Q local delete 6 discarded (non-effectful)";
  }
  EXPECT_TRUE(saw_discard);
}

TEST(Run, StoryTwoUnfilteredDiverges) {
  RunOptions opts;
  opts.effectful_filter = false;
  auto rep = run(story("story2.ocds"), opts);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_EQ(rep.final_states.at(PeerId("P")), (ElementSet{1, 2, 3, 4}));
  EXPECT_EQ(rep.final_states.at(PeerId("Q")), (ElementSet{2, 3, 4, 6, 9}));
  const auto& last = rep.assertions.back();
  EXPECT_EQ(last.kind, "consistent");
  EXPECT_FALSE(last.pass);
  EXPECT_EQ(last.detail, "P={} Q={6}");
}

TEST(Run, EmptyEventList) {
  auto s = parse_scenario("peer P\npeer Q\nlink P Q\ninit P {1}\n");
  auto rep = run(s);
  EXPECT_EQ(rep.messages, 0u);
  EXPECT_EQ(rep.quiescence_tick, 0u);
  EXPECT_TRUE(rep.assertions.empty());
}

TEST(Run, Deterministic) {
  auto s = story("triangle.ocds");
  RunOptions opts;
  opts.trace = true;
  auto a = render_report(run(s, opts), ReportFormat::Tsv);
  auto b = render_report(run(s, opts), ReportFormat::Tsv);
  EXPECT_EQ(a, b);
}

TEST(Run, TriangleScenarioConverges) {
  auto s = story("triangle.ocds");
  for (std::uint64_t seed : {0u, 1u, 7u, 99u}) {
    RunOptions opts;
    opts.seed = seed;
    auto rep = run(s, opts);
    EXPECT_TRUE(rep.all_passed()) << render_report(rep, ReportFormat::Text);
    auto oracle = oracle_final_views(s, rep.issued);
    EXPECT_EQ(observed_views(s, rep.final_states), oracle);
  }
}

TEST(Step, PartitionBuffersAndHealFlushes) {
  Simulator sim(story("story1.ocds"));
  // Run through tick 2: both ops done, P's insert buffered.
  while (sim.now() < 3) ASSERT_TRUE(sim.step());
  EXPECT_FALSE(sim.link_up(PeerId("P"), PeerId("Q")));
  EXPECT_EQ(sim.buffered(), 1u);
  EXPECT_EQ(sim.in_flight(), 0u);
  EXPECT_TRUE(sim.quiescent());  // buffered on a down link does not count
  EXPECT_EQ(sim.agent(PeerId("Q")).store().snapshot(), (ElementSet{2, 3, 9}));

  ASSERT_TRUE(sim.step());  // heal at tick 3
  EXPECT_TRUE(sim.link_up(PeerId("P"), PeerId("Q")));
  EXPECT_EQ(sim.buffered(), 0u);
  EXPECT_EQ(sim.in_flight(), 1u);
  EXPECT_FALSE(sim.quiescent());

  while (sim.step()) {
  }
  EXPECT_TRUE(sim.finished());
  EXPECT_FALSE(sim.step());
  EXPECT_TRUE(sim.quiescent());
  EXPECT_TRUE(sim.report().all_passed());
}

TEST(Step, NeverHealedLinkStillReachesEnd) {
  auto s = parse_scenario(R"(
peer P offer="x % 2 == 0" accept="x % 2 == 0"
peer Q offer="x % 2 == 0" accept="x % 2 == 0"
link P Q
at 0 partition P Q
at 1 op P insert 2
at END assert-state Q {}
at END assert-consistent P Q
)");
  Simulator sim(s);
  while (sim.step()) {
  }
  EXPECT_EQ(sim.buffered(), 1u);
  ASSERT_EQ(sim.report().assertions.size(), 2u);
  EXPECT_TRUE(sim.report().assertions[0].pass);
  EXPECT_FALSE(sim.report().assertions[1].pass);
  EXPECT_THROW(oracle_final_views(s, sim.report().issued), ScenarioError);
}

TEST(Step, InFlightHeldDuringPartition) {
  auto s = parse_scenario(R"(
peer P
peer Q
link P Q latency=5
at 0 op P insert 1
at 1 partition P Q
at 10 assert-state Q {}
at 20 heal P Q
at END assert-state Q {1}
)");
  auto rep = run(s);
  EXPECT_TRUE(rep.all_passed()) << render_report(rep, ReportFormat::Text);
  EXPECT_EQ(rep.quiescence_tick, 20u);
}

TEST(Step, EndActionsRunBeforeEndAssertions) {
  auto s = parse_scenario(R"(
peer P
peer Q
link P Q latency=3
at END op P insert 4
at END assert-state Q {4}
)");
  auto rep = run(s);
  EXPECT_TRUE(rep.all_passed()) << render_report(rep, ReportFormat::Text);
}

TEST(Strict, AsymmetricLinkWarnsOrFails) {
  const char* text = R"(
peer P offer="x % 2 == 0" accept="x % 2 == 0"
peer Q offer="x % 3 == 0" accept="true"
link P Q
)";
  auto s = parse_scenario(text);
  auto rep = run(s);
  ASSERT_EQ(rep.warnings.size(), 1u);
  RunOptions strict;
  strict.strict = true;
  EXPECT_THROW(run(s, strict), ScenarioError);
}

TEST(Oracle, StoryOneSharedView) {
  auto s = story("story1.ocds");
  auto rep = run(s);
  auto views = oracle_final_views(s, rep.issued);
  EXPECT_EQ(views.at({PeerId("P"), PeerId("Q")}), ElementSet{6});
}

TEST(Oracle, NoOpsGivesInitialViews) {
  auto s = parse_scenario(R"(
peer P offer="x % 2 == 0" accept="x % 2 == 0"
peer Q offer="x % 3 == 0" accept="x % 3 == 0"
link P Q
init P {6,12,7}
init Q {6,12,9}
)");
  auto views = oracle_final_views(s, {});
  EXPECT_EQ(views.at({PeerId("P"), PeerId("Q")}), (ElementSet{6, 12}));
}

TEST(Oracle, RejectsInconsistentStart) {
  auto s = parse_scenario("peer P\npeer Q\nlink P Q\ninit P {1}\n");
  EXPECT_THROW(oracle_final_views(s, {}), ScenarioError);
}

// A slice of the acceptance campaign so unit runs catch regressions fast.
TEST(Campaign, SmallRandomSlice) {
  using testing::Topology;
  for (auto topo : {Topology::Line, Topology::Star, Topology::Triangle}) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      auto s = testing::random_scenario(seed * 31 + 5, topo);
      auto c = testing::check_random_scenario(s, topo);
      ASSERT_TRUE(c.ok) << testing::to_string(topo) << " seed " << seed << ": "
                        << c.failure << "\n"
                        << to_text(s);
    }
  }
}

}  // namespace
}  // namespace ocds

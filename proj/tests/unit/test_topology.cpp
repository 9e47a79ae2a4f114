#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "sncslice/error.hpp"
#include "sncslice/topology.hpp"

using namespace sncslice;

namespace {

std::vector<std::vector<std::string>> groups(const Scenario& s, const SliceLayout& l) {
  std::vector<std::vector<std::string>> out;
  for (const auto& slice : l.slices) {
    std::vector<std::string> ids;
    for (auto f : slice.flows) ids.push_back(s.flows()[f].id());
    out.push_back(ids);
  }
  return out;
}

using G = std::vector<std::vector<std::string>>;

}  // namespace

TEST(Layouts, ReferenceCellOptions) {
  const auto s = fixtures::table1();
  EXPECT_EQ(groups(s, build_layout(s, DeploymentOption::DO0)),
            (G{{"f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9"}}));
  EXPECT_EQ(groups(s, build_layout(s, DeploymentOption::DO1)),
            (G{{"f1", "f2", "f3"}, {"f4", "f5", "f6"}, {"f7", "f8", "f9"}}));
  EXPECT_EQ(groups(s, build_layout(s, DeploymentOption::DO2)),
            (G{{"f1"}, {"f2"}, {"f3"}, {"f4"}, {"f5"}, {"f6"}, {"f7"}, {"f8"}, {"f9"}}));
  EXPECT_EQ(groups(s, build_layout(s, DeploymentOption::DO3)),
            (G{{"f1", "f2", "f3", "f4", "f5", "f6"}, {"f7", "f8", "f9"}}));
  EXPECT_EQ(groups(s, build_layout(s, DeploymentOption::DO4)),
            (G{{"f3", "f6"}, {"f1", "f2", "f4", "f5"}, {"f7"}, {"f8"}, {"f9"}}));
  const auto l = build_layout(s, DeploymentOption::DO4);
  EXPECT_EQ(l.slices.front().id, "S1");
  EXPECT_EQ(l.slices.back().id, "S5");
}

TEST(Layouts, AlwaysPartition) {
  const auto s = fixtures::table1();
  for (auto o : {DeploymentOption::DO0, DeploymentOption::DO1, DeploymentOption::DO2,
                 DeploymentOption::DO3, DeploymentOption::DO4}) {
    const auto l = build_layout(s, o);
    std::multiset<std::size_t> seen;
    for (const auto& sl : l.slices) {
      EXPECT_FALSE(sl.flows.empty());
      seen.insert(sl.flows.begin(), sl.flows.end());
    }
    EXPECT_EQ(seen.size(), s.flows().size());
    EXPECT_EQ(std::set<std::size_t>(seen.begin(), seen.end()).size(), s.flows().size());
    EXPECT_NO_THROW(check_partition(l, s.flows().size()));
  }
}

TEST(Layouts, SingleFlowScenarioIsIdenticalForAllOptions) {
  const auto s = fixtures::make_scenario({{"u", 100}}, {{"a", "u", 1000, 1e-3}}, 10);
  for (auto o : {DeploymentOption::DO0, DeploymentOption::DO1, DeploymentOption::DO2,
                 DeploymentOption::DO3, DeploymentOption::DO4}) {
    EXPECT_EQ(groups(s, build_layout(s, o)), (G{{"a"}}));
  }
}

TEST(Layouts, CustomAndErrors) {
  const auto s = fixtures::make_scenario({{"u", 100}}, {{"a", "u", 1000, 1e-3}, {"b", "u", 1000, 1e-3}},
                                         10, McsTable::standard_cqi(), {{"X", {1, 0}}});
  EXPECT_EQ(groups(s, build_layout(s, DeploymentOption::Custom)), (G{{"b", "a"}}));
  const auto plain = fixtures::make_scenario({{"u", 100}}, {{"a", "u", 1000, 1e-3}}, 10);
  EXPECT_THROW(build_layout(plain, DeploymentOption::Custom), Error);
  try {
    parse_option("DO7");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownOption);
  }
  EXPECT_EQ(parse_option("2"), DeploymentOption::DO2);
  EXPECT_EQ(parse_option("DO-#4"), DeploymentOption::DO4);
  EXPECT_EQ(parse_option("do3"), DeploymentOption::DO3);
  EXPECT_EQ(parse_option("custom"), DeploymentOption::Custom);
}

TEST(Layouts, PartitionCheckRejectsOverlaps) {
  SliceLayout l{DeploymentOption::Custom, {{"A", {0}}, {"B", {0, 1}}}};
  EXPECT_THROW(check_partition(l, 2), Error);
  l.slices = {{"A", {0}}, {"B", {}}};
  EXPECT_THROW(check_partition(l, 1), Error);
  l.slices = {{"A", {0}}};
  EXPECT_THROW(check_partition(l, 2), Error);
}

TEST(Scenario, Validation) {
  EXPECT_THROW(fixtures::make_scenario({}, {{"a", "u", 1000, 1e-3}}, 10), Error);
  EXPECT_THROW(fixtures::make_scenario({{"u", 100}}, {}, 10), Error);
  EXPECT_THROW(fixtures::make_scenario({{"u", 100}}, {{"a", "v", 1000, 1e-3}}, 10), Error);
  EXPECT_THROW(fixtures::make_scenario({{"u", 100}, {"w", 50}}, {{"a", "u", 1000, 1e-3}}, 10), Error);
  EXPECT_THROW(fixtures::make_scenario({{"u", 100}}, {{"a", "u", 1000, 1e-3}, {"a", "u", 10, 1e-3}}, 10), Error);
  EXPECT_THROW(fixtures::make_scenario({{"u", 100}}, {{"a", "u", 1000, 1e-3}}, 0), Error);
}

TEST(PerFlowRbs, RoundRobinSplit) {
  SliceLayout l{DeploymentOption::Custom, {{"A", {0}}, {"B", {1, 2, 3}}}};
  const auto v = per_flow_rbs(l, {12, 20}, 4);
  EXPECT_EQ(v[0], 12.0);
  EXPECT_NEAR(v[1] + v[2] + v[3], 20.0, 1e-12);
  EXPECT_DOUBLE_EQ(v[1], 20.0 / 3.0);

  const auto s = fixtures::make_scenario({{"u", 100}},
                                         {{"a", "u", 1, 1e-3}, {"b", "u", 1, 1e-3}, {"c", "u", 1, 1e-3}, {"d", "u", 1, 1e-3}}, 40);
  const auto m = per_flow_rbs(l, s, {{"A", 12}, {"B", 20}});
  EXPECT_EQ(m.at("a"), 12.0);
  try {
    per_flow_rbs(l, s, {{"A", 12}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingSlice);
  }
}

TEST(PerFlowRbs, IdentityForPerFlowSlices) {
  const auto s = fixtures::table1();
  const auto l = build_layout(s, DeploymentOption::DO2);
  const std::vector<int> alloc = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto v = per_flow_rbs(l, alloc, s.flows().size());
  for (std::size_t i = 0; i < alloc.size(); ++i) EXPECT_EQ(v[i], alloc[i]);
}

TEST(Scenario, ReferenceCellLinks) {
  const auto s = fixtures::table1();
  ASSERT_EQ(s.ues().size(), 3u);
  EXPECT_GT(s.ues()[0].link.avg_snr_linear, s.ues()[1].link.avg_snr_linear);
  EXPECT_GT(s.ues()[1].link.avg_snr_linear, s.ues()[2].link.avg_snr_linear);
  for (const auto& ue : s.ues()) {
    double sum = 0.0;
    for (double p : ue.mcs.probabilities) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sncslice/error.hpp"
#include "sncslice/simulator.hpp"

using namespace sncslice;

namespace {

// One flow of 180-bit packets on one RB of spectral efficiency 1: exactly
// one packet leaves per slot, arrivals are Poisson with mean `load` per slot.
Scenario unit_server(double load) {
  const double t_slot = Numerology{}.t_slot;
  return fixtures::make_scenario({{"u", 100}}, {{"f", "u", load / t_slot, 1e-2, 180}}, 1,
                                 fixtures::deterministic_mcs(1.0));
}

SimStats run(const Scenario& s, std::int64_t slots, std::uint64_t seed = 1, int replications = 1,
             unsigned workers = 1, double traffic_scale = 1.0) {
  SimConfig c;
  c.duration_slots = slots;
  c.warmup_slots = slots / 100;
  c.seed = seed;
  c.replications = replications;
  c.workers = workers;
  c.traffic_scale = traffic_scale;
  const auto layout = build_layout(s, DeploymentOption::DO2);
  return simulate(s, layout, Planner(s, layout).equal_split(), c);
}

}  // namespace

TEST(Wilson, KnownValues) {
  const auto w = wilson_interval(0, 1000);
  EXPECT_DOUBLE_EQ(w.lower, 0.0);
  const double z2 = kWilsonZ99 * kWilsonZ99;
  EXPECT_NEAR(w.upper, z2 / (1000 + z2), 1e-12);
  const auto h = wilson_interval(50, 100);
  EXPECT_NEAR(h.lower + h.upper, 1.0, 1e-12);
  EXPECT_LT(h.lower, 0.5);
  const auto e = wilson_interval(0, 0);
  EXPECT_EQ(e.lower, 0.0);
  EXPECT_EQ(e.upper, 1.0);
}

TEST(Histogram, CountsAndQuantiles) {
  DelayHistogram h;
  h.add(1, 90);
  h.add(3, 9);
  h.add(10, 1);
  EXPECT_EQ(h.total(), 100u);
  EXPECT_EQ(h.count_above(2.5e-4, 2.5e-4), 10u);
  EXPECT_EQ(h.count_above(7.5e-4, 2.5e-4), 1u);
  EXPECT_EQ(h.quantile_slots(0.5), 1);
  EXPECT_EQ(h.quantile_slots(0.99), 3);
  EXPECT_EQ(h.quantile_slots(1.0), 10);
  EXPECT_NEAR(h.mean_slots(), (90 + 27 + 10) / 100.0, 1e-12);
  EXPECT_THROW(h.add(-1), Error);
}

TEST(Simulator, SilentTrafficYieldsNoSamples) {
  const auto s = fixtures::table1();
  const auto stats = run(s, 2000, 1, 1, 1, 0.0);
  for (const auto& f : stats.flows) EXPECT_EQ(f.samples, 0u);
  for (const auto& sl : stats.slices) {
    EXPECT_EQ(sl.utilization.mean(), 0.0);
    EXPECT_EQ(sl.p95(), 0.0);
  }
}

TEST(Simulator, SparseTrafficIsServedInOneSlot) {
  const auto s = unit_server(0.01);
  const auto stats = run(s, 200000);
  const auto& d = stats.flow("f").delays;
  ASSERT_GT(d.total(), 1000u);
  // Two packets in one slot are rare but possible; the second waits one more.
  EXPECT_GT(static_cast<double>(d.counts()[1]) / static_cast<double>(d.total()), 0.99);
  EXPECT_EQ(d.counts()[0], 0u);
}

TEST(Simulator, DeterministicServerMatchesSlottedMd1Mean) {
  for (double load : {0.3, 0.5, 0.7}) {
    const auto s = unit_server(load);
    const auto stats = run(s, 400000, 7);
    const auto& d = stats.flow("f").delays;
    double second = 0.0;
    for (std::size_t k = 0; k < d.counts().size(); ++k) {
      second += static_cast<double>(k) * static_cast<double>(k) * static_cast<double>(d.counts()[k]);
    }
    const double n = static_cast<double>(d.total());
    const double mean = d.mean_slots();
    const double sd = std::sqrt(second / n - mean * mean);
    // Queue correlation inflates the naive standard error; 40 sigma of it is
    // still well under 3% of the mean.
    EXPECT_NEAR(mean, static_cast<double>(oracle::slotted_md1_mean_delay(load)), 40 * sd / std::sqrt(n))
        << "load " << load;
  }
}

TEST(Simulator, LongerRunNarrowsAroundMd1Mean) {
  const auto s = unit_server(0.5);
  const double exact = static_cast<double>(oracle::slotted_md1_mean_delay(0.5));
  EXPECT_DOUBLE_EQ(exact, 1.5);
  const double short_err = std::abs(run(s, 100000, 3).flow("f").delays.mean_slots() - exact);
  const double long_err = std::abs(run(s, 1000000, 3).flow("f").delays.mean_slots() - exact);
  EXPECT_LT(long_err, 0.02);
  EXPECT_LT(short_err, 0.05);
}

TEST(Simulator, IdenticalAcrossWorkerCounts) {
  const auto s = fixtures::table1();
  const auto a = run(s, 4000, 11, 3, 1);
  const auto b = run(s, 4000, 11, 3, 3);
  for (std::size_t f = 0; f < a.flows.size(); ++f) {
    EXPECT_EQ(a.flows[f].delays.counts(), b.flows[f].delays.counts());
    EXPECT_EQ(a.flows[f].offered_bits, b.flows[f].offered_bits);
  }
  ASSERT_EQ(a.replications.size(), 3u);
  EXPECT_NE(a.replications[0].flows[0].delays.counts(), a.replications[1].flows[0].delays.counts());
  const auto c = run(s, 4000, 12, 3, 1);
  EXPECT_NE(a.flows[0].delays.counts(), c.flows[0].delays.counts());
}

TEST(Simulator, WorkConservingAndBoundedUtilization) {
  const auto s = fixtures::table1();
  SimConfig c;
  c.duration_slots = 3000;
  c.seed = 5;
  bool ok = true;
  std::vector<double> queued(s.flows().size(), 0.0);
  c.slot_observer = [&](const SlotEvent& e) {
    ok &= e.served_bits >= 0.0 && e.served_bits <= e.capacity_bits * (1 + 1e-12);
    // Capacity is only left over when the queue is drained.
    if (e.served_bits < e.capacity_bits * (1 - 1e-9)) ok &= e.queued_bits == 0.0;
    ok &= e.queued_bits >= 0.0;
    queued[e.flow] = e.queued_bits;
  };
  const auto layout = build_layout(s, DeploymentOption::DO1);
  const auto stats = simulate(s, layout, {{20, 20, 25}}, c);
  EXPECT_TRUE(ok);
  for (const auto& sl : stats.slices) {
    EXPECT_GE(sl.utilization.mean(), 0.0);
    EXPECT_LE(sl.utilization.mean(), 1.0);
    EXPECT_LE(sl.p95(), 1.0);
    for (double u : sl.series) {
      EXPECT_GE(u, 0.0);
      EXPECT_LE(u, 1.0);
    }
  }
}

TEST(CheckBound, Verdicts) {
  const auto s = unit_server(0.5);
  const auto stats = run(s, 200000);
  const double t = s.numerology().t_slot;
  EXPECT_EQ(check_bound(stats, "f", 100 * t, 1e-2).verdict, Verdict::Holds);
  EXPECT_EQ(check_bound(stats, "f", 0.5 * t, 1e-2).verdict, Verdict::Violated);

  const auto few = run(s, 20000);
  ASSERT_LT(few.flow("f").samples, 20000u);
  EXPECT_EQ(check_bound(few, "f", 100 * t, 1e-5).verdict, Verdict::Inconclusive);

  SimConfig none;
  const auto empty = simulate(s, build_layout(s, DeploymentOption::DO2), {{1}}, none);
  EXPECT_EQ(check_bound(empty, "f", t, 1e-2).verdict, Verdict::Inconclusive);
  EXPECT_THROW(check_bound(stats, "nope", t, 1e-2), Error);
  try {
    stats.flow("nope");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownFlow);
  }
}

TEST(CheckBound, StarvedSliceViolatesPlannedBound) {
  const auto s = fixtures::table1();
  const auto layout = build_layout(s, DeploymentOption::DO2);
  const auto planned = plan(s, layout);
  ASSERT_EQ(planned.status, PlanStatus::Feasible);
  // Starve the tightest flow: one RB where the plan needs many.
  auto starved = planned.evaluated.allocation;
  starved.per_slice[7] = 1;
  SimConfig c;
  c.duration_slots = 20000;
  c.warmup_slots = 100;
  const auto stats = simulate(s, layout, starved, c);
  EXPECT_EQ(check_bound(stats, "f8", *planned.evaluated.flows[7].w_seconds, 1e-2).verdict,
            Verdict::Violated);
}

TEST(SimConfig, Validation) {
  SimConfig c;
  c.duration_slots = 10;
  c.warmup_slots = 10;
  EXPECT_THROW(c.validate(), Error);
  c.warmup_slots = 0;
  c.replications = 0;
  EXPECT_THROW(c.validate(), Error);
  c.replications = 1;
  c.traffic_scale = -1;
  EXPECT_THROW(c.validate(), Error);
  c.traffic_scale = 0;
  EXPECT_NO_THROW(c.validate());
}

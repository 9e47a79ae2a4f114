#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sncslice/error.hpp"
#include "sncslice/snc.hpp"

using namespace sncslice;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FlowSpec flow(double lambda, double target = 1e-3, double eps = 1e-5) {
  return FlowSpec("f", "u", lambda, PacketSizePmf::fixed(512), target, eps);
}

ServiceModel deterministic_service(double rate_bits_per_s) {
  // one RB of eta chosen so the constant rate is exactly rate_bits_per_s
  const double eta = rate_bits_per_s / (12 * 60e3);
  return ServiceModel(McsPmf{{1.0}}, McsTable({{0.0, kInf, eta}}), 1.0, Numerology{});
}

}  // namespace

TEST(DelayBoundAt, FrozenValue) {
  EXPECT_NEAR(delay_bound_at(1e6, 2e6, 1e-5, 1e-5, 1e5) / 1.3331313464123427, 1.0, 1e-12);
}

TEST(DelayBoundAt, Errors) {
  const auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code([] { delay_bound_at(1e6, 1.1e6, 1e-5, 1e-5, 1e5); }), ErrorCode::StabilityViolated);
  EXPECT_EQ(code([] { delay_bound_at(1e6, 2e6, 1.0, 1e-5, 1e5); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([] { delay_bound_at(1e6, 2e6, 1e-5, 0.0, 1e5); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([] { delay_bound_at(1e6, 2e6, 1e-5, 1e-300, 1e-300); }), ErrorCode::NumericUnderflow);
}

TEST(DelayBoundAt, Monotonicity) {
  EXPECT_LT(delay_bound_at(1e6, 4e6, 1e-5, 1e-5, 1e5), delay_bound_at(1e6, 2e6, 1e-5, 1e-5, 1e5));
  EXPECT_GE(delay_bound_at(1e6, 2e6, 1e-6, 1e-5, 1e5), delay_bound_at(1e6, 2e6, 1e-5, 1e-5, 1e5));
}

TEST(Optimizer, InfeasibleWhenMeanServiceBelowMeanArrival) {
  const auto f = flow(1000);
  const auto r = optimize_delay_bound(f, deterministic_service(0.9 * mean_bit_rate(f)));
  EXPECT_TRUE(r.infeasible());
}

TEST(Optimizer, DeterministicTenfoldMatchesGrid) {
  const auto f = flow(1000);
  const auto s = deterministic_service(10 * mean_bit_rate(f));
  const auto r = optimize_delay_bound(f, s);
  ASSERT_FALSE(r.infeasible());
  const auto grid = oracle::grid_search(
      [&](long double t) { return oracle::arrival_rho(1000, {{512, 1}}, t); },
      [&](long double t) { return static_cast<long double>(s.rho(static_cast<double>(t))); }, 1e-5,
      1e-9, max_theta(f));
  EXPECT_LE(r.bound->w_seconds, 1.05 * grid.w);
}

TEST(Optimizer, ResultIsConsistentAndBestSampled) {
  const auto table = McsTable::standard_cqi();
  const ServiceModel s(mcs_pmf(db_to_linear(17.0), table), table, 6.0, Numerology{});
  const auto f = flow(6000);
  double min_seen = kInf;
  OptimizerOptions opts;
  opts.observer = [&](double, double, double w) { min_seen = std::min(min_seen, w); };
  const auto r = optimize_delay_bound(f, s, opts);
  ASSERT_FALSE(r.infeasible());
  const auto& b = *r.bound;
  EXPECT_EQ(b.w_seconds, min_seen);
  EXPECT_NEAR(b.w_seconds / delay_bound_at(b.rho_a, b.rho_s, 1e-5, b.params.theta, b.params.delta), 1.0, 1e-12);
  EXPECT_LT(b.params.delta, (b.rho_s - b.rho_a) / 2);
  EXPECT_GT(r.evaluations, 0u);
  const auto again = optimize_delay_bound(f, s);
  EXPECT_EQ(again.bound->w_seconds, b.w_seconds);
  EXPECT_EQ(again.bound->params.theta, b.params.theta);
  EXPECT_EQ(again.bound->params.delta, b.params.delta);
}

TEST(Optimizer, MoreRbsNeverIncreaseW) {
  const auto table = McsTable::standard_cqi();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int seed = 0; seed < 100; ++seed) {
    const auto pmf = mcs_pmf(db_to_linear(5.0 + 30.0 * u(rng)), table);
    const auto f = flow(500 + 15000 * u(rng));
    double prev = kInf;
    const int k = 1 + static_cast<int>(u(rng) * 10);
    for (int n = k; n <= k + 2; ++n) {
      const auto r = optimize_delay_bound(f, ServiceModel(pmf, table, n, Numerology{}));
      const double w = r.infeasible() ? kInf : r.bound->w_seconds;
      EXPECT_LE(w, prev) << "seed " << seed << " n " << n;
      prev = w;
    }
  }
}

TEST(Optimizer, GenericOverloadMatchesFlowOverload) {
  const auto table = McsTable::standard_cqi();
  const ServiceModel s(mcs_pmf(db_to_linear(20.0), table), table, 4.0, Numerology{});
  const auto f = flow(3000);
  const auto a = optimize_delay_bound(f, s);
  const auto b = optimize_delay_bound([&](double t) { return arrival_rho(f, t); },
                                      [&](double t) { return s.rho(t); }, 1e-5, max_theta(f));
  ASSERT_TRUE(a.bound && b.bound);
  EXPECT_EQ(a.bound->w_seconds, b.bound->w_seconds);
}

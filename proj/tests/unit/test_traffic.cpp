#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sncslice/error.hpp"
#include "sncslice/traffic.hpp"

using namespace sncslice;

namespace {

FlowSpec fixed_flow(double lambda, std::int64_t bits) {
  return FlowSpec("f", "u", lambda, PacketSizePmf::fixed(bits), 1e-3, 1e-5);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no sncslice::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(PacketSizePmf, FixedSize) {
  const auto pmf = PacketSizePmf::fixed(512);
  EXPECT_EQ(pmf.min_bits(), 512);
  EXPECT_EQ(pmf.max_bits(), 512);
  EXPECT_DOUBLE_EQ(pmf.mean_bits(), 512.0);
}

TEST(PacketSizePmf, RejectsBadDistributions) {
  EXPECT_EQ(code_of([] { PacketSizePmf({{100, 0.5}, {200, 0.4}}); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { PacketSizePmf({}); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { PacketSizePmf({{0, 1.0}}); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { PacketSizePmf({{100, 0.5}, {100, 0.5}}); }), ErrorCode::ValidationError);
}

TEST(FlowSpec, RejectsBadParameters) {
  const auto pmf = PacketSizePmf::fixed(512);
  EXPECT_EQ(code_of([&] { FlowSpec("f", "u", 0.0, pmf, 1e-3, 1e-5); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([&] { FlowSpec("f", "u", 10.0, pmf, 0.0, 1e-5); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([&] { FlowSpec("f", "u", 10.0, pmf, 1e-3, 1.0); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([&] { FlowSpec("f", "u", 10.0, pmf, 1e-3, 0.0); }), ErrorCode::ValidationError);
}

TEST(ArrivalRho, FrozenValue) {
  const auto f = fixed_flow(2000, 512);
  EXPECT_NEAR(packet_mgf(f, 1e-3), 1.668625110139667, 1e-14);
  EXPECT_NEAR(arrival_rho(f, 1e-3) / 1337250.2202793339, 1.0, 1e-12);
}

TEST(ArrivalRho, SmallThetaTendsToMeanRate) {
  const auto f = fixed_flow(2000, 512);
  EXPECT_NEAR(arrival_rho(f, 1e-12) / mean_bit_rate(f), 1.0, 1e-6);
  EXPECT_DOUBLE_EQ(mean_bit_rate(f), 2000.0 * 512.0);
}

TEST(ArrivalRho, NonDecreasingInTheta) {
  const FlowSpec f("f", "u", 5000, PacketSizePmf({{256, 0.3}, {1024, 0.7}}), 1e-3, 1e-5);
  double prev = 0.0;
  for (double t = 1e-9; t < max_theta(f); t *= 1.7) {
    const double r = arrival_rho(f, t);
    EXPECT_GE(r, prev * (1 - 1e-12));
    prev = r;
  }
}

TEST(ArrivalRho, MatchesOracleOnFuzzedInputs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(u(rng) * 4);
    std::vector<PacketSize> e;
    oracle::Pmf o;
    double total = 0.0;
    std::vector<double> w(n);
    for (auto& x : w) total += (x = 0.1 + u(rng));
    for (int k = 0; k < n; ++k) {
      const std::int64_t bits = 64 * (k + 1) + static_cast<std::int64_t>(u(rng) * 40);
      e.push_back({bits, w[k] / total});
      o.push_back({static_cast<long double>(bits), static_cast<long double>(w[k] / total)});
    }
    double sum = 0.0;
    for (const auto& x : e) sum += x.probability;
    e.back().probability += 1.0 - sum;
    o.back().second = e.back().probability;
    const double lambda = 100.0 + u(rng) * 2e4;
    const FlowSpec f("f", "u", lambda, PacketSizePmf(e), 1e-3, 1e-5);
    const double theta = std::exp(std::log(1e-9) + u(rng) * (std::log(max_theta(f)) - std::log(1e-9)));
    const long double ref = oracle::arrival_rho(lambda, o, theta);
    EXPECT_NEAR(arrival_rho(f, theta) / static_cast<double>(ref), 1.0, 1e-9);
  }
}

TEST(ArrivalRho, Errors) {
  const auto f = fixed_flow(2000, 512);
  EXPECT_EQ(code_of([&] { arrival_rho(f, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { arrival_rho(f, -1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { packet_mgf(f, 2.0); }), ErrorCode::Overflow);
  EXPECT_NO_THROW(arrival_rho(f, max_theta(f)));
}

TEST(ErrorCode, MessageCarriesCodeName) {
  const Error e(ErrorCode::CellTooSmall, "x");
  EXPECT_EQ(std::string(e.what()).rfind("CELL_TOO_SMALL", 0), 0u);
  EXPECT_EQ(to_string(ErrorCode::InvalidDimensions), "INVALID_DIMENSIONS");
}

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sncslice {

struct PacketSize {
  std::int64_t bits = 0;
  double probability = 0.0;

  friend bool operator==(const PacketSize&, const PacketSize&) = default;
};

/// Discrete packet-size distribution of a flow. Sizes are integral bit
/// counts; probabilities must sum to one within 1e-9.
class PacketSizePmf {
 public:
  explicit PacketSizePmf(std::vector<PacketSize> entries);

  static PacketSizePmf fixed(std::int64_t bits);

  std::span<const PacketSize> entries() const noexcept { return entries_; }
  std::int64_t min_bits() const noexcept { return min_bits_; }
  std::int64_t max_bits() const noexcept { return max_bits_; }
  double mean_bits() const noexcept { return mean_bits_; }

  friend bool operator==(const PacketSizePmf&, const PacketSizePmf&) = default;

 private:
  std::vector<PacketSize> entries_;
  std::int64_t min_bits_ = 0;
  std::int64_t max_bits_ = 0;
  double mean_bits_ = 0.0;
};

/// One downlink traffic flow: Poisson packet arrivals with rate `lambda()`
/// (packets/s), a packet-size PMF and a probabilistic delay target
/// P[w > delay_target] <= violation_budget.
class FlowSpec {
 public:
  FlowSpec(std::string id, std::string ue_id, double lambda, PacketSizePmf sizes,
           double delay_target, double violation_budget);

  const std::string& id() const noexcept { return id_; }
  const std::string& ue_id() const noexcept { return ue_id_; }
  double lambda() const noexcept { return lambda_; }
  const PacketSizePmf& sizes() const noexcept { return sizes_; }
  double delay_target() const noexcept { return delay_target_; }
  double violation_budget() const noexcept { return violation_budget_; }

  FlowSpec with_traffic(double lambda, PacketSizePmf sizes) const;
  FlowSpec with_violation_budget(double epsilon) const;

 private:
  std::string id_;
  std::string ue_id_;
  double lambda_;
  PacketSizePmf sizes_;
  double delay_target_;
  double violation_budget_;
};

// theta * max packet size never exceeds this inside the optimizer.
inline constexpr double kMaxMgfExponent = 700.0;

/// lambda * E[L] in bits/s.
double mean_bit_rate(const FlowSpec& flow);

/// M_L(theta) = sum_i p_i exp(theta d_i). Throws ErrorCode::Overflow when
/// theta * max size leaves the double exponent range.
double packet_mgf(const FlowSpec& flow, double theta);

/// Arrival envelope rate lambda (M_L(theta) - 1) / theta of the compound
/// Poisson process. The matching burst term is identically zero.
double arrival_rho(const FlowSpec& flow, double theta);

/// Largest theta the optimizer may sample for this flow.
double max_theta(const FlowSpec& flow);

}  // namespace sncslice

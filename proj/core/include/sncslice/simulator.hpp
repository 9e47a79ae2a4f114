#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sncslice/planner.hpp"
#include "sncslice/topology.hpp"

namespace sncslice {

struct SlotEvent {
  std::size_t replication = 0;
  std::int64_t slot = 0;
  std::size_t flow = 0;
  double capacity_bits = 0.0;
  double served_bits = 0.0;
  double queued_bits = 0.0;  // after service
};

struct SimConfig {
  std::int64_t duration_slots = 0;
  std::int64_t warmup_slots = 0;
  std::uint64_t seed = 1;
  int replications = 1;
  // Multiplies every flow's arrival rate; 0 silences all traffic.
  double traffic_scale = 1.0;
  // 0 = one worker per hardware thread.
  unsigned workers = 0;
  std::function<void(const SlotEvent&)> slot_observer;

  void validate() const;
};

/// Sojourn times in whole slots; delays are always >= 1 slot.
class DelayHistogram {
 public:
  void add(std::int64_t slots, std::uint64_t count = 1);
  void merge(const DelayHistogram& other);

  std::uint64_t total() const noexcept { return total_; }
  /// Number of samples with delay * t_slot strictly greater than `seconds`.
  std::uint64_t count_above(double seconds, double t_slot) const;
  /// Smallest delay (slots) d with P[w <= d] >= q; 0 when empty.
  std::int64_t quantile_slots(double q) const;
  double mean_slots() const;
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Fixed-width histogram over [0, 1] for per-slot utilization samples.
class UtilizationHistogram {
 public:
  static constexpr int kBins = 10000;

  UtilizationHistogram();
  void add(double u);
  void merge(const UtilizationHistogram& other);
  std::uint64_t total() const noexcept { return total_; }
  /// Upper edge of the bin holding the q-quantile.
  double quantile(double q) const;
  double mean() const noexcept { return total_ ? sum_ / static_cast<double>(total_) : 0.0; }

 private:
  std::vector<std::uint64_t> bins_;
  std::uint64_t total_ = 0;
  double sum_ = 0.0;
};

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = kWilsonZ99);

struct FlowSimStats {
  std::string flow_id;
  std::uint64_t samples = 0;
  DelayHistogram delays;
  double violation_at_target = 0.0;
  WilsonInterval target_interval;
  double offered_bits = 0.0;
};

struct SliceSimStats {
  std::string slice_id;
  UtilizationHistogram utilization;
  double p95() const { return utilization.quantile(0.95); }
  // Mean utilization per bucket of `SimStats::bucket_slots` measured slots.
  std::vector<double> series;
};

struct ReplicationStats {
  std::vector<FlowSimStats> flows;
  std::vector<SliceSimStats> slices;
};

struct SimStats {
  double t_slot = 0.0;
  std::int64_t bucket_slots = 0;
  std::vector<FlowSimStats> flows;    // aligned with scenario flows
  std::vector<SliceSimStats> slices;  // aligned with layout slices
  std::vector<ReplicationStats> replications;

  const FlowSimStats& flow(const std::string& flow_id) const;
  double mean_p95_utilization() const;
};

/// Slotted Monte Carlo run of the static per-flow split. Per slot and flow:
/// Poisson arrivals stamped at the slot start, FIFO service of the slot's
/// capacity (one i.i.d. MCS draw per whole RB plus a fractional share of one
/// more draw), and per-slice utilization = served bits / capacity bits.
/// A packet fully served in slot k that arrived in slot a has delay
/// (k + 1 - a) slots. Bit-identical for a fixed seed regardless of workers.
SimStats simulate(const Scenario& scenario, const SliceLayout& layout,
                  const Allocation& allocation, const SimConfig& config);

enum class Verdict { Holds, Violated, Inconclusive };

std::string_view to_string(Verdict verdict) noexcept;

struct BoundCheck {
  Verdict verdict = Verdict::Inconclusive;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double empirical = 0.0;
  WilsonInterval interval;
};

/// HOLDS if the upper Wilson bound of P[w > w_bound] is <= eps (1 + margin);
/// VIOLATED if the lower bound exceeds eps; otherwise INCONCLUSIVE.
BoundCheck check_bound(const SimStats& stats, const std::string& flow_id, double w_bound,
                       double epsilon, double margin = 0.1);

}  // namespace sncslice

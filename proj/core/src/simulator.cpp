#include "sncslice/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <random>
#include <thread>

#include "sncslice/error.hpp"

namespace sncslice {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream i of the master seed: splitmix64 applied to (seed, counter).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

struct Packet {
  std::int64_t stamp;
  double remaining;
};

// Inverse-CDF sampler over a small discrete support.
class DiscreteSampler {
 public:
  DiscreteSampler() = default;
  DiscreteSampler(std::vector<double> values, const std::vector<double>& probs)
      : values_(std::move(values)) {
    double acc = 0.0;
    for (double p : probs) cdf_.push_back(acc += p);
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  bool degenerate() const noexcept { return values_.size() == 1; }
  double first() const noexcept { return values_.front(); }

  double operator()(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return values_[static_cast<std::size_t>(it - cdf_.begin())];
  }

 private:
  std::vector<double> values_;
  std::vector<double> cdf_;
};

struct FlowState {
  double arrivals_per_slot = 0.0;
  DiscreteSampler sizes;
  DiscreteSampler rb_bits;
  std::int64_t whole_rbs = 0;
  double fractional_rb = 0.0;
  std::deque<Packet> queue;
  double queued_bits = 0.0;
};

ReplicationStats run_replication(const Scenario& scenario, const SliceLayout& layout,
                                 const std::vector<double>& shares, const SimConfig& config,
                                 std::size_t replication, std::int64_t bucket_slots) {
  const auto& flows = scenario.flows();
  const double t_slot = scenario.numerology().t_slot;
  std::mt19937_64 rng(stream_seed(config.seed, replication));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<FlowState> state(flows.size());
  std::vector<std::poisson_distribution<std::int64_t>> arrivals(flows.size());
  for (std::size_t f = 0; f < flows.size(); ++f) {
    auto& s = state[f];
    s.arrivals_per_slot = flows[f].lambda() * config.traffic_scale * t_slot;
    if (s.arrivals_per_slot > 0.0) {
      arrivals[f] = std::poisson_distribution<std::int64_t>(s.arrivals_per_slot);
    }
    std::vector<double> size_values;
    std::vector<double> size_probs;
    for (const auto& e : flows[f].sizes().entries()) {
      size_values.push_back(static_cast<double>(e.bits));
      size_probs.push_back(e.probability);
    }
    s.sizes = DiscreteSampler(std::move(size_values), size_probs);

    const auto& pmf = scenario.ue_of(f).mcs.probabilities;
    std::vector<double> bits;
    std::vector<double> probs;
    for (std::size_t m = 0; m < pmf.size(); ++m) {
      if (pmf[m] <= 0.0) continue;
      bits.push_back(per_rb_bits(scenario.numerology(), scenario.mcs_table().levels()[m].eta));
      probs.push_back(pmf[m]);
    }
    s.rb_bits = DiscreteSampler(std::move(bits), probs);
    s.whole_rbs = static_cast<std::int64_t>(std::floor(shares[f]));
    s.fractional_rb = shares[f] - static_cast<double>(s.whole_rbs);
  }

  ReplicationStats out;
  out.flows.resize(flows.size());
  for (std::size_t f = 0; f < flows.size(); ++f) out.flows[f].flow_id = flows[f].id();
  out.slices.resize(layout.slices.size());
  for (std::size_t s = 0; s < layout.slices.size(); ++s) out.slices[s].slice_id = layout.slices[s].id;

  std::vector<double> capacity(flows.size());
  std::vector<double> served(flows.size());
  std::vector<double> bucket_sum(layout.slices.size(), 0.0);
  std::int64_t bucket_fill = 0;

  for (std::int64_t slot = 0; slot < config.duration_slots; ++slot) {
    const bool measured = slot >= config.warmup_slots;
    for (std::size_t f = 0; f < flows.size(); ++f) {
      auto& s = state[f];
      auto& fs = out.flows[f];
      if (s.arrivals_per_slot > 0.0) {
        const auto n = arrivals[f](rng);
        for (std::int64_t i = 0; i < n; ++i) {
          const double bits = s.sizes.degenerate() ? s.sizes.first() : s.sizes(uniform(rng));
          s.queue.push_back({slot, bits});
          s.queued_bits += bits;
          if (measured) fs.offered_bits += bits;
        }
      }

      double cap = 0.0;
      if (s.rb_bits.degenerate()) {
        cap = s.rb_bits.first() * (static_cast<double>(s.whole_rbs) + s.fractional_rb);
      } else {
        for (std::int64_t r = 0; r < s.whole_rbs; ++r) cap += s.rb_bits(uniform(rng));
        if (s.fractional_rb > 0.0) cap += s.fractional_rb * s.rb_bits(uniform(rng));
      }
      capacity[f] = cap;

      double left = cap;
      while (!s.queue.empty() && left > 0.0) {
        auto& head = s.queue.front();
        if (head.remaining <= left + 1e-9 * head.remaining) {
          left = std::max(0.0, left - head.remaining);
          s.queued_bits -= head.remaining;
          if (head.stamp >= config.warmup_slots) fs.delays.add(slot + 1 - head.stamp);
          s.queue.pop_front();
        } else {
          head.remaining -= left;
          s.queued_bits -= left;
          left = 0.0;
        }
      }
      if (s.queue.empty()) s.queued_bits = 0.0;
      served[f] = cap - left;

      if (config.slot_observer) {
        config.slot_observer(SlotEvent{replication, slot, f, cap, served[f], s.queued_bits});
      }
    }

    if (!measured) continue;
    for (std::size_t sl = 0; sl < layout.slices.size(); ++sl) {
      double c = 0.0;
      double u = 0.0;
      for (auto f : layout.slices[sl].flows) {
        c += capacity[f];
        u += served[f];
      }
      const double util = c > 0.0 ? std::clamp(u / c, 0.0, 1.0) : 0.0;
      out.slices[sl].utilization.add(util);
      bucket_sum[sl] += util;
    }
    if (++bucket_fill == bucket_slots) {
      for (std::size_t sl = 0; sl < layout.slices.size(); ++sl) {
        out.slices[sl].series.push_back(bucket_sum[sl] / static_cast<double>(bucket_fill));
        bucket_sum[sl] = 0.0;
      }
      bucket_fill = 0;
    }
  }
  if (bucket_fill > 0) {
    for (std::size_t sl = 0; sl < layout.slices.size(); ++sl) {
      out.slices[sl].series.push_back(bucket_sum[sl] / static_cast<double>(bucket_fill));
    }
  }

  for (std::size_t f = 0; f < flows.size(); ++f) {
    auto& fs = out.flows[f];
    fs.samples = fs.delays.total();
    const auto above = fs.delays.count_above(flows[f].delay_target(), t_slot);
    fs.violation_at_target =
        fs.samples ? static_cast<double>(above) / static_cast<double>(fs.samples) : 0.0;
    fs.target_interval = wilson_interval(above, fs.samples);
  }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (duration_slots < 0 || warmup_slots < 0 || (duration_slots > 0 && warmup_slots >= duration_slots)) {
    throw Error(ErrorCode::InvalidArgument, "simulation needs duration > warmup >= 0");
  }
  if (replications < 1) throw Error(ErrorCode::InvalidArgument, "replications must be >= 1");
  if (!(traffic_scale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "traffic_scale must be >= 0");
}

void DelayHistogram::add(std::int64_t slots, std::uint64_t count) {
  if (slots < 0) throw Error(ErrorCode::InvalidArgument, "negative delay");
  const auto idx = static_cast<std::size_t>(slots);
  if (counts_.size() <= idx) counts_.resize(idx + 1, 0);
  counts_[idx] += count;
  total_ += count;
}

void DelayHistogram::merge(const DelayHistogram& other) {
  if (counts_.size() < other.counts_.size()) counts_.resize(other.counts_.size(), 0);
  for (std::size_t i = 0; i < other.counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

std::uint64_t DelayHistogram::count_above(double seconds, double t_slot) const {
  std::uint64_t n = 0;
  for (std::size_t d = 0; d < counts_.size(); ++d) {
    // Relative slack keeps exact multiples of t_slot on the "not above" side.
    if (static_cast<double>(d) * t_slot > seconds * (1.0 + 1e-12)) n += counts_[d];
  }
  return n;
}

std::int64_t DelayHistogram::quantile_slots(double q) const {
  if (total_ == 0) return 0;
  const double target = q * static_cast<double>(total_);
  std::uint64_t acc = 0;
  for (std::size_t d = 0; d < counts_.size(); ++d) {
    acc += counts_[d];
    if (static_cast<double>(acc) >= target && acc > 0) return static_cast<std::int64_t>(d);
  }
  return static_cast<std::int64_t>(counts_.size()) - 1;
}

double DelayHistogram::mean_slots() const {
  if (total_ == 0) return 0.0;
  double s = 0.0;
  for (std::size_t d = 0; d < counts_.size(); ++d) s += static_cast<double>(d) * static_cast<double>(counts_[d]);
  return s / static_cast<double>(total_);
}

UtilizationHistogram::UtilizationHistogram() : bins_(kBins + 1, 0) {}

void UtilizationHistogram::add(double u) {
  u = std::clamp(u, 0.0, 1.0);
  // Bin 0 holds exact zeros; bin i >= 1 holds ((i-1)/K, i/K].
  const auto bin = u == 0.0 ? 0 : std::max(1, static_cast<int>(std::ceil(u * kBins)));
  ++bins_[static_cast<std::size_t>(std::min(bin, kBins))];
  ++total_;
  sum_ += u;
}

void UtilizationHistogram::merge(const UtilizationHistogram& other) {
  for (std::size_t i = 0; i < bins_.size(); ++i) bins_[i] += other.bins_[i];
  total_ += other.total_;
  sum_ += other.sum_;
}

double UtilizationHistogram::quantile(double q) const {
  if (total_ == 0) return 0.0;
  const double target = q * static_cast<double>(total_);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    acc += bins_[i];
    if (acc > 0 && static_cast<double>(acc) >= target) return static_cast<double>(i) / kBins;
  }
  return 1.0;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) w.lower = 0.0;
  if (successes == trials) w.upper = 1.0;
  return w;
}

const FlowSimStats& SimStats::flow(const std::string& flow_id) const {
  for (const auto& f : flows) {
    if (f.flow_id == flow_id) return f;
  }
  throw Error(ErrorCode::UnknownFlow, "no simulation statistics for flow " + flow_id);
}

double SimStats::mean_p95_utilization() const {
  if (slices.empty()) return 0.0;
  double s = 0.0;
  for (const auto& sl : slices) s += sl.p95();
  return s / static_cast<double>(slices.size());
}

SimStats simulate(const Scenario& scenario, const SliceLayout& layout,
                  const Allocation& allocation, const SimConfig& config) {
  config.validate();
  check_partition(layout, scenario.flows().size());
  const auto shares = per_flow_rbs(layout, allocation.per_slice, scenario.flows().size());

  const std::int64_t measured = std::max<std::int64_t>(0, config.duration_slots - config.warmup_slots);
  const std::int64_t bucket = std::max<std::int64_t>(1, (measured + 999) / 1000);

  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<ReplicationStats> results(reps);
  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r) {
      results[r] = run_replication(scenario, layout, shares, config, r, bucket);
    }
  } else {
    for (std::size_t base = 0; base < reps; base += workers) {
      std::vector<std::future<ReplicationStats>> batch;
      for (std::size_t r = base; r < std::min(reps, base + workers); ++r) {
        batch.push_back(std::async(std::launch::async, [&, r] {
          return run_replication(scenario, layout, shares, config, r, bucket);
        }));
      }
      for (std::size_t i = 0; i < batch.size(); ++i) results[base + i] = batch[i].get();
    }
  }

  SimStats stats;
  stats.t_slot = scenario.numerology().t_slot;
  stats.bucket_slots = bucket;
  stats.flows.resize(scenario.flows().size());
  stats.slices.resize(layout.slices.size());
  for (std::size_t f = 0; f < stats.flows.size(); ++f) stats.flows[f].flow_id = scenario.flows()[f].id();
  for (std::size_t s = 0; s < stats.slices.size(); ++s) stats.slices[s].slice_id = layout.slices[s].id;

  // Merge in replication order.
  for (const auto& rep : results) {
    for (std::size_t f = 0; f < stats.flows.size(); ++f) {
      stats.flows[f].delays.merge(rep.flows[f].delays);
      stats.flows[f].offered_bits += rep.flows[f].offered_bits;
    }
    for (std::size_t s = 0; s < stats.slices.size(); ++s) {
      auto& dst = stats.slices[s];
      dst.utilization.merge(rep.slices[s].utilization);
      const auto& src = rep.slices[s].series;
      if (dst.series.size() < src.size()) dst.series.resize(src.size(), 0.0);
      for (std::size_t b = 0; b < src.size(); ++b) dst.series[b] += src[b] / static_cast<double>(reps);
    }
  }
  for (std::size_t f = 0; f < stats.flows.size(); ++f) {
    auto& fs = stats.flows[f];
    fs.samples = fs.delays.total();
    const auto above = fs.delays.count_above(scenario.flows()[f].delay_target(), stats.t_slot);
    fs.violation_at_target =
        fs.samples ? static_cast<double>(above) / static_cast<double>(fs.samples) : 0.0;
    fs.target_interval = wilson_interval(above, fs.samples);
  }
  stats.replications = std::move(results);
  return stats;
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Holds: return "HOLDS";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

BoundCheck check_bound(const SimStats& stats, const std::string& flow_id, double w_bound,
                       double epsilon, double margin) {
  const auto& fs = stats.flow(flow_id);
  BoundCheck check;
  check.samples = fs.samples;
  check.violations = fs.delays.count_above(w_bound, stats.t_slot);
  check.empirical = check.samples ? static_cast<double>(check.violations) / static_cast<double>(check.samples) : 0.0;
  check.interval = wilson_interval(check.violations, check.samples);
  if (check.samples == 0) {
    check.verdict = Verdict::Inconclusive;
  } else if (check.interval.upper <= epsilon * (1.0 + margin)) {
    check.verdict = Verdict::Holds;
  } else if (check.interval.lower > epsilon) {
    check.verdict = Verdict::Violated;
  } else {
    check.verdict = Verdict::Inconclusive;
  }
  return check;
}

}  // namespace sncslice

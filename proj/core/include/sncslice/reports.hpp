#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sncslice/planner.hpp"
#include "sncslice/simulator.hpp"

namespace sncslice {

// CSV reports. Every writer emits a fixed header row; numbers use "%.6g"
// and unstable values print as "INF", so output is byte-stable.

std::string format_number(double value);
std::string format_optional(const std::optional<double>& value);
std::string format_zeta(const Zeta& zeta);
std::string join_flow_ids(const Scenario& scenario, const Slice& slice, char sep = ';');
std::string_view to_string(PlanStatus status) noexcept;

/// slice,flows,rbs (+ TOTAL row)
void write_alloc_csv(std::ostream& out, const Scenario& scenario, const SliceLayout& layout,
                     const EvaluatedAllocation& evaluated);
/// flow,slice,n_rb,w_s,w_obj_s,w_norm,theta,delta,meets_target
void write_delays_csv(std::ostream& out, const Scenario& scenario, const SliceLayout& layout,
                      const EvaluatedAllocation& evaluated);
/// status,phase_a,phase_b,total_iterations,zeta,total_rb,evaluations,wall_ms
/// (wall_ms is the only non-deterministic column)
void write_trace_csv(std::ostream& out, const PlanResult& result);
/// step,phase,donor,receiver,zeta
void write_moves_csv(std::ostream& out, const SliceLayout& layout, const PlannerTrace& trace);

struct FlowValidation {
  std::string flow_id;
  double w_planned = 0.0;
  double w_target = 0.0;
  double epsilon = 0.0;
  BoundCheck planned;
  BoundCheck target;
};

/// flow,samples,w_planned_s,epsilon,violation_planned,wilson_lo,wilson_hi,verdict,
/// w_obj_s,violation_target,target_verdict,p50_s,p99_s,max_s
void write_validation_csv(std::ostream& out, const SimStats& stats,
                          const std::vector<FlowValidation>& rows);
/// slice,flows,p95_utilization,mean_utilization (+ MEAN row over slices)
void write_utilization_csv(std::ostream& out, const Scenario& scenario, const SliceLayout& layout,
                           const SimStats& stats);
/// flow,delay_slots,delay_s,count
void write_delay_histograms_csv(std::ostream& out, const SimStats& stats);
/// slice,bucket,start_slot,mean_utilization
void write_utilization_series_csv(std::ostream& out, const SimStats& stats);

}  // namespace sncslice

#include "sncslice/reports.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace sncslice {

namespace {

std::vector<std::size_t> slice_of_flows(const SliceLayout& layout, std::size_t n_flows) {
  std::vector<std::size_t> out(n_flows, 0);
  for (std::size_t s = 0; s < layout.slices.size(); ++s) {
    for (auto f : layout.slices[s].flows) out[f] = s;
  }
  return out;
}

std::string_view phase_name(Phase p) noexcept { return p == Phase::A ? "A" : "B"; }

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "INF" : "-INF";
  if (std::isnan(value)) return "NAN";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_number(*value) : "INF";
}

std::string format_zeta(const Zeta& zeta) { return format_number(zeta.value()); }

std::string join_flow_ids(const Scenario& scenario, const Slice& slice, char sep) {
  std::string out;
  for (std::size_t i = 0; i < slice.flows.size(); ++i) {
    if (i) out += sep;
    out += scenario.flows()[slice.flows[i]].id();
  }
  return out;
}

std::string_view to_string(PlanStatus status) noexcept {
  return status == PlanStatus::Feasible ? "FEASIBLE" : "INFEASIBLE";
}

void write_alloc_csv(std::ostream& out, const Scenario& scenario, const SliceLayout& layout,
                     const EvaluatedAllocation& evaluated) {
  out << "slice,flows,rbs\n";
  for (std::size_t s = 0; s < layout.slices.size(); ++s) {
    out << layout.slices[s].id << ',' << join_flow_ids(scenario, layout.slices[s]) << ','
        << evaluated.allocation.per_slice[s] << '\n';
  }
  out << "TOTAL,," << evaluated.allocation.total() << '\n';
}

void write_delays_csv(std::ostream& out, const Scenario& scenario, const SliceLayout& layout,
                      const EvaluatedAllocation& evaluated) {
  const auto slice_of = slice_of_flows(layout, scenario.flows().size());
  out << "flow,slice,n_rb,w_s,w_obj_s,w_norm,theta,delta,meets_target\n";
  for (std::size_t f = 0; f < scenario.flows().size(); ++f) {
    const auto& spec = scenario.flows()[f];
    const auto& d = evaluated.flows[f];
    const bool meets = d.w_seconds && *d.w_seconds <= spec.delay_target();
    out << spec.id() << ',' << layout.slices[slice_of[f]].id << ',' << format_number(d.n_rb) << ','
        << format_optional(d.w_seconds) << ',' << format_number(spec.delay_target()) << ','
        << format_optional(d.w_norm) << ',';
    if (d.w_seconds) {
      out << format_number(d.params.theta) << ',' << format_number(d.params.delta);
    } else {
      out << ',';
    }
    out << ',' << (meets ? "true" : "false") << '\n';
  }
}

void write_trace_csv(std::ostream& out, const PlanResult& result) {
  out << "status,phase_a,phase_b,total_iterations,zeta,total_rb,evaluations,wall_ms\n";
  const auto& t = result.trace;
  out << to_string(result.status) << ',' << t.phase_a_iterations << ',' << t.phase_b_iterations
      << ',' << t.phase_a_iterations + t.phase_b_iterations << ','
      << format_zeta(result.evaluated.zeta) << ',' << result.evaluated.allocation.total() << ','
      << t.evaluations << ',' << format_number(result.wall_time.count()) << '\n';
}

void write_moves_csv(std::ostream& out, const SliceLayout& layout, const PlannerTrace& trace) {
  out << "step,phase,donor,receiver,zeta\n";
  for (std::size_t i = 0; i < trace.moves.size(); ++i) {
    const auto& m = trace.moves[i];
    out << i + 1 << ',' << phase_name(m.phase) << ',' << layout.slices[m.donor].id << ','
        << (m.receiver ? layout.slices[*m.receiver].id : std::string()) << ',';
    if (i + 1 < trace.zeta_history.size()) out << format_zeta(trace.zeta_history[i + 1]);
    out << '\n';
  }
}

void write_validation_csv(std::ostream& out, const SimStats& stats,
                          const std::vector<FlowValidation>& rows) {
  out << "flow,samples,w_planned_s,epsilon,violation_planned,wilson_lo,wilson_hi,verdict,"
         "w_obj_s,violation_target,target_verdict,p50_s,p99_s,max_s\n";
  for (const auto& r : rows) {
    const auto& fs = stats.flow(r.flow_id);
    const double t = stats.t_slot;
    const auto q = [&](double p) {
      return fs.delays.total() ? format_number(static_cast<double>(fs.delays.quantile_slots(p)) * t)
                               : std::string();
    };
    out << r.flow_id << ',' << r.planned.samples << ',' << format_number(r.w_planned) << ','
        << format_number(r.epsilon) << ',' << format_number(r.planned.empirical) << ','
        << format_number(r.planned.interval.lower) << ',' << format_number(r.planned.interval.upper)
        << ',' << to_string(r.planned.verdict) << ',' << format_number(r.w_target) << ','
        << format_number(r.target.empirical) << ',' << to_string(r.target.verdict) << ',' << q(0.5)
        << ',' << q(0.99) << ',' << q(1.0) << '\n';
  }
}

void write_utilization_csv(std::ostream& out, const Scenario& scenario, const SliceLayout& layout,
                           const SimStats& stats) {
  out << "slice,flows,p95_utilization,mean_utilization\n";
  double mean_sum = 0.0;
  for (std::size_t s = 0; s < layout.slices.size(); ++s) {
    const auto& ss = stats.slices[s];
    mean_sum += ss.utilization.mean();
    out << layout.slices[s].id << ',' << join_flow_ids(scenario, layout.slices[s]) << ','
        << format_number(ss.p95()) << ',' << format_number(ss.utilization.mean()) << '\n';
  }
  const double n = static_cast<double>(layout.slices.empty() ? 1 : layout.slices.size());
  out << "MEAN,," << format_number(stats.mean_p95_utilization()) << ','
      << format_number(mean_sum / n) << '\n';
}

void write_delay_histograms_csv(std::ostream& out, const SimStats& stats) {
  out << "flow,delay_slots,delay_s,count\n";
  for (const auto& f : stats.flows) {
    const auto& c = f.delays.counts();
    for (std::size_t d = 0; d < c.size(); ++d) {
      if (c[d] == 0) continue;
      out << f.flow_id << ',' << d << ',' << format_number(static_cast<double>(d) * stats.t_slot)
          << ',' << c[d] << '\n';
    }
  }
}

void write_utilization_series_csv(std::ostream& out, const SimStats& stats) {
  out << "slice,bucket,start_slot,mean_utilization\n";
  for (const auto& s : stats.slices) {
    for (std::size_t b = 0; b < s.series.size(); ++b) {
      out << s.slice_id << ',' << b << ',' << static_cast<std::int64_t>(b) * stats.bucket_slots
          << ',' << format_number(s.series[b]) << '\n';
    }
  }
}

}  // namespace sncslice

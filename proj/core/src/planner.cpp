#include "sncslice/planner.hpp"

#include <cmath>
#include <numeric>

#include "sncslice/error.hpp"

namespace sncslice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_or_inf(const FlowDelay& d) { return d.w_norm ? *d.w_norm : kInf; }

}  // namespace

int Allocation::total() const noexcept {
  return std::accumulate(per_slice.begin(), per_slice.end(), 0);
}

bool better(const Zeta& a, const Zeta& b) noexcept {
  if (a.infeasible_flows != b.infeasible_flows) return a.infeasible_flows < b.infeasible_flows;
  return a.worst_finite < b.worst_finite;
}

bool strictly_improves(const Zeta& a, const Zeta& b, double rel_tol) noexcept {
  if (a.infeasible_flows != b.infeasible_flows) return a.infeasible_flows < b.infeasible_flows;
  return a.worst_finite < b.worst_finite - rel_tol * std::abs(b.worst_finite);
}

Zeta compute_zeta(const std::vector<FlowDelay>& flows) {
  Zeta z;
  for (const auto& d : flows) {
    if (!d.w_norm) {
      ++z.infeasible_flows;
    } else {
      z.worst_finite = std::max(z.worst_finite, *d.w_norm);
    }
  }
  return z;
}

Planner::Planner(const Scenario& scenario, const SliceLayout& layout, PlannerOptions options)
    : scenario_(scenario), layout_(layout), options_(std::move(options)) {
  check_partition(layout_, scenario_.flows().size());
  slice_of_flow_.assign(scenario_.flows().size(), 0);
  for (std::size_t s = 0; s < layout_.slices.size(); ++s) {
    for (auto f : layout_.slices[s].flows) slice_of_flow_[f] = s;
  }
}

void Planner::check_allocation(const Allocation& allocation) const {
  if (allocation.per_slice.size() != layout_.slices.size()) {
    throw Error(ErrorCode::MissingSlice, "allocation does not cover every slice");
  }
  for (std::size_t s = 0; s < allocation.per_slice.size(); ++s) {
    if (allocation.per_slice[s] < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "slice " + layout_.slices[s].id + " needs at least one RB");
    }
  }
  if (allocation.total() > scenario_.n_cell_rb()) {
    throw Error(ErrorCode::InvalidArgument, "allocation exceeds the cell RB budget");
  }
}

EvaluatedAllocation Planner::evaluate(const Allocation& allocation) {
  check_allocation(allocation);
  EvaluatedAllocation out;
  out.allocation = allocation;
  out.flows.resize(scenario_.flows().size());
  for (std::size_t s = 0; s < layout_.slices.size(); ++s) {
    const auto& slice = layout_.slices[s];
    const int slice_rbs = allocation.per_slice[s];
    for (auto f : slice.flows) {
      const auto key = std::make_tuple(f, slice_rbs, slice.flows.size());
      auto it = options_.memoize ? memo_.find(key) : memo_.end();
      if (it == memo_.end()) {
        const auto& flow = scenario_.flows()[f];
        FlowDelay d;
        d.n_rb = static_cast<double>(slice_rbs) / static_cast<double>(slice.flows.size());
        const ServiceModel service(scenario_.ue_of(f).mcs, scenario_.mcs_table(), d.n_rb,
                                   scenario_.numerology());
        const auto result = optimize_delay_bound(flow, service, options_.optimizer);
        ++optimizer_calls_;
        if (result.bound) {
          d.w_seconds = result.bound->w_seconds;
          d.w_norm = result.bound->w_seconds / flow.delay_target();
          d.params = result.bound->params;
        }
        if (!options_.memoize) {
          out.flows[f] = d;
          continue;
        }
        it = memo_.emplace(key, d).first;
      }
      out.flows[f] = it->second;
    }
  }
  out.zeta = compute_zeta(out.flows);
  return out;
}

Allocation Planner::equal_split() const {
  const int n = scenario_.n_cell_rb();
  const int slices = static_cast<int>(layout_.slices.size());
  if (n < slices) {
    throw Error(ErrorCode::CellTooSmall, std::to_string(n) + " RBs cannot serve " +
                                             std::to_string(slices) + " slices");
  }
  Allocation a;
  a.per_slice.assign(static_cast<std::size_t>(slices), n / slices);
  for (int i = 0; i < n % slices; ++i) ++a.per_slice[static_cast<std::size_t>(i)];
  return a;
}

std::size_t Planner::worst_flow(const EvaluatedAllocation& e) const {
  std::size_t worst = 0;
  for (std::size_t f = 1; f < e.flows.size(); ++f) {
    if (norm_or_inf(e.flows[f]) > norm_or_inf(e.flows[worst])) worst = f;
  }
  return worst;
}

std::optional<std::size_t> Planner::best_flow(const EvaluatedAllocation& e,
                                              std::size_t excluded_slice) const {
  std::optional<std::size_t> best;
  for (std::size_t f = 0; f < e.flows.size(); ++f) {
    if (slice_of_flow_[f] == excluded_slice) continue;
    if (!best || norm_or_inf(e.flows[f]) < norm_or_inf(e.flows[*best])) best = f;
  }
  return best;
}

std::pair<EvaluatedAllocation, PlannerTrace> Planner::phase_a() { return phase_a(equal_split()); }

std::pair<EvaluatedAllocation, PlannerTrace> Planner::phase_a(const Allocation& start) {
  PlannerTrace trace;
  EvaluatedAllocation current = evaluate(start);
  ++trace.evaluations;
  trace.zeta_history.push_back(current.zeta);

  const int cap = scenario_.n_cell_rb();
  while (trace.phase_a_iterations < cap) {
    ++trace.phase_a_iterations;
    const auto worst = worst_flow(current);
    const auto receiver = slice_of_flow_[worst];
    const auto best = best_flow(current, receiver);
    if (!best) break;
    const auto donor = slice_of_flow_[*best];
    if (current.allocation.per_slice[donor] <= 1) break;

    Allocation candidate = current.allocation;
    --candidate.per_slice[donor];
    ++candidate.per_slice[receiver];
    EvaluatedAllocation next = evaluate(candidate);
    ++trace.evaluations;
    if (!strictly_improves(next.zeta, current.zeta, options_.phase_a_rel_tol)) break;

    current = std::move(next);
    trace.moves.push_back({Phase::A, donor, receiver});
    trace.zeta_history.push_back(current.zeta);
  }
  return {std::move(current), std::move(trace)};
}

std::pair<EvaluatedAllocation, PlannerTrace> Planner::phase_b(const Allocation& feasible) {
  PlannerTrace trace;
  EvaluatedAllocation current = evaluate(feasible);
  ++trace.evaluations;
  if (!current.zeta.meets_targets()) {
    throw Error(ErrorCode::PreconditionInfeasible, "phase B needs an allocation with zeta <= 1");
  }
  trace.zeta_history.push_back(current.zeta);

  for (;;) {
    ++trace.phase_b_iterations;
    std::optional<EvaluatedAllocation> chosen;
    std::size_t chosen_slice = 0;
    for (std::size_t s = 0; s < layout_.slices.size(); ++s) {
      if (current.allocation.per_slice[s] <= 1) continue;
      Allocation candidate = current.allocation;
      --candidate.per_slice[s];
      EvaluatedAllocation next = evaluate(candidate);
      ++trace.evaluations;
      if (!next.zeta.meets_targets()) continue;
      // Largest zeta wins; strict comparison keeps the lowest slice on ties.
      if (!chosen || next.zeta.worst_finite > chosen->zeta.worst_finite) {
        chosen = std::move(next);
        chosen_slice = s;
      }
    }
    if (!chosen) break;
    current = std::move(*chosen);
    trace.moves.push_back({Phase::B, chosen_slice, std::nullopt});
    trace.zeta_history.push_back(current.zeta);
  }
  return {std::move(current), std::move(trace)};
}

PlanResult Planner::plan() {
  const auto started = std::chrono::steady_clock::now();
  PlanResult result;
  auto [after_a, trace_a] = phase_a();
  result.trace = std::move(trace_a);
  if (after_a.zeta.meets_targets()) {
    auto [after_b, trace_b] = phase_b(after_a.allocation);
    result.trace.phase_b_iterations = trace_b.phase_b_iterations;
    result.trace.evaluations += trace_b.evaluations;
    result.trace.moves.insert(result.trace.moves.end(), trace_b.moves.begin(), trace_b.moves.end());
    result.trace.zeta_history.insert(result.trace.zeta_history.end(),
                                     trace_b.zeta_history.begin() + 1, trace_b.zeta_history.end());
    result.status = PlanStatus::Feasible;
    result.evaluated = std::move(after_b);
  } else {
    result.status = PlanStatus::Infeasible;
    result.evaluated = std::move(after_a);
  }
  result.wall_time = std::chrono::steady_clock::now() - started;
  return result;
}

EvaluatedAllocation evaluate(const Scenario& scenario, const SliceLayout& layout,
                             const Allocation& allocation, const PlannerOptions& options) {
  return Planner(scenario, layout, options).evaluate(allocation);
}

std::pair<EvaluatedAllocation, PlannerTrace> phase_a(const Scenario& scenario,
                                                     const SliceLayout& layout,
                                                     const PlannerOptions& options) {
  return Planner(scenario, layout, options).phase_a();
}

std::pair<EvaluatedAllocation, PlannerTrace> phase_b(const Scenario& scenario,
                                                     const SliceLayout& layout,
                                                     const Allocation& feasible,
                                                     const PlannerOptions& options) {
  return Planner(scenario, layout, options).phase_b(feasible);
}

PlanResult plan(const Scenario& scenario, const SliceLayout& layout,
                const PlannerOptions& options) {
  return Planner(scenario, layout, options).plan();
}

}  // namespace sncslice

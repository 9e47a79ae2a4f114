#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "sncslice/snc.hpp"
#include "sncslice/topology.hpp"

namespace sncslice {

/// Integer RBs per slice, aligned with SliceLayout::slices.
struct Allocation {
  std::vector<int> per_slice;

  int total() const noexcept;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Worst normalized delay bound across flows. Allocations with unstable
/// flows compare worse than any finite value; among those, fewer unstable
/// flows is better, then the larger finite bound decides.
struct Zeta {
  std::size_t infeasible_flows = 0;
  double worst_finite = 0.0;

  bool feasible() const noexcept { return infeasible_flows == 0; }
  bool meets_targets() const noexcept { return feasible() && worst_finite <= 1.0; }
  double value() const noexcept {
    return feasible() ? worst_finite : std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const Zeta&, const Zeta&) = default;
};

/// Strict order used by both phases.
bool better(const Zeta& a, const Zeta& b) noexcept;
/// a improves on b by more than `rel_tol` relative (or in feasibility class).
bool strictly_improves(const Zeta& a, const Zeta& b, double rel_tol) noexcept;

struct FlowDelay {
  double n_rb = 0.0;
  std::optional<double> w_seconds;  // empty: unstable
  std::optional<double> w_norm;
  SncParams params;
};

struct EvaluatedAllocation {
  Allocation allocation;
  std::vector<FlowDelay> flows;
  Zeta zeta;
};

Zeta compute_zeta(const std::vector<FlowDelay>& flows);

enum class Phase { A, B };

struct PlannerMove {
  Phase phase = Phase::A;
  std::size_t donor = 0;
  std::optional<std::size_t> receiver;  // empty: RB removed (Phase B)
};

struct PlannerTrace {
  int phase_a_iterations = 0;
  int phase_b_iterations = 0;
  // zeta_history[0] is the initial state of the phase(s) traced; entry i + 1
  // follows moves[i].
  std::vector<Zeta> zeta_history;
  std::vector<PlannerMove> moves;
  std::size_t evaluations = 0;
};

enum class PlanStatus { Feasible, Infeasible };

struct PlanResult {
  PlanStatus status = PlanStatus::Infeasible;
  EvaluatedAllocation evaluated;
  PlannerTrace trace;
  std::chrono::duration<double, std::milli> wall_time{0};
};

struct PlannerOptions {
  OptimizerOptions optimizer;
  double phase_a_rel_tol = 1e-12;
  // Reuse bounds for repeated (flow, slice RBs, slice size) keys. Off by
  // default: every evaluation then recomputes all per-flow bounds.
  bool memoize = false;
};

/// Two-phase slice RB planner. With `PlannerOptions::memoize` it keeps
/// per-flow delay bounds keyed by (flow, slice RBs, slice size); results are
/// identical with or without the memo.
class Planner {
 public:
  Planner(const Scenario& scenario, const SliceLayout& layout, PlannerOptions options = {});

  const Scenario& scenario() const noexcept { return scenario_; }
  const SliceLayout& layout() const noexcept { return layout_; }

  EvaluatedAllocation evaluate(const Allocation& allocation);

  /// ⌊N/|S|⌋ per slice, remainder to the earliest slices.
  Allocation equal_split() const;

  std::pair<EvaluatedAllocation, PlannerTrace> phase_a();
  std::pair<EvaluatedAllocation, PlannerTrace> phase_a(const Allocation& start);
  std::pair<EvaluatedAllocation, PlannerTrace> phase_b(const Allocation& feasible);

  PlanResult plan();

  std::size_t optimizer_calls() const noexcept { return optimizer_calls_; }

 private:
  // Worst flow (max W_norm, unstable counts as +inf, lowest index on ties).
  std::size_t worst_flow(const EvaluatedAllocation& e) const;
  // Best flow outside `excluded_slice`, or none.
  std::optional<std::size_t> best_flow(const EvaluatedAllocation& e, std::size_t excluded_slice) const;

  void check_allocation(const Allocation& allocation) const;

  const Scenario& scenario_;
  SliceLayout layout_;
  PlannerOptions options_;
  std::vector<std::size_t> slice_of_flow_;
  std::map<std::tuple<std::size_t, int, std::size_t>, FlowDelay> memo_;
  std::size_t optimizer_calls_ = 0;
};

EvaluatedAllocation evaluate(const Scenario& scenario, const SliceLayout& layout,
                             const Allocation& allocation, const PlannerOptions& options = {});
std::pair<EvaluatedAllocation, PlannerTrace> phase_a(const Scenario& scenario,
                                                     const SliceLayout& layout,
                                                     const PlannerOptions& options = {});
std::pair<EvaluatedAllocation, PlannerTrace> phase_b(const Scenario& scenario,
                                                     const SliceLayout& layout,
                                                     const Allocation& feasible,
                                                     const PlannerOptions& options = {});
PlanResult plan(const Scenario& scenario, const SliceLayout& layout,
                const PlannerOptions& options = {});

}  // namespace sncslice

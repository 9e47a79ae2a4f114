#include "sncslice_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sncslice/error.hpp"
#include "sncslice/reports.hpp"
#include "sncslice/scenario_io.hpp"
#include "sncslice/simulator.hpp"

namespace sncslice::cli {

namespace {

constexpr double kValidateEpsilon = 1e-2;

struct ReferenceFlow {
  double lambda;
  double target;
};

constexpr ReferenceFlow kReferenceFlows[] = {
    {2000, 0.5e-3}, {3000, 0.5e-3}, {1500, 1.0e-3}, {5000, 0.5e-3}, {6600, 0.5e-3},
    {4500, 1.0e-3}, {9000, 0.2e-3}, {11000, 0.2e-3}, {8000, 0.5e-3},
};

std::ofstream open_report(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
  return out;
}

template <typename Fn>
void write_report(const std::filesystem::path& dir, const std::string& name, Fn&& fn) {
  auto out = open_report(dir, name);
  fn(out);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + (dir / name).string());
}

void print_summary(std::ostream& log, const Scenario& scenario, const SliceLayout& layout,
                   const PlanResult& r) {
  log << to_string(layout.option) << " @ " << scenario.n_cell_rb() << " RB: " << to_string(r.status)
      << " zeta=" << format_zeta(r.evaluated.zeta) << " total_rb=" << r.evaluated.allocation.total()
      << " phase_a=" << r.trace.phase_a_iterations << " phase_b=" << r.trace.phase_b_iterations
      << '\n';
  for (std::size_t s = 0; s < layout.slices.size(); ++s) {
    log << "  " << layout.slices[s].id << " [" << join_flow_ids(scenario, layout.slices[s], ' ')
        << "] " << r.evaluated.allocation.per_slice[s] << '\n';
  }
}

PlannerOptions planner_options(bool memo) {
  PlannerOptions o;
  o.memoize = memo;
  return o;
}

}  // namespace

Scenario load_with_overrides(const CommonArgs& args, std::optional<int> rb) {
  Scenario s = load_scenario(args.scenario);
  if (args.mcs) s = s.with_mcs_table(load_mcs_table(*args.mcs));
  if (args.epsilon) s = s.with_epsilon(*args.epsilon);
  if (rb) s = s.with_n_cell_rb(*rb);
  return s;
}

int cmd_plan(const PlanArgs& args, std::ostream& log) {
  const Scenario scenario = load_with_overrides(args, args.rb);
  const SliceLayout layout = build_layout(scenario, parse_option(args.option));
  Planner planner(scenario, layout, planner_options(args.memo));
  const PlanResult r = planner.plan();
  write_report(args.out, "alloc.csv",
               [&](std::ostream& o) { write_alloc_csv(o, scenario, layout, r.evaluated); });
  write_report(args.out, "delays.csv",
               [&](std::ostream& o) { write_delays_csv(o, scenario, layout, r.evaluated); });
  write_report(args.out, "trace.csv", [&](std::ostream& o) { write_trace_csv(o, r); });
  write_report(args.out, "moves.csv", [&](std::ostream& o) { write_moves_csv(o, layout, r.trace); });
  print_summary(log, scenario, layout, r);
  return r.status == PlanStatus::Feasible ? kExitOk : kExitInfeasible;
}

int cmd_validate(const ValidateArgs& args, std::ostream& log) {
  CommonArgs common = args;
  if (!common.epsilon) {
    std::cerr << "warning: validating with epsilon = " << kValidateEpsilon
              << " for every flow (pass --epsilon to override)\n";
    common.epsilon = kValidateEpsilon;
  }
  const Scenario scenario = load_with_overrides(common, args.rb);
  const SliceLayout layout = build_layout(scenario, parse_option(args.option));
  Planner planner(scenario, layout, planner_options(args.memo));
  const PlanResult r = planner.plan();
  write_report(args.out, "alloc.csv",
               [&](std::ostream& o) { write_alloc_csv(o, scenario, layout, r.evaluated); });
  write_report(args.out, "delays.csv",
               [&](std::ostream& o) { write_delays_csv(o, scenario, layout, r.evaluated); });
  print_summary(log, scenario, layout, r);
  if (r.status != PlanStatus::Feasible && !args.force) {
    log << "plan is infeasible; use --force to simulate it anyway\n";
    return kExitInfeasible;
  }

  SimConfig cfg;
  cfg.duration_slots = args.slots;
  cfg.warmup_slots = args.slots > 0 ? args.warmup : 0;
  cfg.seed = args.seed;
  cfg.replications = args.replications;
  cfg.workers = args.workers;
  const SimStats stats = simulate(scenario, layout, r.evaluated.allocation, cfg);

  std::vector<FlowValidation> rows;
  bool violated = false;
  for (std::size_t f = 0; f < scenario.flows().size(); ++f) {
    const auto& spec = scenario.flows()[f];
    FlowValidation v;
    v.flow_id = spec.id();
    v.w_planned = r.evaluated.flows[f].w_seconds.value_or(std::numeric_limits<double>::infinity());
    v.w_target = spec.delay_target();
    v.epsilon = spec.violation_budget();
    v.planned = check_bound(stats, spec.id(), v.w_planned, v.epsilon);
    v.target = check_bound(stats, spec.id(), v.w_target, v.epsilon);
    violated = violated || v.planned.verdict == Verdict::Violated ||
               v.target.verdict == Verdict::Violated;
    log << "  " << spec.id() << ": " << to_string(v.planned.verdict) << " at W="
        << format_number(v.w_planned) << " (" << v.planned.violations << '/' << v.planned.samples
        << "), " << to_string(v.target.verdict) << " at W_obj\n";
    rows.push_back(std::move(v));
  }
  write_report(args.out, "validation.csv",
               [&](std::ostream& o) { write_validation_csv(o, stats, rows); });
  write_report(args.out, "utilization.csv",
               [&](std::ostream& o) { write_utilization_csv(o, scenario, layout, stats); });
  write_report(args.out, "delay_histograms.csv",
               [&](std::ostream& o) { write_delay_histograms_csv(o, stats); });
  write_report(args.out, "utilization_series.csv",
               [&](std::ostream& o) { write_utilization_series_csv(o, stats); });
  return violated ? kExitViolated : kExitOk;
}

std::vector<SweepRow> run_sweep(const Scenario& base, const std::vector<int>& rbs,
                                const PlannerOptions& options) {
  constexpr DeploymentOption kOptions[] = {DeploymentOption::DO0, DeploymentOption::DO1,
                                           DeploymentOption::DO2, DeploymentOption::DO3,
                                           DeploymentOption::DO4};
  std::vector<SweepRow> rows;
  for (const auto option : kOptions) {
    for (const int rb : rbs) {
      const Scenario scenario = base.with_n_cell_rb(rb);
      SweepRow row;
      row.option = option;
      row.rb = rb;
      row.layout = build_layout(scenario, option);
      try {
        row.result = plan(scenario, row.layout, options);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CellTooSmall) throw;
        row.error = std::string(to_string(e.code()));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep(const std::filesystem::path& dir, const Scenario& scenario,
                 const std::vector<SweepRow>& rows) {
  write_report(dir, "sweep_alloc.csv", [&](std::ostream& o) {
    o << "option,rb,slice,flows,rbs\n";
    for (const auto& row : rows) {
      if (!row.result) continue;
      for (std::size_t s = 0; s < row.layout.slices.size(); ++s) {
        o << to_string(row.option) << ',' << row.rb << ',' << row.layout.slices[s].id << ','
          << join_flow_ids(scenario, row.layout.slices[s]) << ','
          << row.result->evaluated.allocation.per_slice[s] << '\n';
      }
    }
  });
  write_report(dir, "sweep_delays.csv", [&](std::ostream& o) {
    o << "option,rb,flow,slice,n_rb,w_s,w_norm,meets_target\n";
    for (const auto& row : rows) {
      if (!row.result) continue;
      for (std::size_t s = 0; s < row.layout.slices.size(); ++s) {
        for (const auto f : row.layout.slices[s].flows) {
          const auto& d = row.result->evaluated.flows[f];
          const auto& spec = scenario.flows()[f];
          const bool meets = d.w_seconds && *d.w_seconds <= spec.delay_target();
          o << to_string(row.option) << ',' << row.rb << ',' << spec.id() << ','
            << row.layout.slices[s].id << ',' << format_number(d.n_rb) << ','
            << format_optional(d.w_seconds) << ',' << format_optional(d.w_norm) << ','
            << (meets ? "true" : "false") << '\n';
        }
      }
    }
  });
  write_report(dir, "sweep_trace.csv", [&](std::ostream& o) {
    o << "option,rb,status,phase_a,phase_b,total_iterations,zeta,total_rb,evaluations,wall_ms\n";
    for (const auto& row : rows) {
      o << to_string(row.option) << ',' << row.rb << ',';
      if (!row.result) {
        o << row.error << ",,,,,,,\n";
        continue;
      }
      const auto& r = *row.result;
      o << to_string(r.status) << ',' << r.trace.phase_a_iterations << ','
        << r.trace.phase_b_iterations << ','
        << r.trace.phase_a_iterations + r.trace.phase_b_iterations << ','
        << format_zeta(r.evaluated.zeta) << ',' << r.evaluated.allocation.total() << ','
        << r.trace.evaluations << ',' << format_number(r.wall_time.count()) << '\n';
    }
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& log) {
  const Scenario scenario = load_with_overrides(args, std::nullopt);
  const auto rows = run_sweep(scenario, args.rbs, planner_options(args.memo));
  write_sweep(args.out, scenario, rows);
  log << std::left << std::setw(8) << "option" << std::setw(6) << "rb" << std::setw(16) << "status"
      << std::setw(12) << "zeta" << std::setw(10) << "total_rb" << "slices\n";
  for (const auto& row : rows) {
    log << std::setw(8) << to_string(row.option) << std::setw(6) << row.rb;
    if (!row.result) {
      log << row.error << '\n';
      continue;
    }
    const auto& r = *row.result;
    log << std::setw(16) << to_string(r.status) << std::setw(12) << format_zeta(r.evaluated.zeta)
        << std::setw(10) << r.evaluated.allocation.total();
    for (std::size_t s = 0; s < row.layout.slices.size(); ++s) {
      log << (s ? " " : "") << row.layout.slices[s].id << '=' << r.evaluated.allocation.per_slice[s];
    }
    log << '\n';
  }
  return kExitOk;
}

Scenario generate_scale_scenario(int lines, int flows, int n_cell_rb) {
  if (lines < 1 || flows < lines) {
    throw Error(ErrorCode::InvalidDimensions, "scale needs flows >= lines >= 1 (got lines=" +
                                                  std::to_string(lines) +
                                                  ", flows=" + std::to_string(flows) + ")");
  }
  std::vector<UeSite> sites;
  for (int l = 0; l < lines; ++l) {
    const double d = lines == 1 ? 80.0 : 80.0 + (350.0 - 80.0) * l / (lines - 1);
    sites.push_back({"line" + std::to_string(l + 1), d});
  }
  std::vector<FlowSpec> specs;
  const auto n_ref = std::size(kReferenceFlows);
  for (int f = 0; f < flows; ++f) {
    const auto line = static_cast<std::size_t>(static_cast<std::int64_t>(f) * lines / flows);
    const auto& ref = kReferenceFlows[static_cast<std::size_t>(f) % n_ref];
    specs.emplace_back("f" + std::to_string(f + 1), sites[line].id, ref.lambda,
                       PacketSizePmf::fixed(512), ref.target, 1e-5);
  }
  return Scenario(std::move(sites), std::move(specs), n_cell_rb, Numerology{}, CellRadio{},
                  McsTable::standard_cqi());
}

ScaleRow run_scale(int lines, int flows, int n_cell_rb, const PlannerOptions& options) {
  const Scenario scenario = generate_scale_scenario(lines, flows, n_cell_rb);
  const SliceLayout layout = build_layout(scenario, DeploymentOption::DO2);
  return {flows, lines, plan(scenario, layout, options)};
}

void write_scale_csv(std::ostream& out, const std::vector<ScaleRow>& rows) {
  out << "flows,lines,status,phase_a,phase_b,total_iterations,zeta,total_rb,evaluations,wall_ms\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out << row.flows << ',' << row.lines << ',' << to_string(r.status) << ','
        << r.trace.phase_a_iterations << ',' << r.trace.phase_b_iterations << ','
        << r.trace.phase_a_iterations + r.trace.phase_b_iterations << ','
        << format_zeta(r.evaluated.zeta) << ',' << r.evaluated.allocation.total() << ','
        << r.trace.evaluations << ',' << format_number(r.wall_time.count()) << '\n';
  }
}

int cmd_scale(const ScaleArgs& args, std::ostream& log) {
  const Scenario scenario = generate_scale_scenario(args.lines, args.flows, args.rb);
  write_report(args.out, "scale_scenario.scn",
               [&](std::ostream& o) { write_scenario(o, scenario); });
  const SliceLayout layout = build_layout(scenario, DeploymentOption::DO2);
  std::vector<ScaleRow> rows{
      {args.flows, args.lines, plan(scenario, layout, planner_options(args.memo))}};
  write_report(args.out, "scale.csv", [&](std::ostream& o) { write_scale_csv(o, rows); });
  write_scale_csv(log, rows);
  return kExitOk;
}

int cmd_windows(const WindowsArgs& args, std::ostream& log) {
  const Scenario base = load_with_overrides(args, args.rb);
  const auto windows = load_windows(args.windows, base);
  const DeploymentOption option = parse_option(args.option);
  const SliceLayout header_layout = build_layout(base, option);
  std::ostringstream body;
  body << "window,status,zeta,total_rb";
  for (const auto& s : header_layout.slices) body << ',' << s.id;
  body << '\n';
  for (const auto& w : windows) {
    const Scenario scenario = apply_window(base, w);
    const SliceLayout layout = build_layout(scenario, option);
    const PlanResult r = plan(scenario, layout, planner_options(args.memo));
    body << w.index << ',' << to_string(r.status) << ',' << format_zeta(r.evaluated.zeta) << ','
         << r.evaluated.allocation.total();
    for (const int n : r.evaluated.allocation.per_slice) body << ',' << n;
    body << '\n';
  }
  write_report(args.out, "windows.csv", [&](std::ostream& o) { o << body.str(); });
  log << body.str();
  return kExitOk;
}

}  // namespace sncslice::cli

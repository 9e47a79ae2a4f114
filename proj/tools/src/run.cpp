#include <CLI11.hpp>

#include <iostream>

#include "sncslice/error.hpp"
#include "sncslice_cli/commands.hpp"

namespace sncslice::cli {

namespace {

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("scenario", a.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mcs", a.mcs, "MCS table file replacing the scenario table");
  cmd->add_option("--epsilon", a.epsilon, "Violation budget applied to every flow")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--out", a.out, "Output directory")->capture_default_str();
  cmd->add_flag("--memo", a.memo, "Reuse per-flow bounds across planner evaluations");
}

void add_plan(CLI::App* cmd, PlanArgs& a) {
  add_common(cmd, a);
  cmd->add_option("--do", a.option, "Deployment option 0..4 or custom")->capture_default_str();
  cmd->add_option("--rb", a.rb, "Cell RB budget override");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"SNC-based RAN slice planner"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  add_plan(app.add_subcommand("plan", "Plan slice RBs for one deployment option"), plan_args);

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Plan, then check the bounds by simulation");
  add_plan(validate, val);
  validate->add_flag("--force", val.force, "Simulate even when the plan is infeasible");
  validate->add_option("--seed", val.seed, "Simulation seed")->capture_default_str();
  validate->add_option("--slots", val.slots, "Simulated slots per replication")->capture_default_str();
  validate->add_option("--warmup", val.warmup, "Discarded leading slots")->capture_default_str();
  validate->add_option("--replications", val.replications, "Independent runs pooled into one result")
      ->capture_default_str();
  validate->add_option("--workers", val.workers, "0 = hardware threads")->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Plan all deployment options at each RB budget");
  add_common(sweep, sweep_args);
  sweep->add_option("--rbs", sweep_args.rbs, "RB budgets")->capture_default_str();

  ScaleArgs scale_args;
  auto* scale = app.add_subcommand("scale", "Generate and plan a synthetic scenario (DO2)");
  scale->add_option("--lines", scale_args.lines)->capture_default_str();
  scale->add_option("--flows", scale_args.flows)->capture_default_str();
  scale->add_option("--rb", scale_args.rb)->capture_default_str();
  scale->add_option("--out", scale_args.out)->capture_default_str();
  scale->add_flag("--memo", scale_args.memo, "Reuse per-flow bounds across planner evaluations");

  WindowsArgs win;
  auto* windows = app.add_subcommand("windows", "Re-plan for each planning window");
  add_plan(windows, win);
  windows->add_option("windows", win.windows, "Windows file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*app.get_subcommand("plan")) return cmd_plan(plan_args, std::cout);
    if (*validate) return cmd_validate(val, std::cout);
    if (*sweep) return cmd_sweep(sweep_args, std::cout);
    if (*scale) return cmd_scale(scale_args, std::cout);
    if (*windows) return cmd_windows(win, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace sncslice::cli

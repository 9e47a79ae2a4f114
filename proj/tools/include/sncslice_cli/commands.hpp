#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sncslice/planner.hpp"
#include "sncslice/topology.hpp"

namespace sncslice::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitViolated = 3;

struct CommonArgs {
  std::filesystem::path scenario;
  std::optional<std::filesystem::path> mcs;
  std::optional<double> epsilon;
  std::filesystem::path out = ".";
  bool memo = false;
};

struct PlanArgs : CommonArgs {
  std::string option = "2";
  std::optional<int> rb;
};

struct ValidateArgs : PlanArgs {
  bool force = false;
  std::uint64_t seed = 1;
  std::int64_t slots = 400000;
  std::int64_t warmup = 4000;
  int replications = 1;
  unsigned workers = 0;
};

struct SweepArgs : CommonArgs {
  std::vector<int> rbs = {65, 135};
};

struct ScaleArgs {
  int lines = 3;
  int flows = 9;
  int rb = 135;
  std::filesystem::path out = ".";
  bool memo = false;
};

struct WindowsArgs : PlanArgs {
  std::filesystem::path windows;
};

/// Loads the scenario and applies --mcs / --epsilon / --rb overrides.
Scenario load_with_overrides(const CommonArgs& args, std::optional<int> rb);

int cmd_plan(const PlanArgs& args, std::ostream& log);
int cmd_validate(const ValidateArgs& args, std::ostream& log);
int cmd_sweep(const SweepArgs& args, std::ostream& log);
int cmd_scale(const ScaleArgs& args, std::ostream& log);
int cmd_windows(const WindowsArgs& args, std::ostream& log);

/// Lines at distances spread evenly over [80, 350] m, flows assigned to
/// lines in contiguous blocks, (lambda, target) pairs cycled from the
/// nine-flow reference cell.
Scenario generate_scale_scenario(int lines, int flows, int n_cell_rb);

struct ScaleRow {
  int flows = 0;
  int lines = 0;
  PlanResult result;
};

ScaleRow run_scale(int lines, int flows, int n_cell_rb, const PlannerOptions& options = {});

/// flows,lines,status,phase_a,phase_b,total_iterations,zeta,total_rb,evaluations,wall_ms
void write_scale_csv(std::ostream& out, const std::vector<ScaleRow>& rows);

struct SweepRow {
  DeploymentOption option = DeploymentOption::DO0;
  int rb = 0;
  SliceLayout layout;
  std::optional<PlanResult> result;  // empty: the option could not be planned
  std::string error;
};

std::vector<SweepRow> run_sweep(const Scenario& scenario, const std::vector<int>& rbs,
                                const PlannerOptions& options = {});

/// Writes sweep_alloc.csv, sweep_delays.csv and sweep_trace.csv into `dir`.
void write_sweep(const std::filesystem::path& dir, const Scenario& scenario,
                 const std::vector<SweepRow>& rows);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace sncslice::cli

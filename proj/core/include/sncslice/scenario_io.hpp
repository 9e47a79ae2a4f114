#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sncslice/topology.hpp"

namespace sncslice {

/// Parses the YAML scenario format (schema: 1). Parse errors carry the
/// source name and line; validation errors name the offending field.
/// Relative `mcs_table: {file: ...}` paths resolve against `base_dir`.
Scenario parse_scenario(const std::string& text, const std::string& source_name = "<string>",
                        const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

void write_scenario(std::ostream& out, const Scenario& scenario);

/// MCS table text: one level per line, "snr_min_db snr_max_db eta";
/// whitespace or comma separated, '#' starts a comment, -inf/inf allowed.
McsTable parse_mcs_table(const std::string& text, const std::string& source_name = "<string>");
McsTable load_mcs_table(const std::filesystem::path& path);

struct WindowFlowStats {
  std::string flow_id;
  double lambda = 0.0;
  PacketSizePmf sizes = PacketSizePmf::fixed(1);
};

/// Traffic statistics of one planning window. Flows not listed keep their
/// scenario values; MCS PMFs never change across windows.
struct PlanningWindow {
  int index = 0;
  std::vector<WindowFlowStats> flows;
};

std::vector<PlanningWindow> parse_windows(const std::string& text, const Scenario& scenario,
                                          const std::string& source_name = "<string>");
std::vector<PlanningWindow> load_windows(const std::filesystem::path& path,
                                         const Scenario& scenario);

Scenario apply_window(const Scenario& scenario, const PlanningWindow& window);

}  // namespace sncslice

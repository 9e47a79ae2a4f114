#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sncslice/radio.hpp"
#include "sncslice/traffic.hpp"

namespace sncslice {

struct UserEquipment {
  std::string id;
  LinkProfile link;
  McsPmf mcs;
};

/// A slice as an ordered list of flow indices into Scenario::flows().
struct Slice {
  std::string id;
  std::vector<std::size_t> flows;
};

struct UeSite {
  std::string id;
  double distance_m = 0.0;
};

/// Immutable planning input: UEs with their link budget and MCS PMF, the
/// flows they carry, the cell RB budget and radio configuration.
class Scenario {
 public:
  Scenario(std::vector<UeSite> ues, std::vector<FlowSpec> flows, int n_cell_rb,
           Numerology numerology, CellRadio cell, McsTable mcs_table,
           std::vector<Slice> custom_slices = {});

  const std::vector<UserEquipment>& ues() const noexcept { return ues_; }
  const std::vector<UeSite>& sites() const noexcept { return sites_; }
  const std::vector<FlowSpec>& flows() const noexcept { return flows_; }
  int n_cell_rb() const noexcept { return n_cell_rb_; }
  const Numerology& numerology() const noexcept { return numerology_; }
  const CellRadio& cell() const noexcept { return cell_; }
  const McsTable& mcs_table() const noexcept { return mcs_table_; }
  const std::vector<Slice>& custom_slices() const noexcept { return custom_slices_; }

  std::optional<std::size_t> flow_index(std::string_view flow_id) const;
  std::size_t ue_index(std::string_view ue_id) const;
  const UserEquipment& ue_of(std::size_t flow) const;

  Scenario with_n_cell_rb(int n_cell_rb) const;
  Scenario with_epsilon(double epsilon) const;
  Scenario with_flows(std::vector<FlowSpec> flows) const;
  Scenario with_mcs_table(McsTable table) const;

 private:
  std::vector<UeSite> sites_;
  std::vector<UserEquipment> ues_;
  std::vector<FlowSpec> flows_;
  int n_cell_rb_;
  Numerology numerology_;
  CellRadio cell_;
  McsTable mcs_table_;
  std::vector<Slice> custom_slices_;
  std::vector<std::size_t> flow_ue_;
};

enum class DeploymentOption { DO0, DO1, DO2, DO3, DO4, Custom };

std::string_view to_string(DeploymentOption option) noexcept;
/// Accepts "0".."4", "DO0".."DO4", "DO-#0" style and "custom".
DeploymentOption parse_option(std::string_view text);

struct SliceLayout {
  DeploymentOption option = DeploymentOption::DO0;
  std::vector<Slice> slices;
};

/// DO0: one shared slice. DO1: one slice per UE. DO2: one slice per flow.
/// DO3: the UE(s) owning the tightest delay target each get a dedicated
/// slice, every other flow shares one slice. DO4: flows of those critical
/// UEs get one slice each, the remaining flows are grouped by equal delay
/// target (most relaxed group first). Custom: slices given by the scenario.
SliceLayout build_layout(const Scenario& scenario, DeploymentOption option);

/// Throws ValidationError unless the layout partitions all flows into
/// non-empty slices with unique ids.
void check_partition(const SliceLayout& layout, std::size_t n_flows);

/// Round-Robin split N_s / |F_s|, indexed by flow. `per_slice` is aligned
/// with layout.slices.
std::vector<double> per_flow_rbs(const SliceLayout& layout, const std::vector<int>& per_slice,
                                 std::size_t n_flows);

/// Same split keyed by ids. Throws MissingSlice when a slice has no entry.
std::map<std::string, double> per_flow_rbs(const SliceLayout& layout, const Scenario& scenario,
                                           const std::map<std::string, int>& per_slice);

}  // namespace sncslice

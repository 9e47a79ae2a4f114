#include "sncslice/topology.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <utility>

#include "sncslice/error.hpp"

namespace sncslice {

Scenario::Scenario(std::vector<UeSite> ues, std::vector<FlowSpec> flows, int n_cell_rb,
                   Numerology numerology, CellRadio cell, McsTable mcs_table,
                   std::vector<Slice> custom_slices)
    : sites_(std::move(ues)),
      flows_(std::move(flows)),
      n_cell_rb_(n_cell_rb),
      numerology_(numerology),
      cell_(std::move(cell)),
      mcs_table_(std::move(mcs_table)),
      custom_slices_(std::move(custom_slices)) {
  numerology_.validate();
  if (sites_.empty()) throw Error(ErrorCode::ValidationError, "scenario has no UEs");
  if (flows_.empty()) throw Error(ErrorCode::ValidationError, "scenario has no flows");
  if (n_cell_rb_ < 1) throw Error(ErrorCode::ValidationError, "n_cell_rb must be >= 1");

  std::set<std::string> ue_ids;
  for (const auto& site : sites_) {
    if (!ue_ids.insert(site.id).second) {
      throw Error(ErrorCode::ValidationError, "duplicate UE id " + site.id);
    }
    if (!(site.distance_m > 0.0)) {
      throw Error(ErrorCode::ValidationError, "UE " + site.id + ": distance_m must be > 0");
    }
    UserEquipment ue;
    ue.id = site.id;
    ue.link = make_link(site.id, site.distance_m, cell_, numerology_);
    ue.mcs = mcs_pmf(ue.link.avg_snr_linear, mcs_table_);
    ues_.push_back(std::move(ue));
  }

  std::set<std::string> flow_ids;
  std::vector<int> flows_per_ue(ues_.size(), 0);
  for (const auto& flow : flows_) {
    if (!flow_ids.insert(flow.id()).second) {
      throw Error(ErrorCode::ValidationError, "duplicate flow id " + flow.id());
    }
    auto it = std::find_if(ues_.begin(), ues_.end(),
                           [&](const UserEquipment& u) { return u.id == flow.ue_id(); });
    if (it == ues_.end()) {
      throw Error(ErrorCode::ValidationError,
                  "flow " + flow.id() + " references unknown UE " + flow.ue_id());
    }
    const auto idx = static_cast<std::size_t>(it - ues_.begin());
    flow_ue_.push_back(idx);
    ++flows_per_ue[idx];
  }
  for (std::size_t u = 0; u < ues_.size(); ++u) {
    if (flows_per_ue[u] == 0) {
      throw Error(ErrorCode::ValidationError, "UE " + ues_[u].id + " carries no flow");
    }
  }
  if (!custom_slices_.empty()) {
    check_partition(SliceLayout{DeploymentOption::Custom, custom_slices_}, flows_.size());
  }
}

std::optional<std::size_t> Scenario::flow_index(std::string_view flow_id) const {
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    if (flows_[i].id() == flow_id) return i;
  }
  return std::nullopt;
}

std::size_t Scenario::ue_index(std::string_view ue_id) const {
  for (std::size_t i = 0; i < ues_.size(); ++i) {
    if (ues_[i].id == ue_id) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown UE " + std::string(ue_id));
}

const UserEquipment& Scenario::ue_of(std::size_t flow) const { return ues_.at(flow_ue_.at(flow)); }

Scenario Scenario::with_n_cell_rb(int n_cell_rb) const {
  return Scenario(sites_, flows_, n_cell_rb, numerology_, cell_, mcs_table_, custom_slices_);
}

Scenario Scenario::with_epsilon(double epsilon) const {
  std::vector<FlowSpec> flows;
  flows.reserve(flows_.size());
  for (const auto& f : flows_) flows.push_back(f.with_violation_budget(epsilon));
  return Scenario(sites_, std::move(flows), n_cell_rb_, numerology_, cell_, mcs_table_,
                  custom_slices_);
}

Scenario Scenario::with_flows(std::vector<FlowSpec> flows) const {
  return Scenario(sites_, std::move(flows), n_cell_rb_, numerology_, cell_, mcs_table_,
                  custom_slices_);
}

Scenario Scenario::with_mcs_table(McsTable table) const {
  return Scenario(sites_, flows_, n_cell_rb_, numerology_, cell_, std::move(table),
                  custom_slices_);
}

std::string_view to_string(DeploymentOption option) noexcept {
  switch (option) {
    case DeploymentOption::DO0: return "DO0";
    case DeploymentOption::DO1: return "DO1";
    case DeploymentOption::DO2: return "DO2";
    case DeploymentOption::DO3: return "DO3";
    case DeploymentOption::DO4: return "DO4";
    case DeploymentOption::Custom: return "CUSTOM";
  }
  return "?";
}

DeploymentOption parse_option(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (c != '-' && c != '#' && c != '_' && c != ' ') {
      t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  if (t.starts_with("DO")) t.erase(0, 2);
  if (t == "0") return DeploymentOption::DO0;
  if (t == "1") return DeploymentOption::DO1;
  if (t == "2") return DeploymentOption::DO2;
  if (t == "3") return DeploymentOption::DO3;
  if (t == "4") return DeploymentOption::DO4;
  if (t == "CUSTOM") return DeploymentOption::Custom;
  throw Error(ErrorCode::UnknownOption, "unknown deployment option '" + std::string(text) + "'");
}

namespace {

std::string slice_name(std::size_t i) { return "S" + std::to_string(i + 1); }

void name_slices(std::vector<Slice>& slices) {
  for (std::size_t i = 0; i < slices.size(); ++i) slices[i].id = slice_name(i);
}

// Flags the flows of the UE(s) whose tightest delay target is the global
// minimum.
std::vector<bool> critical_ue_flows(const Scenario& scenario) {
  const auto& flows = scenario.flows();
  std::vector<double> tightest(scenario.ues().size(), std::numeric_limits<double>::infinity());
  for (const auto& f : flows) {
    auto& t = tightest[scenario.ue_index(f.ue_id())];
    t = std::min(t, f.delay_target());
  }
  const double strictest = *std::min_element(tightest.begin(), tightest.end());
  std::vector<bool> critical(flows.size());
  for (std::size_t f = 0; f < flows.size(); ++f) {
    critical[f] = tightest[scenario.ue_index(flows[f].ue_id())] == strictest;
  }
  return critical;
}

}  // namespace

SliceLayout build_layout(const Scenario& scenario, DeploymentOption option) {
  const auto& flows = scenario.flows();
  if (flows.empty()) throw Error(ErrorCode::EmptyScenario, "scenario has no flows");

  SliceLayout layout;
  layout.option = option;
  auto& slices = layout.slices;

  switch (option) {
    case DeploymentOption::DO0: {
      Slice all;
      for (std::size_t f = 0; f < flows.size(); ++f) all.flows.push_back(f);
      slices.push_back(std::move(all));
      break;
    }
    case DeploymentOption::DO1: {
      for (std::size_t u = 0; u < scenario.ues().size(); ++u) {
        Slice s;
        for (std::size_t f = 0; f < flows.size(); ++f) {
          if (flows[f].ue_id() == scenario.ues()[u].id) s.flows.push_back(f);
        }
        slices.push_back(std::move(s));
      }
      break;
    }
    case DeploymentOption::DO2: {
      for (std::size_t f = 0; f < flows.size(); ++f) slices.push_back(Slice{{}, {f}});
      break;
    }
    case DeploymentOption::DO3:
    case DeploymentOption::DO4: {
      const auto critical = critical_ue_flows(scenario);
      if (option == DeploymentOption::DO3) {
        Slice shared;
        for (std::size_t f = 0; f < flows.size(); ++f) {
          if (!critical[f]) shared.flows.push_back(f);
        }
        if (!shared.flows.empty()) slices.push_back(std::move(shared));
        // One dedicated slice per critical UE.
        for (const auto& ue : scenario.ues()) {
          Slice s;
          for (std::size_t f = 0; f < flows.size(); ++f) {
            if (critical[f] && flows[f].ue_id() == ue.id) s.flows.push_back(f);
          }
          if (!s.flows.empty()) slices.push_back(std::move(s));
        }
      } else {
        // Non-critical flows grouped by equal delay target, most relaxed first.
        std::vector<double> targets;
        for (std::size_t f = 0; f < flows.size(); ++f) {
          if (!critical[f]) targets.push_back(flows[f].delay_target());
        }
        std::sort(targets.begin(), targets.end(), std::greater<>());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        for (double target : targets) {
          Slice group;
          for (std::size_t f = 0; f < flows.size(); ++f) {
            if (!critical[f] && flows[f].delay_target() == target) group.flows.push_back(f);
          }
          slices.push_back(std::move(group));
        }
        for (std::size_t f = 0; f < flows.size(); ++f) {
          if (critical[f]) slices.push_back(Slice{{}, {f}});
        }
      }
      break;
    }
    case DeploymentOption::Custom: {
      if (scenario.custom_slices().empty()) {
        throw Error(ErrorCode::UnknownOption, "scenario defines no custom slices");
      }
      slices = scenario.custom_slices();
      check_partition(layout, flows.size());
      return layout;
    }
  }
  name_slices(slices);
  check_partition(layout, flows.size());
  return layout;
}

void check_partition(const SliceLayout& layout, std::size_t n_flows) {
  std::vector<int> hits(n_flows, 0);
  std::set<std::string> ids;
  for (const auto& s : layout.slices) {
    if (s.flows.empty()) throw Error(ErrorCode::ValidationError, "slice " + s.id + " is empty");
    if (!ids.insert(s.id).second) {
      throw Error(ErrorCode::ValidationError, "duplicate slice id " + s.id);
    }
    for (auto f : s.flows) {
      if (f >= n_flows) throw Error(ErrorCode::ValidationError, "slice " + s.id + " has bad flow");
      ++hits[f];
    }
  }
  for (std::size_t f = 0; f < n_flows; ++f) {
    if (hits[f] != 1) {
      throw Error(ErrorCode::ValidationError,
                  "slices do not partition the flows (flow #" + std::to_string(f) + " appears " +
                      std::to_string(hits[f]) + " times)");
    }
  }
}

std::vector<double> per_flow_rbs(const SliceLayout& layout, const std::vector<int>& per_slice,
                                 std::size_t n_flows) {
  if (per_slice.size() != layout.slices.size()) {
    throw Error(ErrorCode::MissingSlice, "allocation does not cover every slice");
  }
  std::vector<double> out(n_flows, 0.0);
  for (std::size_t s = 0; s < layout.slices.size(); ++s) {
    const auto& slice = layout.slices[s];
    if (per_slice[s] < 1) {
      throw Error(ErrorCode::InvalidArgument, "slice " + slice.id + " needs at least one RB");
    }
    const double share = static_cast<double>(per_slice[s]) / static_cast<double>(slice.flows.size());
    for (auto f : slice.flows) out.at(f) = share;
  }
  return out;
}

std::map<std::string, double> per_flow_rbs(const SliceLayout& layout, const Scenario& scenario,
                                           const std::map<std::string, int>& per_slice) {
  std::vector<int> aligned;
  for (const auto& s : layout.slices) {
    auto it = per_slice.find(s.id);
    if (it == per_slice.end()) throw Error(ErrorCode::MissingSlice, "no RBs for slice " + s.id);
    aligned.push_back(it->second);
  }
  const auto shares = per_flow_rbs(layout, aligned, scenario.flows().size());
  std::map<std::string, double> out;
  for (std::size_t f = 0; f < shares.size(); ++f) out[scenario.flows()[f].id()] = shares[f];
  return out;
}

}  // namespace sncslice

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sncslice/scenario_io.hpp"
#include "sncslice/topology.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return SNCSLICE_TEST_DATA_DIR; }

inline sncslice::Scenario table1() { return sncslice::load_scenario(data_dir() / "table1.scn"); }

/// One level covering every SNR: per-RB service is exactly 180 * eta bits.
inline sncslice::McsTable deterministic_mcs(double eta) {
  return sncslice::McsTable({{0.0, std::numeric_limits<double>::infinity(), eta}});
}

struct FlowDef {
  std::string id;
  std::string ue;
  double lambda;
  double target;
  std::int64_t bits = 512;
  double epsilon = 1e-5;
};

inline sncslice::Scenario make_scenario(const std::vector<sncslice::UeSite>& ues,
                                        const std::vector<FlowDef>& flows, int n_cell_rb,
                                        sncslice::McsTable table = sncslice::McsTable::standard_cqi(),
                                        std::vector<sncslice::Slice> custom = {}) {
  std::vector<sncslice::FlowSpec> specs;
  for (const auto& f : flows) {
    specs.emplace_back(f.id, f.ue, f.lambda, sncslice::PacketSizePmf::fixed(f.bits), f.target,
                       f.epsilon);
  }
  return sncslice::Scenario(ues, std::move(specs), n_cell_rb, sncslice::Numerology{},
                            sncslice::CellRadio{}, std::move(table), std::move(custom));
}

}  // namespace fixtures

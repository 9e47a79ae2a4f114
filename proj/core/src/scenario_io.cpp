#include "sncslice/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "sncslice/error.hpp"

namespace sncslice {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(ErrorCode code, const YAML::Node& node, const std::string& field,
                         const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (node && node.Mark().line >= 0) os << ':' << node.Mark().line + 1;
    os << ": " << field << ": " << what;
    throw Error(code, os.str());
  }

  void expect_map(const YAML::Node& node, const std::string& field) const {
    if (!node || !node.IsMap()) fail(ErrorCode::ParseError, node, field, "expected a mapping");
  }

  void expect_keys(const YAML::Node& node, const std::string& field,
                   std::initializer_list<const char*> allowed) const {
    expect_map(node, field);
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail(ErrorCode::ParseError, kv.first, field, "unknown key '" + key + "'");
    }
  }

  template <typename T>
  T get(const YAML::Node& parent, const char* key, const std::string& field) const {
    const YAML::Node node = parent[key];
    if (!node) fail(ErrorCode::ParseError, parent, field + "." + key, "missing required field");
    return as<T>(node, field + "." + key);
  }

  template <typename T>
  T get_or(const YAML::Node& parent, const char* key, const std::string& field, T fallback) const {
    const YAML::Node node = parent[key];
    if (!node) return fallback;
    return as<T>(node, field + "." + key);
  }

  template <typename T>
  T as(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(ErrorCode::ParseError, node, field, "expected a scalar");
    if constexpr (std::is_same_v<T, double>) {
      const auto text = node.Scalar();
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size()) {
        fail(ErrorCode::ParseError, node, field, "expected a number, got '" + text + "'");
      }
      return v;
    } else {
      try {
        return node.as<T>();
      } catch (const YAML::Exception&) {
        fail(ErrorCode::ParseError, node, field, "unexpected value '" + node.Scalar() + "'");
      }
    }
  }

  PacketSizePmf pmf(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence() || node.size() == 0) {
      fail(ErrorCode::ParseError, node, field, "expected a list of [bits, probability] pairs");
    }
    std::vector<PacketSize> entries;
    for (std::size_t i = 0; i < node.size(); ++i) {
      const auto item = node[i];
      const std::string f = field + "[" + std::to_string(i) + "]";
      if (!item.IsSequence() || item.size() != 2) {
        fail(ErrorCode::ParseError, item, f, "expected [bits, probability]");
      }
      entries.push_back({as<std::int64_t>(item[0], f), as<double>(item[1], f)});
    }
    try {
      return PacketSizePmf(std::move(entries));
    } catch (const Error& e) {
      fail(ErrorCode::ValidationError, node, field, e.what());
    }
  }

  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
};

YAML::Node parse_document(const std::string& text, const std::string& source) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root || !root.IsMap()) {
      throw Error(ErrorCode::ParseError, source + ": document must be a mapping");
    }
    return root;
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

void check_schema(const Reader& r, const YAML::Node& root) {
  const int schema = r.get<int>(root, "schema", "document");
  if (schema != 1) {
    r.fail(ErrorCode::ValidationError, root["schema"], "schema",
           "unsupported schema version " + std::to_string(schema));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

McsTable inline_mcs(const Reader& r, const YAML::Node& node) {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> eta;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto item = node[i];
    const std::string f = "mcs_table[" + std::to_string(i) + "]";
    if (!item.IsSequence() || item.size() != 3) {
      r.fail(ErrorCode::ParseError, item, f, "expected [snr_min_db, snr_max_db, eta]");
    }
    lo.push_back(r.as<double>(item[0], f));
    hi.push_back(r.as<double>(item[1], f));
    eta.push_back(r.as<double>(item[2], f));
  }
  try {
    return McsTable::from_db(lo, hi, eta);
  } catch (const Error& e) {
    r.fail(ErrorCode::ValidationError, node, "mcs_table", e.what());
  }
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source_name,
                        const std::filesystem::path& base_dir) {
  const Reader r(source_name);
  const YAML::Node root = parse_document(text, source_name);
  r.expect_keys(root, "document",
                {"schema", "name", "numerology", "cell", "mcs_table", "defaults", "ues", "flows",
                 "custom_slices"});
  check_schema(r, root);

  Numerology num;
  if (const auto n = root["numerology"]) {
    r.expect_keys(n, "numerology", {"scs_hz", "n_sc", "t_slot_s"});
    num.scs_hz = r.get_or<double>(n, "scs_hz", "numerology", num.scs_hz);
    num.n_sc = r.get_or<int>(n, "n_sc", "numerology", num.n_sc);
    num.t_slot = r.get_or<double>(n, "t_slot_s", "numerology", num.t_slot);
    try {
      num.validate();
    } catch (const Error& e) {
      r.fail(ErrorCode::ValidationError, n, "numerology", e.what());
    }
  }

  const auto cell_node = root["cell"];
  r.expect_keys(cell_node, "cell",
                {"n_cell_rb", "carrier_hz", "tx_power_dbm", "noise_density_dbm_hz", "path_loss"});
  const int n_cell_rb = r.get<int>(cell_node, "n_cell_rb", "cell");
  if (n_cell_rb < 1) r.fail(ErrorCode::ValidationError, cell_node["n_cell_rb"], "cell.n_cell_rb", "must be >= 1");
  CellRadio cell;
  cell.carrier_hz = r.get_or<double>(cell_node, "carrier_hz", "cell", cell.carrier_hz);
  cell.tx_power_dbm = r.get_or<double>(cell_node, "tx_power_dbm", "cell", cell.tx_power_dbm);
  cell.noise_density_dbm_hz =
      r.get_or<double>(cell_node, "noise_density_dbm_hz", "cell", cell.noise_density_dbm_hz);
  if (!(cell.carrier_hz > 0.0)) {
    r.fail(ErrorCode::ValidationError, cell_node, "cell.carrier_hz", "must be > 0");
  }
  if (const auto pl = cell_node["path_loss"]) {
    r.expect_keys(pl, "cell.path_loss", {"ref_distance_m", "ref_loss_db", "exponent"});
    cell.path_loss.ref_distance_m =
        r.get_or<double>(pl, "ref_distance_m", "cell.path_loss", cell.path_loss.ref_distance_m);
    cell.path_loss.exponent = r.get_or<double>(pl, "exponent", "cell.path_loss", cell.path_loss.exponent);
    if (pl["ref_loss_db"]) cell.path_loss.ref_loss_db = r.get<double>(pl, "ref_loss_db", "cell.path_loss");
    if (!(cell.path_loss.ref_distance_m > 0.0) || !(cell.path_loss.exponent >= 0.0)) {
      r.fail(ErrorCode::ValidationError, pl, "cell.path_loss", "needs ref_distance_m > 0 and exponent >= 0");
    }
  }

  McsTable table = McsTable::standard_cqi();
  if (const auto m = root["mcs_table"]) {
    if (m.IsScalar()) {
      if (m.Scalar() != "standard_cqi") {
        r.fail(ErrorCode::ParseError, m, "mcs_table", "expected 'standard_cqi', {file: ...} or a list");
      }
    } else if (m.IsMap()) {
      r.expect_keys(m, "mcs_table", {"file"});
      auto path = std::filesystem::path(r.get<std::string>(m, "file", "mcs_table"));
      if (path.is_relative()) path = base_dir / path;
      table = load_mcs_table(path);
    } else if (m.IsSequence()) {
      table = inline_mcs(r, m);
    } else {
      r.fail(ErrorCode::ParseError, m, "mcs_table", "unsupported value");
    }
  }

  double default_eps = 1e-5;
  std::optional<PacketSizePmf> default_pmf;
  if (const auto d = root["defaults"]) {
    r.expect_keys(d, "defaults", {"epsilon", "packet_bits", "packet_pmf"});
    default_eps = r.get_or<double>(d, "epsilon", "defaults", default_eps);
    if (d["packet_bits"]) {
      const auto bits = r.get<std::int64_t>(d, "packet_bits", "defaults");
      if (bits <= 0) r.fail(ErrorCode::ValidationError, d["packet_bits"], "defaults.packet_bits", "must be > 0");
      default_pmf = PacketSizePmf::fixed(bits);
    }
    if (d["packet_pmf"]) default_pmf = r.pmf(d["packet_pmf"], "defaults.packet_pmf");
  }

  const auto ues_node = root["ues"];
  if (!ues_node || !ues_node.IsSequence() || ues_node.size() == 0) {
    r.fail(ErrorCode::ValidationError, ues_node ? ues_node : root, "ues", "at least one UE is required");
  }
  std::vector<UeSite> sites;
  for (std::size_t i = 0; i < ues_node.size(); ++i) {
    const auto u = ues_node[i];
    const std::string f = "ues[" + std::to_string(i) + "]";
    r.expect_keys(u, f, {"id", "distance_m"});
    UeSite site{r.get<std::string>(u, "id", f), r.get<double>(u, "distance_m", f)};
    if (!(site.distance_m > 0.0)) r.fail(ErrorCode::ValidationError, u, f + ".distance_m", "must be > 0");
    sites.push_back(std::move(site));
  }

  const auto flows_node = root["flows"];
  if (!flows_node || !flows_node.IsSequence() || flows_node.size() == 0) {
    r.fail(ErrorCode::ValidationError, flows_node ? flows_node : root, "flows",
           "at least one flow is required");
  }
  std::vector<FlowSpec> flows;
  for (std::size_t i = 0; i < flows_node.size(); ++i) {
    const auto n = flows_node[i];
    const std::string f = "flows[" + std::to_string(i) + "]";
    r.expect_keys(n, f, {"id", "ue", "lambda_pps", "w_obj_s", "epsilon", "packet_bits", "packet_pmf"});
    std::optional<PacketSizePmf> pmf = default_pmf;
    if (n["packet_bits"]) {
      const auto bits = r.get<std::int64_t>(n, "packet_bits", f);
      if (bits <= 0) r.fail(ErrorCode::ValidationError, n["packet_bits"], f + ".packet_bits", "must be > 0");
      pmf = PacketSizePmf::fixed(bits);
    }
    if (n["packet_pmf"]) pmf = r.pmf(n["packet_pmf"], f + ".packet_pmf");
    if (!pmf) r.fail(ErrorCode::ValidationError, n, f, "no packet size given and no default");
    try {
      flows.emplace_back(r.get<std::string>(n, "id", f), r.get<std::string>(n, "ue", f),
                         r.get<double>(n, "lambda_pps", f), *pmf, r.get<double>(n, "w_obj_s", f),
                         r.get_or<double>(n, "epsilon", f, default_eps));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ValidationError) throw;
      r.fail(ErrorCode::ValidationError, n, f, e.what());
    }
  }

  std::vector<Slice> custom;
  if (const auto cs = root["custom_slices"]) {
    if (!cs.IsSequence()) r.fail(ErrorCode::ParseError, cs, "custom_slices", "expected a list");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto s = cs[i];
      const std::string f = "custom_slices[" + std::to_string(i) + "]";
      r.expect_keys(s, f, {"id", "flows"});
      Slice slice;
      slice.id = r.get<std::string>(s, "id", f);
      const auto members = s["flows"];
      if (!members || !members.IsSequence()) r.fail(ErrorCode::ParseError, s, f + ".flows", "expected a list");
      for (std::size_t j = 0; j < members.size(); ++j) {
        const auto id = r.as<std::string>(members[j], f + ".flows");
        std::size_t idx = flows.size();
        for (std::size_t k = 0; k < flows.size(); ++k) {
          if (flows[k].id() == id) idx = k;
        }
        if (idx == flows.size()) {
          r.fail(ErrorCode::ValidationError, members[j], f + ".flows", "unknown flow '" + id + "'");
        }
        slice.flows.push_back(idx);
      }
      custom.push_back(std::move(slice));
    }
  }

  try {
    return Scenario(std::move(sites), std::move(flows), n_cell_rb, num, cell, std::move(table),
                    std::move(custom));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, source_name + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.string(), path.parent_path());
}

void write_scenario(std::ostream& out, const Scenario& s) {
  const auto& n = s.numerology();
  const auto& c = s.cell();
  out << "schema: 1\n";
  out << "numerology:\n  scs_hz: " << number(n.scs_hz) << "\n  n_sc: " << n.n_sc
      << "\n  t_slot_s: " << number(n.t_slot) << "\n";
  out << "cell:\n  n_cell_rb: " << s.n_cell_rb() << "\n  carrier_hz: " << number(c.carrier_hz)
      << "\n  tx_power_dbm: " << number(c.tx_power_dbm)
      << "\n  noise_density_dbm_hz: " << number(c.noise_density_dbm_hz) << "\n  path_loss:\n"
      << "    ref_distance_m: " << number(c.path_loss.ref_distance_m) << "\n";
  if (c.path_loss.ref_loss_db) out << "    ref_loss_db: " << number(*c.path_loss.ref_loss_db) << "\n";
  out << "    exponent: " << number(c.path_loss.exponent) << "\n";
  if (s.mcs_table() == McsTable::standard_cqi()) {
    out << "mcs_table: standard_cqi\n";
  } else {
    out << "mcs_table:\n";
    for (const auto& l : s.mcs_table().levels()) {
      out << "  - [" << number(linear_to_db(l.snr_min)) << ", " << number(linear_to_db(l.snr_max))
          << ", " << number(l.eta) << "]\n";
    }
  }
  out << "ues:\n";
  for (const auto& u : s.sites()) {
    out << "  - {id: " << u.id << ", distance_m: " << number(u.distance_m) << "}\n";
  }
  out << "flows:\n";
  for (const auto& f : s.flows()) {
    out << "  - {id: " << f.id() << ", ue: " << f.ue_id() << ", lambda_pps: " << number(f.lambda())
        << ", w_obj_s: " << number(f.delay_target()) << ", epsilon: " << number(f.violation_budget())
        << ", packet_pmf: [";
    bool first = true;
    for (const auto& e : f.sizes().entries()) {
      out << (first ? "" : ", ") << "[" << e.bits << ", " << number(e.probability) << "]";
      first = false;
    }
    out << "]}\n";
  }
  if (!s.custom_slices().empty()) {
    out << "custom_slices:\n";
    for (const auto& sl : s.custom_slices()) {
      out << "  - {id: " << sl.id << ", flows: [";
      for (std::size_t i = 0; i < sl.flows.size(); ++i) {
        out << (i ? ", " : "") << s.flows()[sl.flows[i]].id();
      }
      out << "]}\n";
    }
  }
}

McsTable parse_mcs_table(const std::string& text, const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> eta;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
    }
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    auto location = [&] { return source_name + ":" + std::to_string(line_no); };
    if (tokens.size() != 3) {
      throw Error(ErrorCode::ParseError, location() + ": expected 'snr_min_db snr_max_db eta'");
    }
    double values[3];
    bool numeric = true;
    for (int k = 0; k < 3; ++k) {
      char* end = nullptr;
      values[k] = std::strtod(tokens[static_cast<std::size_t>(k)].c_str(), &end);
      numeric = numeric && *end == '\0';
    }
    if (!numeric) {
      if (eta.empty() && lo.empty()) continue;  // header row
      throw Error(ErrorCode::ParseError, location() + ": non-numeric field");
    }
    lo.push_back(values[0]);
    hi.push_back(values[1]);
    eta.push_back(values[2]);
  }
  try {
    return McsTable::from_db(lo, hi, eta);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, source_name + ": " + e.what());
  }
}

McsTable load_mcs_table(const std::filesystem::path& path) {
  return parse_mcs_table(read_file(path), path.string());
}

std::vector<PlanningWindow> parse_windows(const std::string& text, const Scenario& scenario,
                                          const std::string& source_name) {
  const Reader r(source_name);
  const YAML::Node root = parse_document(text, source_name);
  r.expect_keys(root, "document", {"schema", "windows"});
  check_schema(r, root);
  const auto list = root["windows"];
  if (!list || !list.IsSequence() || list.size() == 0) {
    r.fail(ErrorCode::ValidationError, list ? list : root, "windows", "at least one window is required");
  }
  std::vector<PlanningWindow> windows;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto w = list[i];
    const std::string f = "windows[" + std::to_string(i) + "]";
    r.expect_keys(w, f, {"index", "flows"});
    PlanningWindow window;
    window.index = r.get_or<int>(w, "index", f, static_cast<int>(i));
    const auto flows = w["flows"];
    if (flows) {
      if (!flows.IsSequence()) r.fail(ErrorCode::ParseError, flows, f + ".flows", "expected a list");
      std::set<std::string> seen;
      for (std::size_t j = 0; j < flows.size(); ++j) {
        const auto n = flows[j];
        const std::string ff = f + ".flows[" + std::to_string(j) + "]";
        r.expect_keys(n, ff, {"id", "lambda_pps", "packet_bits", "packet_pmf"});
        WindowFlowStats st;
        st.flow_id = r.get<std::string>(n, "id", ff);
        const auto idx = scenario.flow_index(st.flow_id);
        if (!idx) r.fail(ErrorCode::ValidationError, n, ff + ".id", "unknown flow '" + st.flow_id + "'");
        if (!seen.insert(st.flow_id).second) {
          r.fail(ErrorCode::ValidationError, n, ff + ".id", "flow listed twice");
        }
        const auto& base = scenario.flows()[*idx];
        st.lambda = r.get_or<double>(n, "lambda_pps", ff, base.lambda());
        if (!(st.lambda > 0.0)) r.fail(ErrorCode::ValidationError, n, ff + ".lambda_pps", "must be > 0");
        st.sizes = base.sizes();
        if (n["packet_bits"]) {
          const auto bits = r.get<std::int64_t>(n, "packet_bits", ff);
          if (bits <= 0) r.fail(ErrorCode::ValidationError, n, ff + ".packet_bits", "must be > 0");
          st.sizes = PacketSizePmf::fixed(bits);
        }
        if (n["packet_pmf"]) st.sizes = r.pmf(n["packet_pmf"], ff + ".packet_pmf");
        window.flows.push_back(std::move(st));
      }
    }
    windows.push_back(std::move(window));
  }
  return windows;
}

std::vector<PlanningWindow> load_windows(const std::filesystem::path& path,
                                         const Scenario& scenario) {
  return parse_windows(read_file(path), scenario, path.string());
}

Scenario apply_window(const Scenario& scenario, const PlanningWindow& window) {
  std::vector<FlowSpec> flows = scenario.flows();
  for (const auto& st : window.flows) {
    const auto idx = scenario.flow_index(st.flow_id);
    if (!idx) throw Error(ErrorCode::ValidationError, "window references unknown flow " + st.flow_id);
    flows[*idx] = flows[*idx].with_traffic(st.lambda, st.sizes);
  }
  return scenario.with_flows(std::move(flows));
}

}  // namespace sncslice

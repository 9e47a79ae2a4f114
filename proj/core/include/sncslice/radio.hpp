#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sncslice {

struct Numerology {
  double scs_hz = 60e3;
  int n_sc = 12;
  double t_slot = 0.25e-3;

  void validate() const;
  double rb_bandwidth_hz() const noexcept { return scs_hz * n_sc; }
};

/// One MCS level, selected when the instantaneous SNR (linear) falls in
/// [snr_min, snr_max).
struct McsLevel {
  double snr_min = 0.0;
  double snr_max = 0.0;
  double eta = 0.0;

  friend bool operator==(const McsLevel&, const McsLevel&) = default;
};

class McsTable {
 public:
  explicit McsTable(std::vector<McsLevel> levels);

  /// Builds a table from dB thresholds; -inf / +inf are allowed at the ends.
  static McsTable from_db(std::span<const double> snr_min_db,
                          std::span<const double> snr_max_db,
                          std::span<const double> eta);

  /// 15 levels with the 4-bit CQI spectral efficiencies and 14 switching
  /// thresholds spaced uniformly in dB over [-6, 22].
  static McsTable standard_cqi();

  std::span<const McsLevel> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }

  friend bool operator==(const McsTable&, const McsTable&) = default;

 private:
  std::vector<McsLevel> levels_;
};

/// Log-distance law PL_dB(d) = PL0 + 10 n log10(d / d0). When `ref_loss_db`
/// is unset PL0 is the free-space loss at d0 for the cell carrier.
struct PathLossParams {
  double ref_distance_m = 1.0;
  std::optional<double> ref_loss_db;
  double exponent = 3.0;
};

double free_space_loss_db(double distance_m, double carrier_hz);

/// Linear power gain P^pl in (0, 1].
double path_loss_linear(double distance_m, double carrier_hz, const PathLossParams& model);

struct CellRadio {
  double carrier_hz = 4.7e9;
  double tx_power_dbm = 24.0;
  double noise_density_dbm_hz = -174.0;
  PathLossParams path_loss;
};

struct LinkProfile {
  std::string ue_id;
  double distance_m = 0.0;
  double tx_power_dbm = 0.0;
  double noise_density_dbm_hz = 0.0;
  double path_loss_gain = 1.0;
  double avg_snr_linear = 0.0;
};

double dbm_to_watt(double dbm) noexcept;
double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

/// Noise power over one RB bandwidth, in dBm.
double rb_noise_power_dbm(double noise_density_dbm_hz, const Numerology& numerology);

/// P_tx * P^pl / N_0 with N_0 integrated over one RB.
double avg_snr(const LinkProfile& link, const Numerology& numerology);

LinkProfile make_link(std::string ue_id, double distance_m, const CellRadio& cell,
                      const Numerology& numerology);

struct McsPmf {
  std::vector<double> probabilities;
};

/// Rayleigh fading: p_m = exp(-g_min / gbar) - exp(-g_max / gbar).
McsPmf mcs_pmf(double gamma_bar, const McsTable& table);

double per_rb_bits(const Numerology& numerology, double eta);

/// Per-flow service description for the envelope computations: MCS
/// probabilities, per-RB bits of each level and the (possibly fractional)
/// RB share. Construction precomputes everything service_rho needs.
class ServiceModel {
 public:
  ServiceModel(const McsPmf& pmf, const McsTable& table, double n_rb, const Numerology& numerology);

  /// -ln(M_C(-theta)) / (theta t_slot).
  double rho(double theta) const;
  /// Long-run mean service rate in bits/s (theta -> 0 limit of rho).
  double mean_rate() const noexcept { return mean_rate_; }

  double n_rb() const noexcept { return n_rb_; }
  double t_slot() const noexcept { return t_slot_; }
  std::span<const double> probabilities() const noexcept { return probs_; }
  std::span<const double> bits_per_rb() const noexcept { return bits_; }

 private:
  std::vector<double> probs_;
  std::vector<double> bits_;
  double n_rb_;
  double t_slot_;
  double mean_rate_;
};

double service_rho(double theta, const McsPmf& pmf, const McsTable& table, double n_rb,
                   const Numerology& numerology);

}  // namespace sncslice

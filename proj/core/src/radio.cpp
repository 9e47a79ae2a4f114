#include "sncslice/radio.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "sncslice/error.hpp"

namespace sncslice {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

constexpr std::array<double, 15> kCqiEfficiency = {
    0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
    2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547,
};

bool close_rel(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

void Numerology::validate() const {
  if (!(scs_hz > 0.0) || n_sc < 1 || !(t_slot > 0.0)) {
    throw Error(ErrorCode::ValidationError,
                "numerology requires scs_hz > 0, n_sc >= 1 and t_slot > 0");
  }
}

McsTable::McsTable(std::vector<McsLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw Error(ErrorCode::ValidationError, "MCS table is empty");
  if (levels_.front().snr_min != 0.0) {
    throw Error(ErrorCode::ValidationError, "first MCS level must start at SNR 0 (linear)");
  }
  if (!std::isinf(levels_.back().snr_max)) {
    throw Error(ErrorCode::ValidationError, "last MCS level must extend to +inf");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& l = levels_[i];
    if (!(l.snr_min < l.snr_max)) {
      throw Error(ErrorCode::ValidationError,
                  "MCS level " + std::to_string(i) + " has an empty SNR range");
    }
    if (!(l.eta >= 0.0) || !std::isfinite(l.eta)) {
      throw Error(ErrorCode::ValidationError, "MCS level " + std::to_string(i) + " has invalid eta");
    }
    if (i > 0) {
      if (!close_rel(levels_[i - 1].snr_max, l.snr_min)) {
        throw Error(ErrorCode::ValidationError,
                    "MCS levels " + std::to_string(i - 1) + " and " + std::to_string(i) +
                        " are not contiguous");
      }
      levels_[i].snr_min = levels_[i - 1].snr_max;
      if (!(l.eta > levels_[i - 1].eta)) {
        throw Error(ErrorCode::ValidationError, "MCS efficiencies must be strictly increasing");
      }
    }
  }
}

McsTable McsTable::from_db(std::span<const double> snr_min_db, std::span<const double> snr_max_db,
                           std::span<const double> eta) {
  if (snr_min_db.size() != snr_max_db.size() || snr_min_db.size() != eta.size()) {
    throw Error(ErrorCode::InvalidArgument, "MCS column lengths differ");
  }
  std::vector<McsLevel> levels;
  levels.reserve(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    levels.push_back({db_to_linear(snr_min_db[i]), db_to_linear(snr_max_db[i]), eta[i]});
  }
  return McsTable(std::move(levels));
}

McsTable McsTable::standard_cqi() {
  const std::size_t n = kCqiEfficiency.size();
  const double lo_db = -6.0;
  const double hi_db = 22.0;
  std::vector<double> boundaries(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    boundaries[j] = lo_db + (hi_db - lo_db) * static_cast<double>(j) / static_cast<double>(n - 2);
  }
  std::vector<McsLevel> levels;
  for (std::size_t m = 0; m < n; ++m) {
    const double g_min = m == 0 ? 0.0 : db_to_linear(boundaries[m - 1]);
    const double g_max =
        m + 1 == n ? std::numeric_limits<double>::infinity() : db_to_linear(boundaries[m]);
    levels.push_back({g_min, g_max, kCqiEfficiency[m]});
  }
  return McsTable(std::move(levels));
}

double dbm_to_watt(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double db_to_linear(double db) noexcept {
  if (std::isinf(db)) return db > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

double free_space_loss_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0) || !(carrier_hz > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "free-space loss needs positive distance and carrier");
  }
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * carrier_hz / kSpeedOfLight);
}

double path_loss_linear(double distance_m, double carrier_hz, const PathLossParams& model) {
  if (!(distance_m > 0.0)) throw Error(ErrorCode::InvalidArgument, "distance must be > 0");
  if (!(model.ref_distance_m > 0.0) || !(model.exponent >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid path-loss parameters");
  }
  const double pl0 = model.ref_loss_db ? *model.ref_loss_db
                                       : free_space_loss_db(model.ref_distance_m, carrier_hz);
  const double pl_db = pl0 + 10.0 * model.exponent * std::log10(distance_m / model.ref_distance_m);
  // A gain above unity is not physical; clamp close-in distances to 0 dB.
  return pl_db <= 0.0 ? 1.0 : db_to_linear(-pl_db);
}

double rb_noise_power_dbm(double noise_density_dbm_hz, const Numerology& numerology) {
  return noise_density_dbm_hz + 10.0 * std::log10(numerology.rb_bandwidth_hz());
}

double avg_snr(const LinkProfile& link, const Numerology& numerology) {
  const double noise_w = dbm_to_watt(rb_noise_power_dbm(link.noise_density_dbm_hz, numerology));
  return dbm_to_watt(link.tx_power_dbm) * link.path_loss_gain / noise_w;
}

LinkProfile make_link(std::string ue_id, double distance_m, const CellRadio& cell,
                      const Numerology& numerology) {
  LinkProfile link;
  link.ue_id = std::move(ue_id);
  link.distance_m = distance_m;
  link.tx_power_dbm = cell.tx_power_dbm;
  link.noise_density_dbm_hz = cell.noise_density_dbm_hz;
  link.path_loss_gain = path_loss_linear(distance_m, cell.carrier_hz, cell.path_loss);
  link.avg_snr_linear = avg_snr(link, numerology);
  if (!(link.avg_snr_linear > 0.0) || !std::isfinite(link.avg_snr_linear)) {
    throw Error(ErrorCode::ValidationError, "UE " + link.ue_id + " has a degenerate average SNR");
  }
  return link;
}

McsPmf mcs_pmf(double gamma_bar, const McsTable& table) {
  if (!(gamma_bar > 0.0)) throw Error(ErrorCode::InvalidArgument, "average SNR must be > 0");
  McsPmf pmf;
  pmf.probabilities.reserve(table.size());
  for (const auto& level : table.levels()) {
    const double upper = std::isinf(level.snr_max) ? 0.0 : std::exp(-level.snr_max / gamma_bar);
    pmf.probabilities.push_back(std::exp(-level.snr_min / gamma_bar) - upper);
  }
  return pmf;
}

double per_rb_bits(const Numerology& numerology, double eta) {
  if (!(eta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be >= 0");
  return numerology.n_sc * numerology.scs_hz * numerology.t_slot * eta;
}

ServiceModel::ServiceModel(const McsPmf& pmf, const McsTable& table, double n_rb,
                           const Numerology& numerology)
    : n_rb_(n_rb), t_slot_(numerology.t_slot), mean_rate_(0.0) {
  if (pmf.probabilities.size() != table.size()) {
    throw Error(ErrorCode::InvalidArgument, "MCS PMF does not match the MCS table");
  }
  if (!(n_rb > 0.0)) throw Error(ErrorCode::InvalidArgument, "n_rb must be > 0");
  double mean_bits = 0.0;
  for (std::size_t m = 0; m < table.size(); ++m) {
    const double p = pmf.probabilities[m];
    if (p <= 0.0) continue;
    probs_.push_back(p);
    bits_.push_back(per_rb_bits(numerology, table.levels()[m].eta));
    mean_bits += p * bits_.back();
  }
  mean_rate_ = n_rb_ * mean_bits / t_slot_;
}

double ServiceModel::rho(double theta) const {
  if (!(theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be > 0");
  if (probs_.empty()) return 0.0;
  // Shift by the smallest level so nothing underflows, then take whichever of
  // log1p / log keeps full relative precision.
  const double b0 = bits_.front();
  double s_minus_one = 0.0;
  for (std::size_t m = 0; m < probs_.size(); ++m) {
    s_minus_one += probs_[m] * std::expm1(-theta * (bits_[m] - b0));
  }
  double log_shifted = 0.0;
  if (s_minus_one > -0.5) {
    log_shifted = std::log1p(s_minus_one);
  } else {
    double s = 0.0;
    for (std::size_t m = 0; m < probs_.size(); ++m) s += probs_[m] * std::exp(-theta * (bits_[m] - b0));
    log_shifted = std::log(s);
  }
  const double log_mgf = -theta * b0 + log_shifted;
  return -n_rb_ * log_mgf / (theta * t_slot_);
}

double service_rho(double theta, const McsPmf& pmf, const McsTable& table, double n_rb,
                   const Numerology& numerology) {
  return ServiceModel(pmf, table, n_rb, numerology).rho(theta);
}

}  // namespace sncslice

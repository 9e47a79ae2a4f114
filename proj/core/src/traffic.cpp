#include "sncslice/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "sncslice/error.hpp"

namespace sncslice {

namespace {

const double kLogMax = std::log(std::numeric_limits<double>::max());

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Overflow: return "OVERFLOW";
    case ErrorCode::StabilityViolated: return "STABILITY_VIOLATED";
    case ErrorCode::NumericUnderflow: return "NUMERIC_UNDERFLOW";
    case ErrorCode::UnknownOption: return "UNKNOWN_OPTION";
    case ErrorCode::EmptyScenario: return "EMPTY_SCENARIO";
    case ErrorCode::MissingSlice: return "MISSING_SLICE";
    case ErrorCode::CellTooSmall: return "CELL_TOO_SMALL";
    case ErrorCode::PreconditionInfeasible: return "PRECONDITION_INFEASIBLE";
    case ErrorCode::UnknownFlow: return "UNKNOWN_FLOW";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::InvalidDimensions: return "INVALID_DIMENSIONS";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

PacketSizePmf::PacketSizePmf(std::vector<PacketSize> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorCode::ValidationError, "packet size PMF is empty");
  }
  std::set<std::int64_t> seen;
  double total = 0.0;
  for (const auto& e : entries_) {
    if (e.bits <= 0) {
      throw Error(ErrorCode::ValidationError, "packet sizes must be positive");
    }
    if (!(e.probability > 0.0 && e.probability <= 1.0)) {
      throw Error(ErrorCode::ValidationError, "packet size probability outside (0, 1]");
    }
    if (!seen.insert(e.bits).second) {
      throw Error(ErrorCode::ValidationError,
                  "duplicate packet size " + std::to_string(e.bits));
    }
    total += e.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::ValidationError,
                "packet size probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  auto [lo, hi] = std::minmax_element(entries_.begin(), entries_.end(),
                                      [](const auto& a, const auto& b) { return a.bits < b.bits; });
  min_bits_ = lo->bits;
  max_bits_ = hi->bits;
  for (const auto& e : entries_) mean_bits_ += e.probability * static_cast<double>(e.bits);
}

PacketSizePmf PacketSizePmf::fixed(std::int64_t bits) {
  return PacketSizePmf({PacketSize{bits, 1.0}});
}

FlowSpec::FlowSpec(std::string id, std::string ue_id, double lambda, PacketSizePmf sizes,
                   double delay_target, double violation_budget)
    : id_(std::move(id)),
      ue_id_(std::move(ue_id)),
      lambda_(lambda),
      sizes_(std::move(sizes)),
      delay_target_(delay_target),
      violation_budget_(violation_budget) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
    throw Error(ErrorCode::ValidationError, "flow " + id_ + ": lambda must be > 0");
  }
  if (!(delay_target_ > 0.0) || !std::isfinite(delay_target_)) {
    throw Error(ErrorCode::ValidationError, "flow " + id_ + ": delay target must be > 0");
  }
  if (!(violation_budget_ > 0.0 && violation_budget_ < 1.0)) {
    throw Error(ErrorCode::ValidationError, "flow " + id_ + ": epsilon must lie in (0, 1)");
  }
}

FlowSpec FlowSpec::with_traffic(double lambda, PacketSizePmf sizes) const {
  return FlowSpec(id_, ue_id_, lambda, std::move(sizes), delay_target_, violation_budget_);
}

FlowSpec FlowSpec::with_violation_budget(double epsilon) const {
  return FlowSpec(id_, ue_id_, lambda_, sizes_, delay_target_, epsilon);
}

double mean_bit_rate(const FlowSpec& flow) {
  return flow.lambda() * flow.sizes().mean_bits();
}

double packet_mgf(const FlowSpec& flow, double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be > 0");
  if (theta * static_cast<double>(flow.sizes().max_bits()) > kLogMax) {
    throw Error(ErrorCode::Overflow, "packet MGF overflows for theta " + std::to_string(theta));
  }
  double m = 0.0;
  for (const auto& e : flow.sizes().entries()) {
    m += e.probability * std::exp(theta * static_cast<double>(e.bits));
  }
  return m;
}

double arrival_rho(const FlowSpec& flow, double theta) {
  if (!(theta > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta must be > 0");
  if (theta * static_cast<double>(flow.sizes().max_bits()) > kLogMax) {
    throw Error(ErrorCode::Overflow, "packet MGF overflows for theta " + std::to_string(theta));
  }
  // M_L - 1 accumulated through expm1 so the theta -> 0 limit stays exact.
  double m_minus_one = 0.0;
  for (const auto& e : flow.sizes().entries()) {
    m_minus_one += e.probability * std::expm1(theta * static_cast<double>(e.bits));
  }
  return flow.lambda() * m_minus_one / theta;
}

double max_theta(const FlowSpec& flow) {
  return kMaxMgfExponent / static_cast<double>(flow.sizes().max_bits());
}

}  // namespace sncslice

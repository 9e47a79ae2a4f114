#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "sncslice/radio.hpp"
#include "sncslice/traffic.hpp"

namespace sncslice {

struct SncParams {
  double theta = 0.0;
  double delta = 0.0;
};

/// W(theta, delta) = -2 [ln(eps/2) + ln(1 - e^{-theta delta})] / (theta (rho_s - delta))
/// with the violation budget split evenly between arrival and service
/// envelopes.
///
/// Throws StabilityViolated unless rho_s - delta > rho_a + delta and
/// NumericUnderflow when 1 - e^{-theta delta} rounds to zero.
double delay_bound_at(double rho_a, double rho_s, double epsilon, double theta, double delta);

struct DelayBound {
  double w_seconds = 0.0;
  SncParams params;
  double rho_a = 0.0;
  double rho_s = 0.0;
};

struct DelayBoundResult {
  // Empty when no sampled theta gives rho_s(theta) > rho_a(theta).
  std::optional<DelayBound> bound;
  std::size_t evaluations = 0;

  bool infeasible() const noexcept { return !bound.has_value(); }
};

struct OptimizerOptions {
  int grid_points = 64;
  double theta_min = 1e-9;
  double golden_rel_tol = 1e-4;
  int refine_rounds = 20;
  double refine_rel_tol = 1e-6;
  // Invoked for every stable (theta, delta) the search evaluates.
  std::function<void(double theta, double delta, double w)> observer;
};

using RateFunction = std::function<double(double theta)>;

/// Minimizes W over theta in [theta_min, theta_max] and delta in
/// (0, (rho_s - rho_a) / 2): a log-spaced theta grid with golden-section
/// search in delta at each stable grid point, then alternating
/// golden-section refinement around the best grid point. Deterministic.
DelayBoundResult optimize_delay_bound(const RateFunction& rho_a, const RateFunction& rho_s,
                                      double epsilon, double theta_max,
                                      const OptimizerOptions& options = {});

DelayBoundResult optimize_delay_bound(const FlowSpec& flow, const ServiceModel& service,
                                      const OptimizerOptions& options = {});

}  // namespace sncslice

#include "sncslice/snc.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "sncslice/error.hpp"

namespace sncslice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

// Unchecked objective; +inf outside the stable region.
double delay_formula(double rho_a, double rho_s, double log_half_eps, double theta, double delta) {
  if (!(rho_s - delta > rho_a + delta)) return kInf;
  const double one_minus = -std::expm1(-theta * delta);
  if (!(one_minus > 0.0)) return kInf;
  return -2.0 * (log_half_eps + std::log(one_minus)) / (theta * (rho_s - delta));
}

struct Point {
  double theta = 0.0;
  double delta = 0.0;
  double w = kInf;
  double rho_a = 0.0;
  double rho_s = 0.0;
};

// Golden-section minimization of f over [lo, hi]; returns the best abscissa
// seen. Stops once the bracket is narrower than tol.
template <typename F>
std::pair<double, double> golden_section(F&& f, double lo, double hi, double tol) {
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  double best_x = fc <= fd ? c : d;
  double best_f = std::min(fc, fd);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
      if (fc < best_f) best_f = fc, best_x = c;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
      if (fd < best_f) best_f = fd, best_x = d;
    }
  }
  return {best_x, best_f};
}

class Search {
 public:
  Search(const RateFunction& rho_a, const RateFunction& rho_s, double epsilon,
         const OptimizerOptions& options)
      : rho_a_(rho_a), rho_s_(rho_s), log_half_eps_(std::log(epsilon / 2.0)), options_(options) {}

  double evaluate(double theta, double delta, double ra, double rs) {
    ++evaluations_;
    const double w = delay_formula(ra, rs, log_half_eps_, theta, delta);
    if (std::isfinite(w)) {
      if (options_.observer) options_.observer(theta, delta, w);
      if (w < best_.w) best_ = {theta, delta, w, ra, rs};
    }
    return w;
  }

  // Best delta at fixed theta, searched in log(delta) over (0, gap / 2).
  double optimize_delta(double theta, double ra, double rs) {
    const double half_gap = (rs - ra) / 2.0;
    if (!(half_gap > 0.0)) return kInf;
    const double hi = std::log(half_gap);
    const double lo = hi - kDeltaDecades;
    auto f = [&](double u) { return evaluate(theta, std::exp(u), ra, rs); };
    return golden_section(f, lo, hi, options_.golden_rel_tol).second;
  }

  // Best theta in [theta_lo, theta_hi] at fixed delta, in log(theta).
  void optimize_theta(double theta_lo, double theta_hi, double delta) {
    auto f = [&](double u) {
      const double theta = std::exp(u);
      return evaluate(theta, delta, rho_a_(theta), rho_s_(theta));
    };
    golden_section(f, std::log(theta_lo), std::log(theta_hi), options_.golden_rel_tol);
  }

  const Point& best() const noexcept { return best_; }
  std::size_t evaluations() const noexcept { return evaluations_; }
  const RateFunction& rho_a() const noexcept { return rho_a_; }
  const RateFunction& rho_s() const noexcept { return rho_s_; }

 private:
  // Lower end of the delta bracket, in natural-log units below gap / 2.
  static constexpr double kDeltaDecades = 27.631021115928547;  // ln(1e12)

  const RateFunction& rho_a_;
  const RateFunction& rho_s_;
  double log_half_eps_;
  const OptimizerOptions& options_;
  Point best_;
  std::size_t evaluations_ = 0;
};

}  // namespace

double delay_bound_at(double rho_a, double rho_s, double epsilon, double theta, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (!(theta > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "theta and delta must be > 0");
  }
  if (!(rho_s - delta > rho_a + delta)) {
    throw Error(ErrorCode::StabilityViolated, "rho_s - delta must exceed rho_a + delta");
  }
  if (!(-std::expm1(-theta * delta) > 0.0)) {
    throw Error(ErrorCode::NumericUnderflow, "1 - exp(-theta delta) underflows");
  }
  return delay_formula(rho_a, rho_s, std::log(epsilon / 2.0), theta, delta);
}

DelayBoundResult optimize_delay_bound(const RateFunction& rho_a, const RateFunction& rho_s,
                                      double epsilon, double theta_max,
                                      const OptimizerOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  if (!(theta_max > 0.0) || options.grid_points < 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid theta range");
  }
  Search search(rho_a, rho_s, epsilon, options);

  const double theta_min = std::min(options.theta_min, theta_max);
  const int n = options.grid_points;
  const double log_lo = std::log(theta_min);
  const double log_hi = std::log(theta_max);
  const double step = n > 1 ? (log_hi - log_lo) / (n - 1) : 0.0;

  // Stage 1: theta grid, golden-section delta at each stable grid point.
  int best_index = -1;
  double best_w = kInf;
  for (int i = 0; i < n; ++i) {
    const double theta = i + 1 == n ? theta_max : std::exp(log_lo + step * i);
    const double ra = rho_a(theta);
    const double rs = rho_s(theta);
    if (!(rs - ra > 0.0)) continue;
    const double w = search.optimize_delta(theta, ra, rs);
    if (w < best_w) {
      best_w = w;
      best_index = i;
    }
  }

  DelayBoundResult result;
  if (best_index < 0 || !std::isfinite(search.best().w)) {
    result.evaluations = search.evaluations();
    return result;
  }

  // Stage 2: alternate theta (bracketed by the neighbouring grid points)
  // and delta until the improvement stalls.
  const double bracket = step > 0.0 ? step : 0.0;
  for (int round = 0; round < options.refine_rounds && bracket > 0.0; ++round) {
    const double before = search.best().w;
    const double log_theta = std::log(search.best().theta);
    const double t_lo = std::exp(std::max(log_lo, log_theta - bracket));
    const double t_hi = std::exp(std::min(log_hi, log_theta + bracket));
    search.optimize_theta(t_lo, t_hi, search.best().delta);
    const Point at = search.best();
    search.optimize_delta(at.theta, at.rho_a, at.rho_s);
    const double after = search.best().w;
    if (before - after < options.refine_rel_tol * before) break;
  }

  const Point& best = search.best();
  result.bound = DelayBound{best.w, SncParams{best.theta, best.delta}, best.rho_a, best.rho_s};
  result.evaluations = search.evaluations();
  return result;
}

DelayBoundResult optimize_delay_bound(const FlowSpec& flow, const ServiceModel& service,
                                      const OptimizerOptions& options) {
  // Quick rejection: rho_s <= mean service < mean arrival <= rho_a for all theta.
  if (service.mean_rate() <= mean_bit_rate(flow)) return {};
  RateFunction ra = [&flow](double theta) { return arrival_rho(flow, theta); };
  RateFunction rs = [&service](double theta) { return service.rho(theta); };
  return optimize_delay_bound(ra, rs, flow.violation_budget(), max_theta(flow), options);
}

}  // namespace sncslice

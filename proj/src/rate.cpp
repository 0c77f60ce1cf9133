#include "mldp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mldp/error.hpp"

namespace mldp {

std::optional<double> solve_increasing(const std::function<double(double)>& slope, double x,
                                       const SolverControl& ctrl) {
  if (!(ctrl.tol > 0.0) || !(ctrl.bracket_limit > 0.0) || ctrl.max_iter < 1) {
    throw Error(Errc::InvalidArgument, "solver control needs tol > 0, bracket_limit > 0");
  }
  if (!std::isfinite(x)) return std::nullopt;
  const double limit = ctrl.bracket_limit;
  if (!(x > slope(-limit) && x < slope(limit))) return std::nullopt;
  const double s0 = slope(0.0);
  if (s0 == x) return 0.0;

  // grow [0, edge] on the side of the root until slope(edge) passes x
  const double dir = x > s0 ? 1.0 : -1.0;
  double inner = 0.0;
  double edge = std::min(1.0, limit);
  while (true) {
    const double s = dir * slope(dir * edge);
    if (s == dir * x) return dir * edge;
    if (s > dir * x) break;
    if (edge >= limit) return std::nullopt;
    inner = edge;
    edge = std::min(2.0 * edge, limit);
  }
  double lo = dir > 0 ? inner : -edge;
  double hi = dir > 0 ? edge : -inner;
  for (int iter = 0; iter < ctrl.max_iter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= ctrl.tol * std::max(1.0, std::abs(mid))) return mid;
    const double s = slope(mid);
    if (s == x) return mid;
    (s < x ? lo : hi) = mid;
  }
  throw NonConvergence("bisection did not reach tolerance in " + std::to_string(ctrl.max_iter) +
                           " iterations",
                       lo, hi);
}

namespace {

RateValue out_of_domain(double x) {
  RateValue r;
  r.x = x;
  r.value = std::numeric_limits<double>::infinity();
  r.eta = std::numeric_limits<double>::quiet_NaN();
  r.in_domain = false;
  return r;
}

RateValue at_maximiser(const std::function<double(double)>& value, double x, double eta) {
  RateValue r;
  r.x = x;
  r.eta = eta;
  r.value = std::max(0.0, eta * x - value(eta));
  r.in_domain = true;
  return r;
}

}  // namespace

RateValue legendre_rate(const FreeEnergyEvaluator& f, double x, const SolverControl& ctrl) {
  const auto slope = [&f](double b) { return free_energy_derivative(f, b); };
  if (!f.slope) {
    // a differenced slope is only good to ~1e-9, which is enough to fake a
    // root near a saturated edge
    const double margin = ctrl.fd_edge_margin;
    if (!(x > slope(-ctrl.bracket_limit) + margin && x < slope(ctrl.bracket_limit) - margin)) {
      return out_of_domain(x);
    }
  }
  const std::optional<double> eta = solve_increasing(slope, x, ctrl);
  if (!eta) return out_of_domain(x);
  return at_maximiser(f.value, x, *eta);
}

RateValue symmetric_rate_closed(double y) {
  if (!(std::abs(y) < 1.0)) return out_of_domain(y);
  const double eta = std::atanh(y);
  return at_maximiser([](double b) { return symmetric_free_energy(b); }, y, eta);
}

double binary_entropy(double q) {
  if (q < 0.0 || q > 1.0) {
    throw Error(Errc::InvalidArgument, "entropy argument " + std::to_string(q) + " not in [0, 1]");
  }
  const auto xlogx = [](double t) { return t > 0.0 ? t * std::log(t) : 0.0; };
  return -xlogx(q) - xlogx(1.0 - q);
}

double symmetric_rate_entropy_form(double y) {
  return std::numbers::ln2 - binary_entropy(0.5 * (1.0 + y));
}

std::pair<double, double> weighted_domain(const WeightProfile& profile) {
  const double w = profile.abs_mean();
  return {-w, w};
}

RateValue weighted_rate(const WeightProfile& profile, double y, const SolverControl& ctrl) {
  const auto [lo, hi] = weighted_domain(profile);
  if (!(y > lo && y < hi)) return out_of_domain(y);
  return legendre_rate(weighted_evaluator(profile), y, ctrl);
}

RateValue general_rate(double r, const MultiplierVector& p, double x, const SeriesControl& series,
                       const SolverControl& ctrl) {
  RateValue out = legendre_rate(general_evaluator(r, p, series), x, ctrl);
  if (!out.in_domain) return out;
  SeriesControl doubled = series;
  doubled.num_terms *= 2;
  const RateValue finer = legendre_rate(general_evaluator(r, p, doubled), x, ctrl);
  out.eta_uncertainty = finer.in_domain ? std::abs(finer.eta - out.eta)
                                        : std::numeric_limits<double>::infinity();
  return out;
}

double fan_dimension_E(const WeightProfile& profile, double alpha, const SolverControl& ctrl) {
  const auto [lo, hi] = weighted_domain(profile);
  if (!(alpha > lo && alpha < hi)) {
    throw Error(Errc::OutOfSpectrumDomain,
                "alpha = " + std::to_string(alpha) + " outside (" + std::to_string(lo) + ", " +
                    std::to_string(hi) + ")");
  }
  const auto slope = [&profile](double l) { return weighted_free_energy_slope(profile, l); };
  const std::optional<double> lambda = solve_increasing(slope, alpha, ctrl);
  if (!lambda) {
    throw Error(Errc::OutOfSpectrumDomain,
                "alpha = " + std::to_string(alpha) + " not reached within the solver bracket");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const double u = *lambda * profile.values()[j];
    const double log_two_cosh = std::abs(u) + std::log1p(std::exp(-2.0 * std::abs(u)));
    s += profile.freqs()[j] * (log_two_cosh - u * std::tanh(u));
  }
  return s / std::numbers::ln2;
}

double mobius_spectrum_half_width() { return 6.0 / (std::numbers::pi * std::numbers::pi); }

double mobius_dimension_F(double alpha) {
  const double width = mobius_spectrum_half_width();
  if (!(std::abs(alpha) <= width)) {
    throw Error(Errc::OutOfSpectrumDomain,
                "alpha = " + std::to_string(alpha) + " outside [-6/pi^2, 6/pi^2]");
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double q = std::clamp(0.5 + pi2 / 12.0 * alpha, 0.0, 1.0);
  return 1.0 - 6.0 / pi2 + 6.0 / (pi2 * std::numbers::ln2) * binary_entropy(q);
}

}  // namespace mldp

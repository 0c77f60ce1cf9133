#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "mldp/free_energy.hpp"
#include "mldp/lattice.hpp"

namespace mldp {

struct SolverControl {
  double bracket_limit = 50.0;
  double tol = 1e-10;
  int max_iter = 200;
  // Evaluators without an analytic slope: x within this distance of
  // slope(+-bracket_limit) counts as out of domain.
  double fd_edge_margin = 1e-8;
};

// I(x) = sup_b (b x - F(b)).  When the supremum is not attained inside the
// bracket the point is out of domain: in_domain == false and value/eta are
// meaningless.
struct RateValue {
  double x = 0.0;
  double value = 0.0;
  double eta = 0.0;
  bool in_domain = false;
  // Spread of the maximiser attributable to series truncation (0 if exact).
  double eta_uncertainty = 0.0;
};

// Solves slope(eta) = x for a nondecreasing slope.  Returns nullopt when x is
// not strictly inside slope((-limit, limit)).  Throws NonConvergence.
std::optional<double> solve_increasing(const std::function<double(double)>& slope, double x,
                                       const SolverControl& ctrl = {});

RateValue legendre_rate(const FreeEnergyEvaluator& f, double x, const SolverControl& ctrl = {});

// I_{1/2}(y) = eta tanh(eta) - log cosh(eta) with y = tanh(eta).
RateValue symmetric_rate_closed(double y);

// H(q) = -q log q - (1 - q) log(1 - q) with H(0) = H(1) = 0.
double binary_entropy(double q);

// log 2 - H((1 + y) / 2); equal to symmetric_rate_closed(y).value on (-1, 1).
double symmetric_rate_entropy_form(double y);

RateValue weighted_rate(const WeightProfile& profile, double y, const SolverControl& ctrl = {});

// (-sum P_k |v_k|, +sum P_k |v_k|)
std::pair<double, double> weighted_domain(const WeightProfile& profile);

// Legendre transform of the truncated general free energy.  The maximiser is
// also computed with twice the number of terms and the gap is reported as
// eta_uncertainty.
RateValue general_rate(double r, const MultiplierVector& p, double x,
                       const SeriesControl& series = {}, const SolverControl& ctrl = {});

// Dimension of the level set of a weighted average with weight values v_j
// taken with frequencies p_j (the profile's freqs):
//   (1 / log 2) sum_j p_j (log(e^{l v_j} + e^{-l v_j}) - l v_j tanh(l v_j)),
// where l solves sum_j p_j v_j tanh(l v_j) = alpha.
double fan_dimension_E(const WeightProfile& profile, double alpha, const SolverControl& ctrl = {});

// Largest |alpha| accepted by mobius_dimension_F: 6 / pi^2.
double mobius_spectrum_half_width();

// 1 - 6/pi^2 + 6 / (pi^2 log 2) H(1/2 + pi^2 alpha / 12) for |alpha| <= 6/pi^2.
double mobius_dimension_F(double alpha);

}  // namespace mldp

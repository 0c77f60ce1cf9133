#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mldp/lattice.hpp"

namespace mldp {

struct SeriesControl {
  std::uint64_t num_terms = 100;
  bool report_tail = true;
};

// A truncated-series value and a bound on its distance to the full series
// (omitted tail plus summation rounding).
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

// Weight of free chains of length l in the infinite-volume limit,
// (P-1)^2 / P^{l+1}.
double chain_weight(std::uint64_t product, std::uint64_t ell);

// log cosh(beta) = log((e^b + e^-b) / 2), stable for large |beta|.
double symmetric_free_energy(double beta);

// Infinite-volume free energy under product Bernoulli(r) spins:
//   c(r) + (P-1)/P log|v.e+|^2 + log Lambda+ + sum_{l<=L} w_l log(1 + k rho^l)
// where the last sum is truncated at ctrl.num_terms.
SeriesValue asymptotic_free_energy(double r, const MultiplierVector& p, double beta,
                                   const SeriesControl& ctrl = {});

// Analytic derivative in beta of the truncated series.
double asymptotic_free_energy_slope(double r, const MultiplierVector& p, double beta,
                                    const SeriesControl& ctrl = {});

// (1/|box|) log E_r exp(beta S) on a finite box, summed chain by chain.
double finite_volume_free_energy(const BoxSpec& box, const MultiplierVector& p, double r,
                                 double beta);
double finite_volume_free_energy(const ChainCensus& census, double r, double beta);

class WeightProfile {
 public:
  // Frequencies must be nonnegative and sum to 1 within 1e-12; values distinct.
  static WeightProfile make(std::vector<double> values, std::vector<double> freqs);
  // Values (1, -1, 0) with frequencies (3/pi^2, 3/pi^2, 1 - 6/pi^2).
  static WeightProfile mobius();

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& freqs() const noexcept { return freqs_; }
  std::size_t size() const noexcept { return values_.size(); }
  // sum_k P_k |v_k|, the half-width of the mean's range.
  double abs_mean() const;
  bool has_zero_value() const;

 private:
  std::vector<double> values_;
  std::vector<double> freqs_;
};

// sum_k P_k log(e^{b v_k} + e^{-b v_k}) - log 2
double weighted_free_energy(const WeightProfile& profile, double beta);
double weighted_free_energy_slope(const WeightProfile& profile, double beta);

// (6 / pi^2) log cosh(beta)
double mobius_free_energy(double beta);

enum class BoundaryKind { Free, BC1, BC2, BCp };

const char* boundary_name(BoundaryKind kind) noexcept;
BoundaryKind parse_boundary(const std::string& name);

// BC2 and BCp need d = 2; the periodic series is truncated at ctrl.num_terms.
SeriesValue boundary_free_energy(BoundaryKind kind, const MultiplierVector& p, double beta,
                                 const SeriesControl& ctrl = {});
double boundary_free_energy_slope(BoundaryKind kind, const MultiplierVector& p, double beta,
                                  const SeriesControl& ctrl = {});

// A free-energy curve with optional closed-form derivative and tail bound.
struct FreeEnergyEvaluator {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> slope;       // empty: use finite differences
  std::function<double(double)> tail_bound;  // empty: exact
};

FreeEnergyEvaluator symmetric_evaluator();
FreeEnergyEvaluator general_evaluator(double r, const MultiplierVector& p,
                                      const SeriesControl& ctrl = {});
// Only r = 1/2 is supported: for other biases the per-weight transfer
// matrices do not commute.
FreeEnergyEvaluator weighted_evaluator(const WeightProfile& profile, double r = 0.5);
FreeEnergyEvaluator mobius_evaluator();
FreeEnergyEvaluator boundary_evaluator(BoundaryKind kind, const MultiplierVector& p,
                                       const SeriesControl& ctrl = {});

inline constexpr double kDerivativeStep = 1e-5;

// (-f(x+2s) + 8 f(x+s) - 8 f(x-s) + f(x-2s)) / (12 s)
double five_point_derivative(const std::function<double(double)>& f, double x,
                             double step = kDerivativeStep);

double free_energy_derivative(const FreeEnergyEvaluator& evaluator, double beta);

// Moebius function mu(n), n >= 1.
int mobius(std::uint64_t n);

// Weight field taking mu(m + 1) at the m-th site of every chain.
std::function<double(const Point&)> mobius_weight_field(const MultiplierVector& p);

struct ProfileEstimate {
  WeightProfile profile;
  std::uint64_t chains_checked = 0;
  double max_deviation = 0.0;  // worst per-chain frequency gap to the pooled one
  std::vector<std::string> warnings;
};

// Pooled value frequencies of a weight field over the box.  Chains with at
// least min_chain_length sites are compared against the pooled frequencies
// and a warning is attached when any gap exceeds tolerance.
ProfileEstimate estimate_profile(const BoxSpec& box, const MultiplierVector& p,
                                 const std::function<double(const Point&)>& weight,
                                 std::uint64_t min_chain_length = 8, double tolerance = 0.01);

}  // namespace mldp

#include "mldp/free_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "mldp/error.hpp"
#include "mldp/ising.hpp"

namespace mldp {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// log cosh x with log cosh 0 == 0 exactly
double log_cosh(double x) {
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  return ax - kLn2 + std::log1p(std::exp(-2.0 * ax));
}

void require_finite(double beta) {
  if (!std::isfinite(beta)) throw Error(Errc::NonFiniteInput, "beta must be finite");
}

// sum_{l > L} (P-1)^2/P^{l+1} * |log(1 + k x^l)| with |k x^l| <= k |x|^{L+1} < 1,
// using |log1p(y)| <= |y| / (1 - |y|).
double geometric_tail_bound(double product, double k, double x, std::uint64_t terms) {
  const double ax = std::abs(x);
  if (k == 0.0 || ax == 0.0) return 0.0;
  const double l1 = static_cast<double>(terms + 1);
  const double lead = k * std::pow(ax, l1);
  if (lead >= 1.0) return std::numeric_limits<double>::infinity();
  const double z = ax / product;
  return k * (product - 1.0) * (product - 1.0) / product / (1.0 - lead) * std::pow(z, l1) /
         (1.0 - z);
}

// Worst-case rounding of a sum of n + 3 doubles whose magnitudes add to mass.
double rounding_allowance(std::uint64_t n, double mass) {
  return static_cast<double>(n + 8) * std::numeric_limits<double>::epsilon() * mass;
}

}  // namespace

double chain_weight(std::uint64_t product, std::uint64_t ell) {
  const double big_p = static_cast<double>(product);
  return (big_p - 1.0) * (big_p - 1.0) / std::pow(big_p, static_cast<double>(ell + 1));
}

double symmetric_free_energy(double beta) {
  require_finite(beta);
  return log_cosh(beta);
}

SeriesValue asymptotic_free_energy(double r, const MultiplierVector& p, double beta,
                                   const SeriesControl& ctrl) {
  if (ctrl.num_terms < 1) throw Error(Errc::InvalidArgument, "num_terms must be >= 1");
  const BernoulliField field = field_from_bias(r);
  const TransferSpectrum spec = spectrum(beta, field);
  if (beta == 0.0) return {0.0, 0.0};
  const double big_p = static_cast<double>(p.product());

  const double bias_term = (2.0 * big_p - 1.0) / (2.0 * big_p) * std::log(r * (1.0 - r));
  const double overlap_term = (big_p - 1.0) / big_p * std::log(spec.overlap_sq);
  double value = bias_term + overlap_term + spec.log_lambda_plus;
  double mass = std::abs(bias_term) + std::abs(overlap_term) + std::abs(spec.log_lambda_plus);

  double series = 0.0;
  if (spec.excess != 0.0 && spec.ratio != 0.0) {
    double weight = (big_p - 1.0) * (big_p - 1.0) / (big_p * big_p);
    double power = 1.0;
    for (std::uint64_t ell = 1; ell <= ctrl.num_terms; ++ell) {
      power *= spec.ratio;
      const double term = weight * std::log1p(std::max(spec.excess * power, -1.0 + 1e-300));
      series += term;
      mass += std::abs(term);
      weight /= big_p;
    }
  }
  value += series;

  SeriesValue out{value, 0.0};
  if (ctrl.report_tail) {
    out.tail_bound = geometric_tail_bound(big_p, spec.excess, spec.ratio, ctrl.num_terms) +
                     rounding_allowance(ctrl.num_terms, mass);
  }
  return out;
}

double asymptotic_free_energy_slope(double r, const MultiplierVector& p, double beta,
                                    const SeriesControl& ctrl) {
  const BernoulliField field = field_from_bias(r);
  const TransferSpectrum spec = spectrum(beta, field);
  const double big_p = static_cast<double>(p.product());
  double weight = (big_p - 1.0) * (big_p - 1.0) / (big_p * big_p);
  double slope = 0.0;
  for (std::uint64_t ell = 1; ell <= ctrl.num_terms; ++ell) {
    slope += weight * chain_mgf_log_slope(spec, ell);
    weight /= big_p;
  }
  return slope;
}

double finite_volume_free_energy(const ChainCensus& census, double r, double beta) {
  require_finite(beta);
  const BernoulliField field = field_from_bias(r);
  if (beta == 0.0) return 0.0;
  double total = 0.0;
  for (const CensusRow& row : census.rows()) {
    if (row.count_free == 0) continue;
    total += static_cast<double>(row.count_free) * chain_mgf_log(beta, field, row.length);
  }
  return total / static_cast<double>(census.volume());
}

double finite_volume_free_energy(const BoxSpec& box, const MultiplierVector& p, double r,
                                 double beta) {
  return finite_volume_free_energy(census_closed_form(box, p), r, beta);
}

WeightProfile WeightProfile::make(std::vector<double> values, std::vector<double> freqs) {
  if (values.empty() || values.size() != freqs.size()) {
    throw Error(Errc::InvalidProfile, "need the same nonzero number of values and frequencies");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || !std::isfinite(freqs[k])) {
      throw Error(Errc::InvalidProfile, "non-finite entry in profile");
    }
    if (freqs[k] < 0.0) throw Error(Errc::InvalidProfile, "negative frequency");
    for (std::size_t j = 0; j < k; ++j) {
      if (values[j] == values[k]) throw Error(Errc::InvalidProfile, "repeated weight value");
    }
    total += freqs[k];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "frequencies sum to " << total << ", not 1";
    throw Error(Errc::InvalidProfile, msg.str());
  }
  WeightProfile out;
  out.values_ = std::move(values);
  out.freqs_ = std::move(freqs);
  return out;
}

WeightProfile WeightProfile::mobius() {
  const double half = 3.0 / (std::numbers::pi * std::numbers::pi);
  return make({1.0, -1.0, 0.0}, {half, half, 1.0 - 2.0 * half});
}

double WeightProfile::abs_mean() const {
  double s = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) s += freqs_[k] * std::abs(values_[k]);
  return s;
}

bool WeightProfile::has_zero_value() const {
  return std::find(values_.begin(), values_.end(), 0.0) != values_.end();
}

double weighted_free_energy(const WeightProfile& profile, double beta) {
  require_finite(beta);
  double s = 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    s += profile.freqs()[k] * log_cosh(beta * profile.values()[k]);
  }
  return s;
}

double weighted_free_energy_slope(const WeightProfile& profile, double beta) {
  require_finite(beta);
  double s = 0.0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double v = profile.values()[k];
    s += profile.freqs()[k] * v * std::tanh(beta * v);
  }
  return s;
}

double mobius_free_energy(double beta) {
  return 6.0 / (std::numbers::pi * std::numbers::pi) * symmetric_free_energy(beta);
}

const char* boundary_name(BoundaryKind kind) noexcept {
  switch (kind) {
    case BoundaryKind::Free: return "free";
    case BoundaryKind::BC1: return "bc1";
    case BoundaryKind::BC2: return "bc2";
    case BoundaryKind::BCp: return "bcp";
  }
  return "?";
}

BoundaryKind parse_boundary(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "free") return BoundaryKind::Free;
  if (s == "bc1") return BoundaryKind::BC1;
  if (s == "bc2") return BoundaryKind::BC2;
  if (s == "bcp") return BoundaryKind::BCp;
  throw Error(Errc::InvalidArgument, "unknown boundary kind '" + name + "' (free|bc1|bc2|bcp)");
}

namespace {

void require_planar(BoundaryKind kind, const MultiplierVector& p) {
  if ((kind == BoundaryKind::BC2 || kind == BoundaryKind::BCp) && p.dim() != 2) {
    throw Error(Errc::UnsupportedDimension, std::string(boundary_name(kind)) +
                                                " energy is only available for d = 2, got d = " +
                                                std::to_string(p.dim()));
  }
}

}  // namespace

SeriesValue boundary_free_energy(BoundaryKind kind, const MultiplierVector& p, double beta,
                                 const SeriesControl& ctrl) {
  require_finite(beta);
  require_planar(kind, p);
  if (kind == BoundaryKind::Free || kind == BoundaryKind::BC1) {
    return {symmetric_free_energy(beta), 0.0};
  }
  const double big_p = static_cast<double>(p.product());
  // log(e^b + e^-b) - (2P-1)/P log 2 == log cosh b - (P-1)/P log 2
  SeriesValue out{log_cosh(beta) - (big_p - 1.0) / big_p * kLn2, 0.0};
  if (kind == BoundaryKind::BC2) return out;

  const double t = std::tanh(beta);
  double weight = (big_p - 1.0) * (big_p - 1.0) / (big_p * big_p);
  double power = 1.0;
  double series = 0.0;
  double mass = std::abs(out.value);
  for (std::uint64_t ell = 1; ell <= ctrl.num_terms; ++ell) {
    power *= t;
    const double term = weight * std::log1p(power);
    series += term;
    mass += std::abs(term);
    weight /= big_p;
  }
  out.value += series;
  if (ctrl.report_tail) {
    out.tail_bound =
        geometric_tail_bound(big_p, 1.0, t, ctrl.num_terms) + rounding_allowance(ctrl.num_terms, mass);
  }
  return out;
}

double boundary_free_energy_slope(BoundaryKind kind, const MultiplierVector& p, double beta,
                                  const SeriesControl& ctrl) {
  require_finite(beta);
  require_planar(kind, p);
  const double t = std::tanh(beta);
  if (kind != BoundaryKind::BCp) return t;
  const double big_p = static_cast<double>(p.product());
  const double dt = 1.0 - t * t;
  double weight = (big_p - 1.0) * (big_p - 1.0) / (big_p * big_p);
  double power_lm1 = 1.0;  // t^{l-1}
  double s = t;
  for (std::uint64_t ell = 1; ell <= ctrl.num_terms; ++ell) {
    const double power = power_lm1 * t;
    s += weight * static_cast<double>(ell) * power_lm1 * dt / (1.0 + power);
    power_lm1 = power;
    weight /= big_p;
  }
  return s;
}

FreeEnergyEvaluator symmetric_evaluator() {
  return {"symmetric", [](double b) { return symmetric_free_energy(b); },
          [](double b) { return std::tanh(b); }, {}};
}

FreeEnergyEvaluator general_evaluator(double r, const MultiplierVector& p,
                                      const SeriesControl& ctrl) {
  field_from_bias(r);
  return {"general",
          [r, p, ctrl](double b) { return asymptotic_free_energy(r, p, b, ctrl).value; },
          {},
          [r, p, ctrl](double b) { return asymptotic_free_energy(r, p, b, ctrl).tail_bound; }};
}

FreeEnergyEvaluator weighted_evaluator(const WeightProfile& profile, double r) {
  field_from_bias(r);
  if (r != 0.5) {
    throw Error(Errc::UnsupportedBias,
                "weighted free energy is only available at r = 1/2; for other r the per-weight "
                "transfer matrices do not commute");
  }
  return {"weighted", [profile](double b) { return weighted_free_energy(profile, b); },
          [profile](double b) { return weighted_free_energy_slope(profile, b); }, {}};
}

FreeEnergyEvaluator mobius_evaluator() {
  const double c = 6.0 / (std::numbers::pi * std::numbers::pi);
  return {"mobius", [](double b) { return mobius_free_energy(b); },
          [c](double b) { return c * std::tanh(b); }, {}};
}

FreeEnergyEvaluator boundary_evaluator(BoundaryKind kind, const MultiplierVector& p,
                                       const SeriesControl& ctrl) {
  require_planar(kind, p);
  return {boundary_name(kind),
          [kind, p, ctrl](double b) { return boundary_free_energy(kind, p, b, ctrl).value; },
          [kind, p, ctrl](double b) { return boundary_free_energy_slope(kind, p, b, ctrl); },
          [kind, p, ctrl](double b) { return boundary_free_energy(kind, p, b, ctrl).tail_bound; }};
}

double five_point_derivative(const std::function<double(double)>& f, double x, double step) {
  return (-f(x + 2.0 * step) + 8.0 * f(x + step) - 8.0 * f(x - step) + f(x - 2.0 * step)) /
         (12.0 * step);
}

double free_energy_derivative(const FreeEnergyEvaluator& evaluator, double beta) {
  if (evaluator.slope) return evaluator.slope(beta);
  return five_point_derivative(evaluator.value, beta);
}

int mobius(std::uint64_t n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "mobius(0) is undefined");
  int sign = 1;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f != 0) continue;
    n /= f;
    if (n % f == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::function<double(const Point&)> mobius_weight_field(const MultiplierVector& p) {
  return [p](const Point& x) {
    Point y = x;
    std::uint64_t m = 0;
    while (!is_chain_start(y, p)) {
      for (std::size_t k = 0; k < y.size(); ++k) y[k] /= p[k];
      ++m;
    }
    return static_cast<double>(mobius(m + 1));
  };
}

ProfileEstimate estimate_profile(const BoxSpec& box, const MultiplierVector& p,
                                 const std::function<double(const Point&)>& weight,
                                 std::uint64_t min_chain_length, double tolerance) {
  const std::vector<Chain> chains = decompose_box(box, p);
  std::map<double, std::uint64_t> pooled;
  std::vector<std::vector<double>> long_chain_weights;
  for (const Chain& c : chains) {
    std::vector<double> ws;
    for (const Point& x : c.sites(p)) ws.push_back(weight(x));
    for (double w : ws) pooled[w] += 1;
    if (c.length >= min_chain_length) long_chain_weights.push_back(std::move(ws));
  }
  std::vector<double> values;
  std::vector<double> freqs;
  const double volume = static_cast<double>(box.volume());
  for (const auto& [v, n] : pooled) {
    values.push_back(v);
    freqs.push_back(static_cast<double>(n) / volume);
  }
  // renormalise so the pooled frequencies pass the sum-to-one check exactly
  double total = 0.0;
  for (double f : freqs) total += f;
  for (double& f : freqs) f /= total;

  ProfileEstimate out{WeightProfile::make(values, freqs), 0, 0.0, {}};
  for (const auto& ws : long_chain_weights) {
    ++out.chains_checked;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double f = static_cast<double>(std::count(ws.begin(), ws.end(), values[k])) /
                       static_cast<double>(ws.size());
      out.max_deviation = std::max(out.max_deviation, std::abs(f - freqs[k]));
    }
  }
  if (out.chains_checked == 0) {
    out.warnings.push_back("no chain has at least " + std::to_string(min_chain_length) +
                           " sites; per-chain frequencies were not checked");
  } else if (out.max_deviation > tolerance) {
    std::ostringstream msg;
    msg << "per-chain frequencies differ from pooled ones by up to " << out.max_deviation
        << " (tolerance " << tolerance << ")";
    out.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace mldp

#include "mldp/ising.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mldp/error.hpp"

namespace mldp {

BernoulliField field_from_bias(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(Errc::BiasOutOfRange, "r = " + std::to_string(r) + " is not in (0, 1)");
  }
  return BernoulliField{r, 0.5 * std::log(r / (1.0 - r))};
}

double bias_from_field(double h) {
  // e^{2h}/(1+e^{2h}) written to avoid overflow for large |h|
  return h >= 0 ? 1.0 / (1.0 + std::exp(-2.0 * h)) : std::exp(2.0 * h) / (1.0 + std::exp(2.0 * h));
}

TransferSpectrum spectrum(double beta, const BernoulliField& field) {
  if (!std::isfinite(beta) || !std::isfinite(field.h)) {
    throw Error(Errc::NonFiniteInput, "beta and h must be finite");
  }
  // Z is even in h, so everything is evaluated at a = |h|.
  const double a = std::abs(field.h);
  const double sh = std::sinh(a);
  const double ch = std::cosh(a);

  TransferSpectrum out;
  out.beta = beta;
  out.h = field.h;
  out.norm_sq = 2.0 * ch;

  // s = sqrt(sinh^2 a + e^{-4 beta}); scaled by e^{2 beta} when beta < 0.
  double denom = 0.0;  // (cosh a + s), possibly scaled
  if (beta >= 0.0) {
    const double x = std::exp(-2.0 * beta);
    const double s = std::hypot(sh, x);
    denom = ch + s;
    out.log_lambda_plus = beta + std::log(denom);
    out.tilt = x / (sh + s);
    out.ratio = -std::expm1(-4.0 * beta) / (denom * denom);
  } else {
    const double y = std::exp(2.0 * beta);
    const double s_scaled = std::hypot(sh * y, 1.0);
    denom = ch * y + s_scaled;
    out.log_lambda_plus = -beta + std::log(denom);
    out.tilt = 1.0 / (sh * y + s_scaled);
    out.ratio = std::expm1(4.0 * beta) / (denom * denom);
  }
  out.lambda_plus = std::exp(std::abs(beta)) * denom;
  // for beta < 0 the two eigenvalues nearly cancel; going through the trace
  // keeps both the sum and the product accurate
  out.lambda_minus = beta < 0.0 ? 2.0 * std::exp(beta) * ch - out.lambda_plus
                                : out.ratio * out.lambda_plus;

  const double q = out.tilt;
  const double up = std::exp(0.5 * a);
  const double down = std::exp(-0.5 * a);
  const double proj = up + q * down;
  out.overlap_sq = proj * proj / (1.0 + q * q);
  const double rel = (std::exp(-a) - q) / (1.0 + q * std::exp(-a));
  out.excess = rel * rel;
  return out;
}

double partition_function_log(double beta, const BernoulliField& field, std::uint64_t n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "partition function needs n >= 2 spins");
  const TransferSpectrum spec = spectrum(beta, field);
  const double ell = static_cast<double>(n - 1);
  const double corr = std::max(spec.excess * std::pow(spec.ratio, ell), -1.0 + 1e-300);
  return std::log(spec.overlap_sq) + ell * spec.log_lambda_plus + std::log1p(corr);
}

double partition_function_log_matrix(double beta, const BernoulliField& field, std::uint64_t n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "partition function needs n >= 2 spins");
  if (!std::isfinite(beta) || !std::isfinite(field.h)) {
    throw Error(Errc::NonFiniteInput, "beta and h must be finite");
  }
  const double h = field.h;
  const double shift = std::max(beta + std::abs(h), -beta);
  const double t11 = std::exp(beta + h - shift);
  const double t22 = std::exp(beta - h - shift);
  const double t12 = std::exp(-beta - shift);

  const double v1 = std::exp(0.5 * h);
  const double v2 = std::exp(-0.5 * h);
  double w1 = v1;
  double w2 = v2;
  double log_scale = 0.0;
  for (std::uint64_t k = 1; k < n; ++k) {
    const double n1 = t11 * w1 + t12 * w2;
    const double n2 = t12 * w1 + t22 * w2;
    const double m = std::max(std::abs(n1), std::abs(n2));
    w1 = n1 / m;
    w2 = n2 / m;
    log_scale += std::log(m);
  }
  return static_cast<double>(n - 1) * shift + log_scale + std::log(v1 * w1 + v2 * w2);
}

double chain_mgf_log(double beta, const BernoulliField& field, std::uint64_t ell) {
  if (ell < 1) throw Error(Errc::InvalidArgument, "chain length must be >= 1");
  if (beta == 0.0) return 0.0;
  const double prefactor = 0.5 * static_cast<double>(ell + 1) * std::log(field.r * (1.0 - field.r));
  return prefactor + partition_function_log(beta, field, ell + 1);
}

double chain_mgf_log(double beta, double r, std::uint64_t ell) {
  return chain_mgf_log(beta, field_from_bias(r), ell);
}

double chain_mgf_log_slope(const TransferSpectrum& spec, std::uint64_t ell) {
  if (ell < 1) throw Error(Errc::InvalidArgument, "chain length must be >= 1");
  // dZ/dbeta = sum_k v^T T^k T' T^{l-1-k} v expanded over the eigenbasis and
  // divided by lambda_plus^l.
  const double a = std::abs(spec.h);
  const double beta = spec.beta;
  const double q = spec.tilt;
  const double nrm = 1.0 + q * q;
  const double d11 = std::exp(beta + a - spec.log_lambda_plus);
  const double d22 = std::exp(beta - a - spec.log_lambda_plus);
  const double d12 = std::exp(-beta - spec.log_lambda_plus);
  const double mu_pp = (d11 - 2.0 * q * d12 + q * q * d22) / nrm;
  const double mu_mm = (q * q * d11 + 2.0 * q * d12 + d22) / nrm;
  const double mu_pm = (-q * d11 + (q * q - 1.0) * d12 + q * d22) / nrm;

  const double sq = std::sqrt(nrm);
  const double alpha_p = (std::exp(0.5 * a) + q * std::exp(-0.5 * a)) / sq;
  const double alpha_m = (std::exp(-0.5 * a) - q * std::exp(0.5 * a)) / sq;

  const double rho = spec.ratio;
  const double l = static_cast<double>(ell);
  double geometric = 0.0;  // sum_{k<l} rho^k
  double power = 1.0;
  for (std::uint64_t k = 0; k < ell; ++k) {
    geometric += power;
    power *= rho;
  }
  const double rho_lm1 = std::pow(rho, l - 1.0);
  const double num = alpha_p * alpha_p * mu_pp * l + 2.0 * alpha_p * alpha_m * mu_pm * geometric +
                     alpha_m * alpha_m * mu_mm * l * rho_lm1;
  const double den = alpha_p * alpha_p + alpha_m * alpha_m * rho_lm1 * rho;
  return num / den;
}

double chain_mgf_log_slope(double beta, const BernoulliField& field, std::uint64_t ell) {
  return chain_mgf_log_slope(spectrum(beta, field), ell);
}

}  // namespace mldp

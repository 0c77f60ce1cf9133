#pragma once

// One-dimensional Ising chain with free ends: transfer matrix
//   T = [[e^{b+h}, e^{-b}], [e^{-b}, e^{b-h}]],  v = (e^{h/2}, e^{-h/2}),
// Z(b, h, n) = v^T T^{n-1} v.

#include <cstdint>

namespace mldp {

struct BernoulliField {
  double r = 0.5;  // P(sigma = +1)
  double h = 0.0;  // 1/2 log(r / (1 - r))
};

BernoulliField field_from_bias(double r);
// Inverse map e^{2h} / (1 + e^{2h}).
double bias_from_field(double h);

struct TransferSpectrum {
  double beta = 0.0;
  double h = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double log_lambda_plus = 0.0;
  double ratio = 0.0;       // lambda_minus / lambda_plus, |ratio| < 1
  double overlap_sq = 0.0;  // |v^T e_+|^2
  double norm_sq = 0.0;     // |v|^2 = 2 cosh h
  // (norm_sq - overlap_sq) / overlap_sq, computed without cancellation
  double excess = 0.0;
  // Top eigenvector in the |h| frame is (1, tilt) / sqrt(1 + tilt^2).
  double tilt = 0.0;
};

// Throws NonFiniteInput for non-finite beta.
TransferSpectrum spectrum(double beta, const BernoulliField& field);

// log Z(beta, h, n) from the eigen-decomposition, n >= 2 spins.
double partition_function_log(double beta, const BernoulliField& field, std::uint64_t n);

// Same quantity by repeated (rescaled) multiplication with T.
double partition_function_log_matrix(double beta, const BernoulliField& field, std::uint64_t n);

// log E_r exp(beta * sum_{i<=l} tau_i tau_{i+1}) for l + 1 independent
// Bernoulli(r) spins; exactly 0 at beta = 0.
double chain_mgf_log(double beta, double r, std::uint64_t ell);
double chain_mgf_log(double beta, const BernoulliField& field, std::uint64_t ell);

// d/dbeta of chain_mgf_log, i.e. the mean bond energy of the tilted chain.
double chain_mgf_log_slope(double beta, const BernoulliField& field, std::uint64_t ell);
double chain_mgf_log_slope(const TransferSpectrum& spec, std::uint64_t ell);

}  // namespace mldp

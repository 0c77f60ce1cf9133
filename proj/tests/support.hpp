#pragma once

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mldp/error.hpp"
#include "mldp/lattice.hpp"

namespace testing {

inline mldp::MultiplierVector mv(std::vector<std::int64_t> raw, bool allow = false) {
  return mldp::validate_multipliers(raw, allow);
}

inline mldp::BoxSpec bx(std::vector<std::int64_t> sides) { return mldp::BoxSpec::make(sides); }

template <class F>
mldp::Errc code_of(F&& fn) {
  try {
    fn();
  } catch (const mldp::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return mldp::Errc::InvalidArgument;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// log of sum over spin strings of exp(beta sum s_i s_{i+1} + h sum s_i),
// summed term by term.
inline double ising_log_z_explicit(double beta, double h, int n) {
  long double z = 0.0L;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    long double e = 0.0L;
    for (int i = 0; i < n; ++i) {
      const int s = (mask >> i) & 1u ? 1 : -1;
      e += h * s;
      if (i + 1 < n) e += beta * s * (((mask >> (i + 1)) & 1u) ? 1 : -1);
    }
    z += std::exp(e);
  }
  return static_cast<double>(std::log(z));
}

// log E exp(beta sum_{k<ell} s_k s_{k+1}) for ell + 1 Bernoulli(r) spins, via
// a 2x2 forward recursion in long double.
inline double chain_log_mgf_recursion(double beta, double r, std::uint64_t ell) {
  long double up = r, down = 1.0L - r;
  long double shift = 0.0L;
  const long double ep = std::exp((long double)beta), em = std::exp(-(long double)beta);
  for (std::uint64_t k = 0; k < ell; ++k) {
    const long double nu = r * (up * ep + down * em);
    const long double nd = (1.0L - r) * (up * em + down * ep);
    const long double scale = nu + nd;
    up = nu / scale;
    down = nd / scale;
    shift += std::log(scale);
  }
  return static_cast<double>(shift + std::log(up + down));
}

}  // namespace testing

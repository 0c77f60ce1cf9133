#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mldp {

enum class Errc {
  NonPositiveEntry,
  AllOnes,
  NotPairwiseCoprime,
  DimensionMismatch,
  BoxTooLarge,
  Overflow,
  BiasOutOfRange,
  NonFiniteInput,
  InvalidProfile,
  UnsupportedBias,
  UnsupportedDimension,
  InvalidArgument,
  NonConvergence,
  OutOfSpectrumDomain,
  MissingSite,
  SupportTooLarge,
  InsufficientHits,
  ParseError,
};

const char* errc_name(Errc code) noexcept;

// Base of every error thrown by the library; `code()` identifies the
// violated precondition.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double lo, double hi)
      : Error(Errc::NonConvergence, what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

class InsufficientHits : public Error {
 public:
  InsufficientHits(const std::string& what, std::uint64_t hits)
      : Error(Errc::InsufficientHits, what), hits_(hits) {}
  std::uint64_t hits() const noexcept { return hits_; }

 private:
  std::uint64_t hits_;
};

}  // namespace mldp

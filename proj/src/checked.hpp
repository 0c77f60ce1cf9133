#pragma once

#include <cstdint>
#include <string>

#include "mldp/error.hpp"

namespace mldp::detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(Errc::Overflow, std::string(what) + " exceeds 64 bits");
  }
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(Errc::Overflow, std::string(what) + " exceeds 64 bits");
  }
  return out;
}

}  // namespace mldp::detail

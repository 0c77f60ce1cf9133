#include "mldp/lattice.hpp"

#include <cmath>
#include <numeric>

#include "checked.hpp"
#include "mldp/error.hpp"

namespace mldp {

MultiplierVector MultiplierVector::validate(std::span<const std::int64_t> raw,
                                            bool allow_non_coprime) {
  if (raw.empty()) {
    throw Error(Errc::InvalidArgument, "multiplier vector is empty");
  }
  MultiplierVector out;
  out.entries_.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] < 1) {
      throw Error(Errc::NonPositiveEntry,
                  "multiplier p_" + std::to_string(k + 1) + " = " + std::to_string(raw[k]));
    }
    out.entries_.push_back(static_cast<std::uint64_t>(raw[k]));
    out.product_ = detail::checked_mul(out.product_, out.entries_.back(), "multiplier product");
  }
  if (out.product_ < 2) {
    throw Error(Errc::AllOnes, "all multipliers are 1; the sum is deterministic");
  }
  for (std::size_t i = 0; i < out.entries_.size(); ++i) {
    for (std::size_t j = i + 1; j < out.entries_.size(); ++j) {
      if (std::gcd(out.entries_[i], out.entries_[j]) != 1) {
        std::string msg = "gcd(p_" + std::to_string(i + 1) + ", p_" + std::to_string(j + 1) +
                          ") = " + std::to_string(std::gcd(out.entries_[i], out.entries_[j]));
        if (!allow_non_coprime) {
          throw Error(Errc::NotPairwiseCoprime, msg);
        }
        if (!out.warning_) {
          out.warning_ = "multipliers not pairwise coprime (" + msg +
                         "); the free-energy formulas are not established for this case";
        }
      }
    }
  }
  return out;
}

MultiplierVector validate_multipliers(std::span<const std::int64_t> raw, bool allow_non_coprime) {
  return MultiplierVector::validate(raw, allow_non_coprime);
}

BoxSpec BoxSpec::make(std::span<const std::int64_t> sides) {
  if (sides.empty()) {
    throw Error(Errc::InvalidArgument, "box has no sides");
  }
  BoxSpec out;
  for (std::size_t k = 0; k < sides.size(); ++k) {
    if (sides[k] < 1) {
      throw Error(Errc::NonPositiveEntry,
                  "box side N_" + std::to_string(k + 1) + " = " + std::to_string(sides[k]));
    }
    out.sides_.push_back(static_cast<std::uint64_t>(sides[k]));
    out.volume_ = detail::checked_mul(out.volume_, out.sides_.back(), "box volume");
  }
  return out;
}

bool BoxSpec::contains(std::span<const std::uint64_t> x) const {
  if (x.size() != sides_.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < 1 || x[k] > sides_[k]) return false;
  }
  return true;
}

Point Chain::site(std::uint64_t m, const MultiplierVector& p) const {
  Point x = start;
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (std::uint64_t j = 0; j < m; ++j) {
      x[k] = detail::checked_mul(x[k], p[k], "chain site coordinate");
    }
  }
  return x;
}

std::vector<Point> Chain::sites(const MultiplierVector& p) const {
  std::vector<Point> out;
  out.reserve(length);
  Point x = start;
  for (std::uint64_t m = 0; m < length; ++m) {
    out.push_back(x);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] *= p[k];
  }
  return out;
}

bool is_chain_start(std::span<const std::uint64_t> x, const MultiplierVector& p) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (p[k] >= 2 && x[k] % p[k] != 0) return true;
  }
  return false;
}

namespace {

void check_dims(const BoxSpec& box, const MultiplierVector& p) {
  if (box.dim() != p.dim()) {
    throw Error(Errc::DimensionMismatch, "box has dimension " + std::to_string(box.dim()) +
                                             " but multipliers have " + std::to_string(p.dim()));
  }
}

// Number of sites x, x*p, x*p^2, ... inside the box.
std::uint64_t in_box_length(Point x, const BoxSpec& box, const MultiplierVector& p) {
  std::uint64_t len = 0;
  while (true) {
    ++len;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] > box[k] / p[k]) return len;
      x[k] *= p[k];
    }
  }
}

}  // namespace

std::vector<Chain> decompose_box(const BoxSpec& box, const MultiplierVector& p) {
  check_dims(box, p);
  if (box.volume() > kMaxEnumerableVolume) {
    throw Error(Errc::BoxTooLarge, "box volume " + std::to_string(box.volume()) +
                                       " exceeds enumeration limit " +
                                       std::to_string(kMaxEnumerableVolume));
  }
  std::vector<Chain> chains;
  const std::size_t d = box.dim();
  Point x(d, 1);
  while (true) {
    if (is_chain_start(x, p)) {
      chains.push_back(Chain{x, in_box_length(x, box, p)});
    }
    // odometer, last coordinate fastest
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (x[k] < box[k]) {
        ++x[k];
        break;
      }
      x[k] = 1;
      if (k == 0) return chains;
    }
  }
}

std::uint64_t divisible_count(const BoxSpec& box, const MultiplierVector& p, std::uint64_t m) {
  check_dims(box, p);
  std::uint64_t prod = 1;
  for (std::size_t k = 0; k < box.dim(); ++k) {
    std::uint64_t scale = 1;
    for (std::uint64_t j = 0; j < m && p[k] > 1; ++j) {
      if (scale > box[k] / p[k]) return 0;
      scale *= p[k];
    }
    prod *= box[k] / scale;  // bounded by the volume
  }
  return prod;
}

std::uint64_t count_all_chains(const BoxSpec& box, const MultiplierVector& p, std::uint64_t ell) {
  if (ell < 1) throw Error(Errc::InvalidArgument, "chain length must be >= 1");
  return divisible_count(box, p, ell - 1) - divisible_count(box, p, ell);
}

std::uint64_t count_free_chains(const BoxSpec& box, const MultiplierVector& p, std::uint64_t ell) {
  if (ell < 1) throw Error(Errc::InvalidArgument, "chain length must be >= 1");
  // starts with at least l sites minus starts with at least l+1 sites
  const std::uint64_t a0 = divisible_count(box, p, ell - 1);
  const std::uint64_t a1 = divisible_count(box, p, ell);
  const std::uint64_t a2 = divisible_count(box, p, ell + 1);
  return (a0 - a1) - (a1 - a2);
}

double asymptotic_chain_density(const MultiplierVector& p, std::uint64_t ell) {
  if (ell < 1) throw Error(Errc::InvalidArgument, "chain length must be >= 1");
  const double big_p = static_cast<double>(p.product());
  return (big_p - 1.0) * (big_p - 1.0) / std::pow(big_p, static_cast<double>(ell + 1));
}

double asymptotic_start_ratio(const MultiplierVector& p) {
  return 1.0 - 1.0 / static_cast<double>(p.product());
}

ChainCensus::ChainCensus(std::uint64_t volume, std::vector<CensusRow> rows)
    : volume_(volume), rows_(std::move(rows)) {}

std::uint64_t ChainCensus::count_all(std::uint64_t ell) const {
  return (ell >= 1 && ell <= rows_.size()) ? rows_[ell - 1].count_all : 0;
}

std::uint64_t ChainCensus::count_free(std::uint64_t ell) const {
  return (ell >= 1 && ell <= rows_.size()) ? rows_[ell - 1].count_free : 0;
}

bool ChainCensus::consistent() const {
  std::uint64_t sites = 0;
  std::uint64_t tiled = 0;
  for (const auto& row : rows_) {
    if (row.count_free > row.count_all) return false;
    sites += row.count_all;
    tiled += row.length * row.count_free;
  }
  return sites == volume_ && tiled == volume_;
}

ChainCensus census_closed_form(const BoxSpec& box, const MultiplierVector& p) {
  check_dims(box, p);
  std::vector<CensusRow> rows;
  std::uint64_t prev = divisible_count(box, p, 0);
  std::uint64_t cur = divisible_count(box, p, 1);
  for (std::uint64_t ell = 1; prev > 0; ++ell) {
    const std::uint64_t next = divisible_count(box, p, ell + 1);
    rows.push_back(CensusRow{ell, prev - cur, (prev - cur) - (cur - next)});
    prev = cur;
    cur = next;
  }
  return ChainCensus(box.volume(), std::move(rows));
}

ChainCensus census_from_chains(const BoxSpec& box, std::span<const Chain> chains) {
  std::uint64_t max_len = 0;
  for (const auto& c : chains) max_len = std::max(max_len, c.length);
  std::vector<CensusRow> rows(max_len);
  for (std::uint64_t ell = 1; ell <= max_len; ++ell) rows[ell - 1].length = ell;
  for (const auto& c : chains) {
    rows[c.length - 1].count_free += 1;
    // the chain's m-th site has c.length - m sites ahead of it
    for (std::uint64_t ell = 1; ell <= c.length; ++ell) rows[ell - 1].count_all += 1;
  }
  return ChainCensus(box.volume(), std::move(rows));
}

}  // namespace mldp

#pragma once

// Geometric chains i, i*p, i*p^2, ... inside a finite box of N^d and their
// census by in-box length.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mldp {

using Point = std::vector<std::uint64_t>;

// Componentwise multipliers p = (p_1, ..., p_d).  Entries equal to 1 are
// allowed; at least one entry is >= 2 and entries are pairwise coprime
// unless the override is requested, in which case warning() is set.
class MultiplierVector {
 public:
  static MultiplierVector validate(std::span<const std::int64_t> raw,
                                   bool allow_non_coprime = false);

  std::size_t dim() const noexcept { return entries_.size(); }
  std::span<const std::uint64_t> entries() const noexcept { return entries_; }
  std::uint64_t operator[](std::size_t k) const { return entries_[k]; }
  // P = p_1 * ... * p_d
  std::uint64_t product() const noexcept { return product_; }
  const std::optional<std::string>& warning() const noexcept { return warning_; }

 private:
  std::vector<std::uint64_t> entries_;
  std::uint64_t product_ = 1;
  std::optional<std::string> warning_;
};

MultiplierVector validate_multipliers(std::span<const std::int64_t> raw,
                                      bool allow_non_coprime = false);

class BoxSpec {
 public:
  static BoxSpec make(std::span<const std::int64_t> sides);

  std::size_t dim() const noexcept { return sides_.size(); }
  std::span<const std::uint64_t> sides() const noexcept { return sides_; }
  std::uint64_t operator[](std::size_t k) const { return sides_[k]; }
  std::uint64_t volume() const noexcept { return volume_; }
  bool contains(std::span<const std::uint64_t> x) const;

 private:
  std::vector<std::uint64_t> sides_;
  std::uint64_t volume_ = 1;
};

struct Chain {
  Point start;
  std::uint64_t length = 0;

  // The m-th site start * p^m (m = length gives the first point outside the box).
  Point site(std::uint64_t m, const MultiplierVector& p) const;
  std::vector<Point> sites(const MultiplierVector& p) const;
};

inline constexpr std::uint64_t kMaxEnumerableVolume = 100'000'000;

// True when some coordinate with p_j >= 2 is not divisible by p_j.
bool is_chain_start(std::span<const std::uint64_t> x, const MultiplierVector& p);

// All chains of the box, ordered lexicographically by start.  Throws
// BoxTooLarge above kMaxEnumerableVolume sites.
std::vector<Chain> decompose_box(const BoxSpec& box, const MultiplierVector& p);

// A_m = prod_k floor(N_k / p_k^m)
std::uint64_t divisible_count(const BoxSpec& box, const MultiplierVector& p, std::uint64_t m);

// |J_{N;l}|: box points whose forward in-box chain has exactly l sites.
std::uint64_t count_all_chains(const BoxSpec& box, const MultiplierVector& p, std::uint64_t ell);

// |K_{N;l}|: chain starts with exactly l sites in the box.
std::uint64_t count_free_chains(const BoxSpec& box, const MultiplierVector& p, std::uint64_t ell);

// (P-1)^2 / P^(l+1), the limiting density of free chains of length l.
double asymptotic_chain_density(const MultiplierVector& p, std::uint64_t ell);

// lim |K_{N;l}| / |J_{N;l}| = 1 - 1/P
double asymptotic_start_ratio(const MultiplierVector& p);

struct CensusRow {
  std::uint64_t length = 0;
  std::uint64_t count_all = 0;
  std::uint64_t count_free = 0;

  friend bool operator==(const CensusRow&, const CensusRow&) = default;
};

class ChainCensus {
 public:
  ChainCensus(std::uint64_t volume, std::vector<CensusRow> rows);

  std::uint64_t volume() const noexcept { return volume_; }
  std::uint64_t max_length() const noexcept { return rows_.size(); }
  // Rows for l = 1..max_length, in order.
  std::span<const CensusRow> rows() const noexcept { return rows_; }
  std::uint64_t count_all(std::uint64_t ell) const;
  std::uint64_t count_free(std::uint64_t ell) const;

  // sum_l |J_l| == volume and sum_l l |K_l| == volume and K_l <= J_l
  bool consistent() const;

  friend bool operator==(const ChainCensus&, const ChainCensus&) = default;

 private:
  std::uint64_t volume_;
  std::vector<CensusRow> rows_;
};

ChainCensus census_closed_form(const BoxSpec& box, const MultiplierVector& p);
ChainCensus census_from_chains(const BoxSpec& box, std::span<const Chain> chains);

}  // namespace mldp

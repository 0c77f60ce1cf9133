#pragma once

// Ground truth that does not go through the chain formulas: exhaustive
// enumeration of spin assignments, the exact r = 1/2 law of the sum, and
// seeded Monte Carlo.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mldp/lattice.hpp"

namespace mldp {

// Every site touched by the sum: the box together with its image p * box,
// in lexicographic order.
class ExtendedSupport {
 public:
  static ExtendedSupport make(const BoxSpec& box, const MultiplierVector& p);

  std::span<const Point> sites() const noexcept { return sites_; }
  std::uint64_t box_size() const noexcept { return box_size_; }
  std::uint64_t total_size() const noexcept { return sites_.size(); }
  std::optional<std::size_t> index_of(const Point& x) const;

 private:
  std::vector<Point> sites_;
  std::map<Point, std::size_t> index_;
  std::uint64_t box_size_ = 0;
};

// Spin values (+1/-1) indexed like ExtendedSupport::sites().
using Assignment = std::vector<std::int8_t>;

// S = sum_{i in box} sigma_i sigma_{p*i}, evaluated site by site.
std::int64_t multiple_sum(std::span<const std::int8_t> assignment, const ExtendedSupport& support,
                          const MultiplierVector& p, const BoxSpec& box);

inline constexpr std::uint64_t kMaxEnumeratedSupport = 22;

// Joint counts of (number of +1 spins, S) over all 2^T assignments.
struct EnumerationTally {
  std::uint64_t total_size = 0;
  std::uint64_t volume = 0;
  std::map<std::pair<std::uint64_t, std::int64_t>, std::uint64_t> counts;
};

EnumerationTally enumerate_assignments(const BoxSpec& box, const MultiplierVector& p);

// log sum_sigma P_r(sigma) exp(beta S(sigma)) with P(sigma = +1) = r.
double brute_force_mgf_log(const BoxSpec& box, const MultiplierVector& p, double r, double beta);
double brute_force_mgf_log(const EnumerationTally& tally, double r, double beta);

// Law of S under P_r from the enumeration.
std::map<std::int64_t, double> enumerated_distribution(const EnumerationTally& tally, double r);

// P(S = volume - 2k) = C(volume, k) / 2^volume.
std::map<std::int64_t, double> exact_symmetric_distribution(std::uint64_t volume);

// True when S / volume lies in [x - eps, x + eps] (endpoints included).
bool in_window(std::int64_t sum, std::uint64_t volume, double x, double eps);

// -(1 / volume) log P(S / volume in [x - eps, x + eps]) at r = 1/2.
double exact_symmetric_rate(std::uint64_t volume, double x, double eps);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> hits;
};

enum class McEstimator {
  // prod over chains of per-chain sample means of exp(beta S_chain)
  ChainFactorized,
  // sample mean of exp(beta S)
  Joint,
};

// Draws spins chain by chain (which covers the extended support exactly
// once) from the stream (seed, sample index).
class ChainSampler {
 public:
  ChainSampler(const BoxSpec& box, const MultiplierVector& p, double r);

  std::uint64_t volume() const noexcept { return volume_; }
  std::span<const std::uint32_t> chain_lengths() const noexcept { return lengths_; }
  std::uint64_t spin_count() const noexcept { return spin_count_; }

  // Fills bond_energy[c] = S_chain(c) and returns S for one sample.
  std::int64_t draw(std::uint64_t seed, std::uint64_t index, std::span<std::int32_t> bond_energy,
                    std::vector<std::uint64_t>& scratch) const;

 private:
  std::uint64_t volume_ = 0;
  std::uint64_t spin_count_ = 0;
  std::vector<std::uint32_t> lengths_;
  std::vector<std::uint64_t> offsets_;
  double r_ = 0.5;
  std::uint64_t threshold_ = 0;
};

// S for samples 0..n-1.
std::vector<std::int64_t> sample_sums(const BoxSpec& box, const MultiplierVector& p, double r,
                                      std::uint64_t samples, std::uint64_t seed);

// (1/|box|) log(mean of exp(beta S)) with a delta-method standard error.
McEstimate mc_free_energy(const BoxSpec& box, const MultiplierVector& p, double r, double beta,
                          std::uint64_t samples, std::uint64_t seed,
                          McEstimator estimator = McEstimator::ChainFactorized);

// -(1/|box|) log of the fraction of samples with S/|box| in [x - eps, x + eps].
// Throws InsufficientHits when fewer than 10 samples land in the window.
McEstimate empirical_rate(const BoxSpec& box, const MultiplierVector& p, double r, double x,
                          double eps, std::uint64_t samples, std::uint64_t seed);

}  // namespace mldp

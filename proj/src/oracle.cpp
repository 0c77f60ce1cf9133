#include "mldp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "mldp/error.hpp"
#include "mldp/ising.hpp"
#include "mldp/philox.hpp"

namespace mldp {

namespace {

// Calls fn(x) for every box point in lexicographic order.
template <typename Fn>
void for_each_box_point(const BoxSpec& box, Fn&& fn) {
  const std::size_t d = box.dim();
  Point x(d, 1);
  while (true) {
    fn(static_cast<const Point&>(x));
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (x[k] < box[k]) {
        ++x[k];
        break;
      }
      x[k] = 1;
      if (k == 0) return;
    }
  }
}

Point scaled(const Point& x, const MultiplierVector& p) {
  Point y = x;
  for (std::size_t k = 0; k < y.size(); ++k) y[k] *= p[k];
  return y;
}

double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

void require_bias(double r) { field_from_bias(r); }

}  // namespace

ExtendedSupport ExtendedSupport::make(const BoxSpec& box, const MultiplierVector& p) {
  if (box.dim() != p.dim()) {
    throw Error(Errc::DimensionMismatch, "box and multipliers differ in dimension");
  }
  if (box.volume() > kMaxEnumerableVolume) {
    throw Error(Errc::BoxTooLarge, "box too large for an explicit support");
  }
  std::set<Point> all;
  for_each_box_point(box, [&](const Point& x) {
    all.insert(x);
    all.insert(scaled(x, p));
  });
  ExtendedSupport out;
  out.box_size_ = box.volume();
  out.sites_.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < out.sites_.size(); ++i) out.index_.emplace(out.sites_[i], i);
  return out;
}

std::optional<std::size_t> ExtendedSupport::index_of(const Point& x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::int64_t multiple_sum(std::span<const std::int8_t> assignment, const ExtendedSupport& support,
                          const MultiplierVector& p, const BoxSpec& box) {
  if (assignment.size() != support.total_size()) {
    throw Error(Errc::MissingSite, "assignment has " + std::to_string(assignment.size()) +
                                       " spins, support has " +
                                       std::to_string(support.total_size()));
  }
  std::int64_t s = 0;
  for_each_box_point(box, [&](const Point& x) {
    const auto i = support.index_of(x);
    const auto j = support.index_of(scaled(x, p));
    if (!i || !j) throw Error(Errc::MissingSite, "site outside the extended support");
    s += static_cast<std::int64_t>(assignment[*i]) * assignment[*j];
  });
  return s;
}

EnumerationTally enumerate_assignments(const BoxSpec& box, const MultiplierVector& p) {
  const ExtendedSupport support = ExtendedSupport::make(box, p);
  const std::uint64_t t = support.total_size();
  if (t > kMaxEnumeratedSupport) {
    throw Error(Errc::SupportTooLarge, "extended support has " + std::to_string(t) +
                                           " sites (limit " +
                                           std::to_string(kMaxEnumeratedSupport) + ")");
  }
  // (i, p*i) index pairs, one per box site
  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  for_each_box_point(box, [&](const Point& x) {
    bonds.emplace_back(*support.index_of(x), *support.index_of(scaled(x, p)));
  });

  EnumerationTally tally;
  tally.total_size = t;
  tally.volume = box.volume();
  const std::uint64_t n = std::uint64_t{1} << t;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    std::int64_t s = 0;
    for (const auto& [a, b] : bonds) {
      s += (((mask >> a) ^ (mask >> b)) & 1u) ? -1 : 1;
    }
    tally.counts[{static_cast<std::uint64_t>(std::popcount(mask)), s}] += 1;
  }
  return tally;
}

double brute_force_mgf_log(const EnumerationTally& tally, double r, double beta) {
  require_bias(r);
  const double t = static_cast<double>(tally.total_size);
  std::vector<double> terms;
  terms.reserve(tally.counts.size());
  for (const auto& [key, count] : tally.counts) {
    const double plus = static_cast<double>(key.first);
    terms.push_back(std::log(static_cast<double>(count)) + plus * std::log(r) +
                    (t - plus) * std::log1p(-r) + beta * static_cast<double>(key.second));
  }
  return log_sum_exp(terms);
}

double brute_force_mgf_log(const BoxSpec& box, const MultiplierVector& p, double r, double beta) {
  return brute_force_mgf_log(enumerate_assignments(box, p), r, beta);
}

std::map<std::int64_t, double> enumerated_distribution(const EnumerationTally& tally, double r) {
  require_bias(r);
  const double t = static_cast<double>(tally.total_size);
  std::map<std::int64_t, double> out;
  for (const auto& [key, count] : tally.counts) {
    const double plus = static_cast<double>(key.first);
    out[key.second] += static_cast<double>(count) *
                       std::exp(plus * std::log(r) + (t - plus) * std::log1p(-r));
  }
  return out;
}

std::map<std::int64_t, double> exact_symmetric_distribution(std::uint64_t volume) {
  if (volume < 1 || volume > 1'000'000) {
    throw Error(Errc::InvalidArgument, "volume must be in [1, 10^6]");
  }
  const double v = static_cast<double>(volume);
  const double log_norm = std::lgamma(v + 1.0) - v * std::log(2.0);
  std::map<std::int64_t, double> out;
  for (std::uint64_t k = 0; k <= volume; ++k) {
    const double kd = static_cast<double>(k);
    const double lp = log_norm - std::lgamma(kd + 1.0) - std::lgamma(v - kd + 1.0);
    out[static_cast<std::int64_t>(volume) - 2 * static_cast<std::int64_t>(k)] = std::exp(lp);
  }
  return out;
}

bool in_window(std::int64_t sum, std::uint64_t volume, double x, double eps) {
  const double v = static_cast<double>(volume);
  const double s = static_cast<double>(sum);
  return s >= v * (x - eps) - 1e-9 && s <= v * (x + eps) + 1e-9;
}

double exact_symmetric_rate(std::uint64_t volume, double x, double eps) {
  if (volume < 1 || volume > 1'000'000) {
    throw Error(Errc::InvalidArgument, "volume must be in [1, 10^6]");
  }
  // window probabilities sink below the double range for large volumes
  const double v = static_cast<double>(volume);
  const double log_norm = std::lgamma(v + 1.0) - v * std::log(2.0);
  std::vector<double> terms;
  for (std::uint64_t k = 0; k <= volume; ++k) {
    const auto sum = static_cast<std::int64_t>(volume) - 2 * static_cast<std::int64_t>(k);
    if (!in_window(sum, volume, x, eps)) continue;
    const double kd = static_cast<double>(k);
    terms.push_back(log_norm - std::lgamma(kd + 1.0) - std::lgamma(v - kd + 1.0));
  }
  if (terms.empty()) return std::numeric_limits<double>::infinity();
  return -log_sum_exp(terms) / v;
}

ChainSampler::ChainSampler(const BoxSpec& box, const MultiplierVector& p, double r)
    : volume_(box.volume()), r_(r) {
  require_bias(r);
  const std::vector<Chain> chains = decompose_box(box, p);
  lengths_.reserve(chains.size());
  offsets_.reserve(chains.size());
  for (const Chain& c : chains) {
    if (c.length >= 63) throw Error(Errc::InvalidArgument, "chain too long for bit sampler");
    offsets_.push_back(spin_count_);
    lengths_.push_back(static_cast<std::uint32_t>(c.length));
    spin_count_ += c.length + 1;
  }
  if (r != 0.5) {
    const long double scaled_r = static_cast<long double>(r) * 18446744073709551616.0L;
    threshold_ = static_cast<std::uint64_t>(scaled_r);
  }
}

std::int64_t ChainSampler::draw(std::uint64_t seed, std::uint64_t index,
                                std::span<std::int32_t> bond_energy,
                                std::vector<std::uint64_t>& scratch) const {
  const std::size_t words = static_cast<std::size_t>(spin_count_ / 64 + 2);
  scratch.assign(words, 0);
  PhiloxStream stream(seed, index);
  // bit set <=> spin +1
  if (r_ == 0.5) {
    for (std::size_t w = 0; w + 1 < words; ++w) scratch[w] = stream.next();
  } else {
    for (std::uint64_t j = 0; j < spin_count_; ++j) {
      if (stream.next() < threshold_) scratch[j >> 6] |= std::uint64_t{1} << (j & 63);
    }
  }
  std::int64_t total = 0;
  for (std::size_t c = 0; c < lengths_.size(); ++c) {
    const std::uint64_t off = offsets_[c];
    const std::uint32_t len = lengths_[c];
    const std::size_t w = static_cast<std::size_t>(off >> 6);
    const unsigned b = static_cast<unsigned>(off & 63);
    std::uint64_t bits = scratch[w] >> b;
    if (b != 0) bits |= scratch[w + 1] << (64 - b);
    const std::uint64_t flips = (bits ^ (bits >> 1)) & ((std::uint64_t{1} << len) - 1);
    const std::int32_t e = static_cast<std::int32_t>(len) - 2 * std::popcount(flips);
    bond_energy[c] = e;
    total += e;
  }
  return total;
}

std::vector<std::int64_t> sample_sums(const BoxSpec& box, const MultiplierVector& p, double r,
                                      std::uint64_t samples, std::uint64_t seed) {
  const ChainSampler sampler(box, p, r);
  std::vector<std::int32_t> energy(sampler.chain_lengths().size());
  std::vector<std::uint64_t> scratch;
  std::vector<std::int64_t> out(samples);
  for (std::uint64_t k = 0; k < samples; ++k) out[k] = sampler.draw(seed, k, energy, scratch);
  return out;
}

McEstimate mc_free_energy(const BoxSpec& box, const MultiplierVector& p, double r, double beta,
                          std::uint64_t samples, std::uint64_t seed, McEstimator estimator) {
  require_bias(r);
  if (!std::isfinite(beta)) throw Error(Errc::NonFiniteInput, "beta must be finite");
  if (samples < 100) throw Error(Errc::InvalidArgument, "need at least 100 samples");
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  if (beta == 0.0) return est;

  const ChainSampler sampler(box, p, r);
  const auto lengths = sampler.chain_lengths();
  const double n = static_cast<double>(samples);
  const double volume = static_cast<double>(sampler.volume());
  std::vector<std::int32_t> energy(lengths.size());
  std::vector<std::uint64_t> scratch;

  if (estimator == McEstimator::Joint) {
    std::vector<double> exponents(samples);
    for (std::uint64_t k = 0; k < samples; ++k) {
      exponents[k] = beta * static_cast<double>(sampler.draw(seed, k, energy, scratch));
    }
    const double top = *std::max_element(exponents.begin(), exponents.end());
    double m1 = 0.0, m2 = 0.0;
    for (double e : exponents) {
      const double z = std::exp(e - top);
      m1 += z;
      m2 += z * z;
    }
    m1 /= n;
    m2 /= n;
    const double var = std::max(0.0, m2 - m1 * m1) * n / (n - 1.0);
    est.mean = (top + std::log(m1)) / volume;
    est.std_error = std::sqrt(var / n) / m1 / volume;
    return est;
  }

  // Histogram of each chain's bond energy; slot (l - e) / 2 of chain c.
  std::vector<std::uint64_t> slot_offset(lengths.size());
  std::uint64_t slots = 0;
  std::uint32_t max_len = 0;
  for (std::size_t c = 0; c < lengths.size(); ++c) {
    slot_offset[c] = slots;
    slots += lengths[c] + 1;
    max_len = std::max(max_len, lengths[c]);
  }
  std::vector<std::uint32_t> hist(slots, 0);
  for (std::uint64_t k = 0; k < samples; ++k) {
    sampler.draw(seed, k, energy, scratch);
    for (std::size_t c = 0; c < lengths.size(); ++c) {
      ++hist[slot_offset[c] + static_cast<std::uint32_t>(
                                  (static_cast<std::int32_t>(lengths[c]) - energy[c]) / 2)];
    }
  }

  // exp(beta * e) for e = -max_len..max_len
  std::vector<double> boltzmann(2 * max_len + 1);
  for (std::size_t i = 0; i < boltzmann.size(); ++i) {
    boltzmann[i] = std::exp(beta * (static_cast<double>(i) - max_len));
  }
  double log_sum = 0.0;
  double rel_var = 0.0;
  for (std::size_t c = 0; c < lengths.size(); ++c) {
    const std::int32_t len = static_cast<std::int32_t>(lengths[c]);
    double m1 = 0.0, m2 = 0.0;
    for (std::int32_t j = 0; j <= len; ++j) {
      const double cnt = hist[slot_offset[c] + j];
      if (cnt == 0.0) continue;
      const double z = boltzmann[static_cast<std::size_t>(len - 2 * j + static_cast<std::int32_t>(max_len))];
      m1 += cnt * z;
      m2 += cnt * z * z;
    }
    m1 /= n;
    m2 /= n;
    const double var = std::max(0.0, m2 - m1 * m1) * n / (n - 1.0);
    log_sum += std::log(m1);
    rel_var += var / (n * m1 * m1);
  }
  est.mean = log_sum / volume;
  est.std_error = std::sqrt(rel_var) / volume;
  return est;
}

McEstimate empirical_rate(const BoxSpec& box, const MultiplierVector& p, double r, double x,
                          double eps, std::uint64_t samples, std::uint64_t seed) {
  if (!(eps > 0.0)) throw Error(Errc::InvalidArgument, "eps must be positive");
  if (samples < 1) throw Error(Errc::InvalidArgument, "need at least one sample");
  const std::vector<std::int64_t> sums = sample_sums(box, p, r, samples, seed);
  std::uint64_t hits = 0;
  for (std::int64_t s : sums) hits += in_window(s, box.volume(), x, eps) ? 1 : 0;
  if (hits < 10) {
    throw InsufficientHits(std::to_string(hits) + " of " + std::to_string(samples) +
                               " samples fell in the window",
                           hits);
  }
  const double n = static_cast<double>(samples);
  const double frac = static_cast<double>(hits) / n;
  const double volume = static_cast<double>(box.volume());
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.hits = hits;
  est.mean = -std::log(frac) / volume;
  est.std_error = std::sqrt((1.0 - frac) / (n * frac)) / volume;
  return est;
}

}  // namespace mldp

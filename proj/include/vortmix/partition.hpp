#pragma once

// Small/large classification of a time window [0, t] from per-unit indices
// k_n (unit n is [n-1, n]).
//
// Intervals are closed with integer endpoints; unit n lies in L = [m, e] when
// m < n <= e. An interval L qualifies when
//   gamma_L = sum_{n in L} 2^{k_n} > beta(L),  beta(L) = beta |L| if |L| > T/2, else beta T/2,
// and a block [(j-1)T, jT] qualifies when 2^{k_{jT}} > beta' T. The T-closures
// of qualifying intervals are merged into connected components (touching
// closures merge), which are the large blocks; the remaining length-T blocks
// are small.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vortmix/rng.hpp"

namespace vortmix {

struct KVector {
  std::vector<int> values;  // values[n - 1] = k_n, all >= 0

  KVector() = default;
  explicit KVector(std::vector<int> v);
  int size() const { return static_cast<int>(values.size()); }
  int operator()(int n) const { return values[static_cast<std::size_t>(n - 1)]; }
  bool operator==(const KVector&) const = default;
};

struct PartitionParams {
  int T = 1;
  double beta = 1.0;
  double beta_prime = 0.5;
  double R = 1.0;

  // Throws Error(kInvalidArgument) unless T >= 1, 0 < beta' < beta and R > 0.
  void validate() const;
};

struct TimeInterval {
  int start = 0;
  int end = 0;
  int length() const { return end - start; }
  bool operator==(const TimeInterval&) const = default;
};

enum class BlockLabel { kSmall, kLarge };

struct Block {
  TimeInterval span;
  BlockLabel label = BlockLabel::kSmall;
  bool operator==(const Block&) const = default;
};

struct IntervalPartition {
  int window = 0;
  std::vector<Block> blocks;
  bool operator==(const IntervalPartition&) const = default;
};

// C^1 partition of unity on [0, inf): phi_0 = 1 on [0, 2R] and vanishes beyond
// 4R; phi_k for k >= 1 is supported in [2^k R, 2^{k+2} R].
double phi(int k, double x, double R);

// sum of 2^{k_n} over the units of L (0 for an empty L).
double gamma_L(const KVector& kv, TimeInterval L);

double beta_of(int length, const PartitionParams& params);

// gamma_L > beta(L)
bool interval_qualifies(const KVector& kv, TimeInterval L, const PartitionParams& params);
// 2^{k_{jT}} > beta' T for block j (1-based)
bool block_qualifies(const KVector& kv, int block, const PartitionParams& params);

// Requires kv.size() to be a positive multiple of T.
IntervalPartition classify(const KVector& kv, const PartitionParams& params);

struct BlockPropertyReport {
  std::size_t small_blocks = 0;
  std::size_t large_blocks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Small blocks: sum 2^{k_n} <= beta T and 2^{k_end} <= beta' T. Large blocks:
// J' = union of the T-closures inside J of intervals with gamma_L > beta(L),
// J'' = qualifying blocks inside J; checks J = J' u J'' and gamma_{J'} > beta |J'| / 4.
BlockPropertyReport verify_block_properties(const IntervalPartition& partition, const KVector& kv,
                             const PartitionParams& params);

struct ConcatenationResult {
  bool concatenation_matches = false;  // classify(k) equals the given partition
  bool constraints_hold = false;       // gamma_L <= beta(L) for every L straddling a boundary
  bool equivalent() const { return concatenation_matches == constraints_hold; }
};

// `partition` tiles [0, t] with T-aligned labeled blocks, kvs[i] indexes the
// units of block i. Throws Error(kPrecondition) unless classify(kvs[i]) is
// the single block i with its label. L straddles the boundary tau between
// blocks i and i+1 when L lies in their union and start < tau < end.
ConcatenationResult verify_concatenation(const IntervalPartition& partition, const std::vector<KVector>& kvs,
                             const PartitionParams& params);

struct ConcatenationScan {
  std::size_t vectors = 0;         // k-vectors enumerated
  std::size_t cases = 0;           // (k, partition) pairs meeting the precondition
  std::size_t both_true = 0;
  std::size_t both_false = 0;
  std::size_t counterexamples = 0;
};

// Every k in {0..max_entry}^(blocks*T) against every labeled partition of the
// window into T-aligned blocks with no two adjacent large blocks.
ConcatenationScan scan_concatenation(const PartitionParams& params, int blocks, int max_entry);

struct BlockPropertyScan {
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::vector<std::string> examples;  // first few violations
};

// Random k-vectors: window T * uniform{1..max_blocks}, entries geometric
// with parameter 1/2 capped at max_entry.
BlockPropertyScan scan_block_properties(const PartitionParams& params, std::size_t trials, int max_blocks,
                         int max_entry, Rng& rng);

// All labeled, T-aligned partitions of [0, blocks * T] without adjacent large blocks.
std::vector<IntervalPartition> admissible_partitions(int T, int blocks);

// prod_n phi_{k_n}(D_n)
double chi(const KVector& kv, std::span<const double> Dn, double R);
// k_n = argmax_k phi_k(D_n) (the smaller k on ties).
KVector dominant_kvector(std::span<const double> Dn, double R);

// Whitespace-separated nonnegative integers; Error(kConfig) otherwise.
KVector read_kvector(std::istream& in);
// One "start end label" line per block.
void write_partition(std::ostream& out, const IntervalPartition& partition);
std::string to_string(BlockLabel label);

}  // namespace vortmix

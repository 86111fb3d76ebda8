#pragma once

// Forward model of one pooled-testing round: Bernoulli infections, noisy pool
// readouts with P(negative | k infected members) = (1 - p_fp) * p_fn^k, NCOMP
// decoding and the resulting confusion tallies.

#include <cstdint>
#include <span>
#include <vector>

#include "multipool/bitvec.hpp"
#include "multipool/design.hpp"
#include "multipool/rng.hpp"

namespace multipool {

struct NoiseModel {
  double p_fp = 0.0;
  double p_fn = 0.0;

  /// Throws DomainError unless both probabilities lie in [0, 1].
  void validate() const;
  bool noiseless() const noexcept { return p_fp == 0.0 && p_fn == 0.0; }
  /// (1 - p_fp) * p_fn^k with 0^0 = 1.
  double p_negative(std::uint32_t load) const noexcept;
};

struct InfectionState {
  BitVector x;
  double rho = 0.0;
};

struct PoolResults {
  BitVector y;
};

struct DecodedResults {
  BitVector z;
  std::uint32_t nc = 0;
};

struct Tally {
  std::size_t positives = 0;        // T
  std::size_t false_positives = 0;  // T_fp
  std::size_t false_negatives = 0;  // T_fn
  std::size_t true_positives = 0;
  std::size_t true_negatives = 0;

  std::size_t infected() const noexcept { return true_positives + false_negatives; }
  friend bool operator==(const Tally&, const Tally&) = default;
};

/// Each entry independently Bernoulli(rho). Throws DomainError for rho outside [0, 1].
InfectionState sample_infections(std::size_t n, double rho, const SeedSpec& seed);

/// Number of infected items in every pool, (A X)_i.
std::vector<std::uint32_t> pool_loads(const PoolingMatrix& matrix, const InfectionState& state);

/// Independent per-pool readouts given the loads.
PoolResults sample_pool_results(std::span<const std::uint32_t> loads, const NoiseModel& noise, const SeedSpec& seed);

/// Number of positive pools containing each item, (A^T Y)_j.
std::vector<std::uint32_t> positive_pool_counts(const PoolingMatrix& matrix, const PoolResults& results);

/// Flag item j iff (A^T Y)_j >= m - nc. The matrix must have a constant column
/// sum m and 0 <= nc <= m; nc = 0 is COMP.
DecodedResults decode_ncomp(const PoolingMatrix& matrix, const PoolResults& results, std::uint32_t nc);

Tally tally(const InfectionState& state, const DecodedResults& decoded);

}  // namespace multipool

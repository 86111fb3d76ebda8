#pragma once

// Closed-form accuracy statistics of multipool designs decoded by NCOMP(nc).
//
// Everything is per item and depends on the design only through (q, m):
// constant pool size, constant multiplicity and pairwise overlap <= 1 make
// the m pools of an item independent given the item's own state.
//
//   gamma_k = (1 - p_fp) (1 - (1 - p_fn) rho)^(q - k)
//   sens    = P(Bin(m, p_fn gamma_1) <= nc)
//   spec    = P(Bin(m, gamma_1) > nc)
//
// Undefined conditional probabilities (zero-probability conditioning events)
// are returned as std::nullopt rather than NaN.

#include <cstdint>
#include <optional>

#include "multipool/model.hpp"

namespace multipool::analytics {

struct Scenario {
  double rho = 0.0;
  std::uint32_t q = 2;
  std::uint32_t m = 1;
  std::uint32_t nc = 0;
  NoiseModel noise;
  /// Item count; only scales expectations and variance bounds.
  std::size_t n = 0;

  /// Throws DomainError: rho in [0, 1], q >= 2, m >= 1, nc <= m, valid noise.
  void validate() const;
  bool noiseless_comp() const noexcept { return nc == 0 && noise.noiseless(); }
};

/// gamma_k for 0 <= k <= q; DomainError otherwise.
double gamma(std::uint32_t k, const Scenario& s);
double gamma1(const Scenario& s);

double sensitivity(const Scenario& s);
double specificity(const Scenario& s);
/// 1 - sensitivity and 1 - specificity, summed directly so small values keep
/// full relative precision.
double miss_probability(const Scenario& s);
double false_alarm_probability(const Scenario& s);

/// P(X_j = 0 | Z_j = 1). nullopt when P(Z_j = 1) = 0.
std::optional<double> type_one(const Scenario& s);
/// P(X_j = 1 | Z_j = 0). nullopt when P(Z_j = 0) = 0.
std::optional<double> type_two(const Scenario& s);

/// Same ratios from prevalence, sensitivity and specificity directly.
std::optional<double> type_one(double rho, double sens, double spec);
std::optional<double> type_two(double rho, double sens, double spec);

struct ExpectedCounts {
  double positives = 0.0;        // E[T]
  double false_positives = 0.0;  // E[T_fp]
  double false_negatives = 0.0;  // E[T_fn]
};

ExpectedCounts expected_counts(const Scenario& s);

struct VarianceBounds {
  double positives = 0.0;        // bound on Var[T]
  double false_positives = 0.0;  // bound on Var[T_fp]
};

/// Efron-Stein upper bounds on Var[T] and Var[T_fp]. Only proven for
/// noiseless COMP; any other scenario throws NotApplicable.
VarianceBounds variance_bounds(const Scenario& s);

/// 1 - (1 - rho)^(q - 1): probability that a pool is contaminated by one of
/// the other q - 1 members.
double beta(const Scenario& s);

/// Probability that flipping item i from 0 to 1 flips Z_j from 0 to 1 for an
/// item j sharing a pool with i (noiseless COMP).
double pivotal_probability(const Scenario& s);

struct TuneResult {
  double raw_bound = 0.0;
  std::uint32_t m = 0;
  double type_one = 0.0;
  double compression_ratio = 0.0;  // q / m
};

/// Smallest multiplicity with COMP Type I error <= epsilon. The integer is
/// verified against the closed form: type_one(m) <= epsilon and (m == 1 or
/// type_one(m - 1) > epsilon). Throws Infeasible (carrying the raw real
/// bound) when m would exceed `cap`, which defaults to q + 1.
TuneResult min_multiplicity(double rho, std::uint32_t q, const NoiseModel& noise, double epsilon,
                            std::optional<std::uint32_t> cap = std::nullopt);

/// (m - 1) / q^2
double threshold_disjunct(std::uint32_t q, std::uint32_t m);

/// Binary entropy in bits, H(0) = H(1) = 0.
double binary_entropy(double x);

/// The x in (0, 1/2] with H(x) = m / q, by bisection to 1e-12. NoSolution when m > q.
double threshold_info(std::uint32_t q, std::uint32_t m);

struct ConfusionStats {
  std::optional<double> sensitivity;  // TP / (TP + FN)
  std::optional<double> specificity;  // TN / (TN + FP)
  std::optional<double> type_one;     // FP / (FP + TP)
  std::optional<double> type_two;     // FN / (FN + TN)
};

/// Empirical ratios of one confusion table. Throws DomainError when the
/// tally is inconsistent with infected_count or n.
ConfusionStats confusion_stats(const Tally& tally, std::size_t infected_count, std::size_t n);

struct AnalyticReport {
  double gamma1 = 0.0;
  double sens = 0.0;
  double spec = 0.0;
  std::optional<double> type_one;
  std::optional<double> type_two;
  ExpectedCounts expected;
  std::optional<VarianceBounds> variance;  // empty outside noiseless COMP
  double beta = 0.0;
  double rho_disj = 0.0;
  std::optional<double> rho_info;  // empty when m > q
};

AnalyticReport analyze(const Scenario& s);

}  // namespace multipool::analytics

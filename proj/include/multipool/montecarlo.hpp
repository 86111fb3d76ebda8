#pragma once

// Seeded trial harness that estimates the per-item statistics empirically
// and compares them with the closed forms.
//
// Trial k draws all of its randomness from SeedSpec{master_seed, k}, and the
// aggregates are integer sums and histograms, so results are bit-identical
// for any thread count or execution order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multipool/analytics.hpp"
#include "multipool/design.hpp"

namespace multipool::mc {

struct ExperimentConfig {
  analytics::Scenario scenario;
  PoolingMatrix design;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  /// |z| above this fails a comparison.
  double z_threshold = 4.0;
  /// Variance rows pass when empirical <= bound + slack * SE(sample variance).
  double variance_slack = 5.0;

  /// Throws DomainError when the design's pool size, multiplicity or item
  /// count disagree with the scenario, or trials/threads are zero.
  void validate() const;
};

/// Config on the canonical (q^2, q, m)-multipool for the scenario's q and m;
/// sets scenario.n = q^2.
ExperimentConfig make_experiment(analytics::Scenario scenario, std::uint64_t trials, std::uint64_t master_seed);

struct Estimate {
  bool available = false;
  double value = 0.0;
  /// Standard error used for gating: the larger of the two below for ratio
  /// statistics, the plain standard error for means and variances.
  double se = 0.0;
  double se_binomial = 0.0;
  double se_clustered = 0.0;
  /// Conditioning events (item observations) or trials behind the estimate.
  std::uint64_t events = 0;
};

struct EmpiricalStats {
  std::uint64_t trials = 0;
  Estimate sens, spec, type_one, type_two;
  Estimate mean_T, mean_Tfp, mean_Tfn;
  Estimate var_T, var_Tfp;
  std::uint64_t total_positives = 0;
  std::uint64_t total_false_positives = 0;
  std::uint64_t total_true_positives = 0;
  std::uint64_t total_false_negatives = 0;
  std::uint64_t max_false_negatives = 0;
};

/// One trial: sample infections, pool loads, noisy results, NCOMP decode, tally.
Tally run_trial(const PoolingMatrix& design, const analytics::Scenario& scenario, const SeedSpec& seed);

EmpiricalStats run_experiment(const ExperimentConfig& config);

enum class RowStatus { Ok, Unavailable, NotApplicable };
const char* to_string(RowStatus status) noexcept;

struct ComparisonRow {
  std::string statistic;
  RowStatus status = RowStatus::Ok;
  std::optional<double> analytic;
  Estimate empirical;
  /// Binomial standard error implied by the analytic value. z uses the
  /// larger of this and the empirical standard error.
  std::optional<double> se_null;
  /// z-score rows only; infinite when both standard errors are zero but the
  /// values differ.
  std::optional<double> z;
  /// Variance rows only.
  std::optional<double> bound;
  std::optional<bool> bound_respected;
  bool pass = true;
};

struct ComparisonReport {
  analytics::Scenario scenario;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  std::size_t n = 0;
  std::size_t t = 0;
  double z_threshold = 0.0;
  double variance_slack = 0.0;
  std::vector<ComparisonRow> rows;
  EmpiricalStats empirical;
  bool all_pass = true;

  const ComparisonRow& row(const std::string& statistic) const;
};

ComparisonReport compare(const ExperimentConfig& config);

/// Deterministic JSON rendering (no timing or thread information).
std::string to_json(const ComparisonReport& report);

}  // namespace multipool::mc

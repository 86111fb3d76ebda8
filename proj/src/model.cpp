#include "multipool/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "multipool/errors.hpp"
#include "multipool/simd.hpp"

namespace multipool {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
}

}  // namespace

void NoiseModel::validate() const {
  check_probability(p_fp, "p_fp");
  check_probability(p_fn, "p_fn");
}

double NoiseModel::p_negative(std::uint32_t load) const noexcept {
  // std::pow(0.0, 0) == 1, which is the convention wanted for empty pools.
  return (1.0 - p_fp) * std::pow(p_fn, static_cast<double>(load));
}

InfectionState sample_infections(std::size_t n, double rho, const SeedSpec& seed) {
  check_probability(rho, "rho");
  InfectionState state{BitVector(n), rho};
  Rng rng(seed, StreamDomain::Infections);
  auto words = state.x.mutable_words();
  for (std::size_t j = 0; j < n; ++j) {
    if (rng.bernoulli(rho)) words[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
  return state;
}

std::vector<std::uint32_t> pool_loads(const PoolingMatrix& matrix, const InfectionState& state) {
  if (state.x.size() != matrix.n()) {
    throw DomainError("infection vector has length " + std::to_string(state.x.size()) + " but the matrix has " +
                      std::to_string(matrix.n()) + " items");
  }
  std::vector<std::uint32_t> loads(matrix.t());
  const std::size_t w = matrix.pool_words();
  simd::active().and_popcount_rows(matrix.pool_bits().data(), matrix.t(), w, state.x.words().data(), w, loads.data());
  return loads;
}

PoolResults sample_pool_results(std::span<const std::uint32_t> loads, const NoiseModel& noise, const SeedSpec& seed) {
  noise.validate();
  const std::uint32_t max_load = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
  std::vector<double> p_neg(max_load + 1);
  for (std::uint32_t k = 0; k <= max_load; ++k) p_neg[k] = noise.p_negative(k);

  PoolResults results{BitVector(loads.size())};
  Rng rng(seed, StreamDomain::PoolNoise);
  auto words = results.y.mutable_words();
  for (std::size_t i = 0; i < loads.size(); ++i) {
    if (!rng.bernoulli(p_neg[loads[i]])) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return results;
}

std::vector<std::uint32_t> positive_pool_counts(const PoolingMatrix& matrix, const PoolResults& results) {
  if (results.y.size() != matrix.t()) {
    throw DomainError("result vector has length " + std::to_string(results.y.size()) + " but the matrix has " +
                      std::to_string(matrix.t()) + " pools");
  }
  std::vector<std::uint32_t> counts(matrix.n());
  const std::size_t w = matrix.item_words();
  simd::active().and_popcount_rows(matrix.item_bits().data(), matrix.n(), w, results.y.words().data(), w,
                                   counts.data());
  return counts;
}

DecodedResults decode_ncomp(const PoolingMatrix& matrix, const PoolResults& results, std::uint32_t nc) {
  const auto m = matrix.uniform_multiplicity();
  if (!m) throw DomainError("NCOMP needs a matrix with constant column sum");
  if (nc > *m) throw DomainError("nc = " + std::to_string(nc) + " exceeds the multiplicity " + std::to_string(*m));
  const auto counts = positive_pool_counts(matrix, results);
  const std::uint32_t threshold = *m - nc;
  DecodedResults decoded{BitVector(matrix.n()), nc};
  auto words = decoded.z.mutable_words();
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] >= threshold) words[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
  return decoded;
}

Tally tally(const InfectionState& state, const DecodedResults& decoded) {
  if (state.x.size() != decoded.z.size()) throw DomainError("infection and decoded vectors differ in length");
  const auto& k = simd::active();
  const auto x = state.x.words();
  const auto z = decoded.z.words();
  Tally t;
  t.positives = k.popcount(z.data(), z.size());
  t.false_positives = k.andnot_popcount(z.data(), x.data(), z.size());
  t.false_negatives = k.andnot_popcount(x.data(), z.data(), x.size());
  t.true_positives = t.positives - t.false_positives;
  t.true_negatives = state.x.size() - t.positives - t.false_negatives;
  return t;
}

}  // namespace multipool

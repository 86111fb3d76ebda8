#include "multipool/design.hpp"

#include <algorithm>

#include "multipool/errors.hpp"
#include "multipool/simd.hpp"

namespace multipool {

PoolingMatrix::PoolingMatrix(std::size_t n, std::vector<std::vector<std::uint32_t>> pools,
                             std::vector<PoolLabel> labels, std::optional<std::uint32_t> q,
                             std::optional<std::uint32_t> m)
    : n_(n), pools_(std::move(pools)), membership_(n), labels_(std::move(labels)), q_(q), m_(m) {
  if (!labels_.empty() && labels_.size() != pools_.size()) {
    throw DomainError("expected " + std::to_string(pools_.size()) + " pool labels, got " +
                      std::to_string(labels_.size()));
  }
  const std::size_t pw = pool_words();
  const std::size_t iw = item_words();
  pool_bits_.assign(pools_.size() * pw, 0);
  item_bits_.assign(n_ * iw, 0);
  for (std::size_t i = 0; i < pools_.size(); ++i) {
    for (std::uint32_t j : pools_[i]) {
      if (j >= n_) {
        throw DomainError("pool " + std::to_string(i) + " references item " + std::to_string(j) + " but n = " +
                          std::to_string(n_));
      }
      std::uint64_t& word = pool_bits_[i * pw + (j >> 6)];
      const std::uint64_t bit = std::uint64_t{1} << (j & 63);
      if (word & bit) throw DomainError("pool " + std::to_string(i) + " lists item " + std::to_string(j) + " twice");
      word |= bit;
      item_bits_[j * iw + (i >> 6)] |= std::uint64_t{1} << (i & 63);
      membership_[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  if (n_ > 0) {
    const std::size_t m0 = membership_.front().size();
    if (std::all_of(membership_.begin(), membership_.end(), [&](const auto& v) { return v.size() == m0; })) {
      uniform_m_ = static_cast<std::uint32_t>(m0);
    }
  }
  if (!pools_.empty()) {
    const std::size_t q0 = pools_.front().size();
    if (std::all_of(pools_.begin(), pools_.end(), [&](const auto& v) { return v.size() == q0; })) {
      uniform_q_ = static_cast<std::uint32_t>(q0);
    }
  }
}

bool PoolingMatrix::contains(std::size_t pool, std::size_t item) const {
  if (pool >= t() || item >= n_) throw DomainError("matrix index out of range");
  return (pool_bits_[pool * pool_words() + (item >> 6)] >> (item & 63)) & 1U;
}

PoolingMatrix build_multipool(const MultipoolParams& params) {
  const std::uint32_t q = params.q;
  const std::uint32_t m = params.m;
  if (!gf::is_supported_order(q)) throw UnsupportedField("unsupported field order " + std::to_string(q));
  if (m == 0) throw DesignBound("multiplicity must be at least 1");
  if (m > q + 1) {
    throw DesignBound("multiplicity exceeds q+1: m = " + std::to_string(m) + " but the maximal multiplicity for q = " +
                      std::to_string(q) + " is " + std::to_string(q + 1));
  }
  const gf::Field field(gf::PrimePower::from_order(q));
  const std::uint32_t sloped_layers = std::min(m, q);

  std::vector<std::vector<std::uint32_t>> pools;
  std::vector<PoolLabel> labels;
  pools.reserve(params.t());
  labels.reserve(params.t());
  for (std::uint32_t a = 0; a < sloped_layers; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      std::vector<std::uint32_t> pool(q);
      for (std::uint32_t x = 0; x < q; ++x) {
        const gf::FieldElem y = field.add(field.mul(gf::FieldElem{a}, gf::FieldElem{x}), gf::FieldElem{b});
        pool[x] = q * x + y.index;
      }
      pools.push_back(std::move(pool));
      labels.push_back(PoolLabel{gf::FieldElem{a}, gf::FieldElem{b}});
    }
  }
  if (m == q + 1) {
    for (std::uint32_t c = 0; c < q; ++c) {
      std::vector<std::uint32_t> pool(q);
      for (std::uint32_t y = 0; y < q; ++y) pool[y] = q * c + y;
      pools.push_back(std::move(pool));
      labels.push_back(PoolLabel{std::nullopt, gf::FieldElem{c}});
    }
  }
  return PoolingMatrix(params.n(), std::move(pools), std::move(labels), q, m);
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::RowSum:
      return "row_sum";
    case ViolationKind::ColumnSum:
      return "column_sum";
    case ViolationKind::Overlap:
      return "overlap";
  }
  return "unknown";
}

ValidationReport validate_multipool(const PoolingMatrix& matrix, std::uint32_t q, std::uint32_t m) {
  ValidationReport report;
  report.row_sums.reserve(matrix.t());
  for (std::size_t i = 0; i < matrix.t(); ++i) {
    const auto size = static_cast<std::uint32_t>(matrix.pool(i).size());
    report.row_sums.push_back(size);
    if (size != q) report.violations.push_back({ViolationKind::RowSum, {i}, size});
  }
  report.col_sums.reserve(matrix.n());
  for (std::size_t j = 0; j < matrix.n(); ++j) {
    const auto size = static_cast<std::uint32_t>(matrix.memberships(j).size());
    report.col_sums.push_back(size);
    if (size != m) report.violations.push_back({ViolationKind::ColumnSum, {j}, size});
  }

  const auto& kernels = simd::active();
  const std::size_t w = matrix.item_words();
  const std::uint64_t* bits = matrix.item_bits().data();
  for (std::size_t j = 0; j < matrix.n(); ++j) {
    for (std::size_t k = j + 1; k < matrix.n(); ++k) {
      const auto overlap = static_cast<std::uint32_t>(kernels.and_popcount(bits + j * w, bits + k * w, w));
      report.max_pairwise_overlap = std::max(report.max_pairwise_overlap, overlap);
      if (overlap > 1) report.violations.push_back({ViolationKind::Overlap, {j, k}, overlap});
    }
  }
  report.is_multipool = report.violations.empty();
  return report;
}

std::uint64_t max_pools_bound(std::uint32_t q, std::uint64_t n) {
  if (q < 2) throw DomainError("pool size must be at least 2");
  if (n < q) throw DomainError("item count must be at least the pool size");
  return (n * (n - 1)) / (std::uint64_t{q} * (q - 1));
}

}  // namespace multipool

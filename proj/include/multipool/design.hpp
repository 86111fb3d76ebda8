#pragma once

// (n, q, m)-multipool pooling matrices.
//
// A multipool has constant pool size q (row sums), constant multiplicity m
// (column sums), and any two items share at most one pool. The builder uses
// the lines of the affine plane F_q^2: item (x, y) has column index
// q*index(x) + index(y); the pool {(x, a*x + b)} of slope a has row index
// layer(a)*q + index(b), and for m = q+1 the vertical pools {(c, y)} form the
// last layer.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multipool/bitvec.hpp"
#include "multipool/gf.hpp"

namespace multipool {

struct MultipoolParams {
  std::uint32_t q = 0;
  std::uint32_t m = 0;

  std::size_t n() const noexcept { return std::size_t{q} * q; }
  std::size_t t() const noexcept { return std::size_t{m} * q; }
  /// n / t = q / m
  double compression_ratio() const noexcept { return static_cast<double>(q) / static_cast<double>(m); }
};

/// Slope and intercept of the line a pool was built from. An empty slope is
/// the vertical direction (slope "infinity").
struct PoolLabel {
  std::optional<gf::FieldElem> slope;
  gf::FieldElem intercept;

  bool is_vertical() const noexcept { return !slope.has_value(); }
  friend bool operator==(const PoolLabel&, const PoolLabel&) = default;
};

/// Binary t x n incidence structure held in both orientations, plus packed
/// bit rows for the popcount kernels.
class PoolingMatrix {
 public:
  PoolingMatrix() = default;

  /// Throws DomainError when an item index is >= n, an item repeats inside a
  /// pool, or labels is non-empty with a size other than pools.size().
  PoolingMatrix(std::size_t n, std::vector<std::vector<std::uint32_t>> pools, std::vector<PoolLabel> labels = {},
                std::optional<std::uint32_t> q = std::nullopt, std::optional<std::uint32_t> m = std::nullopt);

  std::size_t n() const noexcept { return n_; }
  std::size_t t() const noexcept { return pools_.size(); }

  const std::vector<std::vector<std::uint32_t>>& pools() const noexcept { return pools_; }
  std::span<const std::uint32_t> pool(std::size_t i) const { return pools_.at(i); }
  const std::vector<std::vector<std::uint32_t>>& item_membership() const noexcept { return membership_; }
  std::span<const std::uint32_t> memberships(std::size_t j) const { return membership_.at(j); }
  const std::vector<PoolLabel>& labels() const noexcept { return labels_; }

  /// Parameters recorded by the builder or read from a file, if any.
  std::optional<std::uint32_t> declared_q() const noexcept { return q_; }
  std::optional<std::uint32_t> declared_m() const noexcept { return m_; }

  /// Common column sum when every item lies in the same number of pools.
  std::optional<std::uint32_t> uniform_multiplicity() const noexcept { return uniform_m_; }
  /// Common row sum when every pool has the same size.
  std::optional<std::uint32_t> uniform_pool_size() const noexcept { return uniform_q_; }

  std::size_t pool_words() const noexcept { return words_for(n_); }
  std::size_t item_words() const noexcept { return words_for(pools_.size()); }
  /// Row-major t x pool_words() bit matrix; bit j of row i set iff item j is in pool i.
  std::span<const std::uint64_t> pool_bits() const noexcept { return pool_bits_; }
  /// Row-major n x item_words() bit matrix (the transpose).
  std::span<const std::uint64_t> item_bits() const noexcept { return item_bits_; }

  bool contains(std::size_t pool, std::size_t item) const;

  friend bool operator==(const PoolingMatrix& a, const PoolingMatrix& b) {
    return a.n_ == b.n_ && a.pools_ == b.pools_ && a.labels_ == b.labels_ && a.q_ == b.q_ && a.m_ == b.m_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<std::uint32_t>> pools_;
  std::vector<std::vector<std::uint32_t>> membership_;
  std::vector<PoolLabel> labels_;
  std::optional<std::uint32_t> q_;
  std::optional<std::uint32_t> m_;
  std::optional<std::uint32_t> uniform_m_;
  std::optional<std::uint32_t> uniform_q_;
  std::vector<std::uint64_t> pool_bits_;
  std::vector<std::uint64_t> item_bits_;
};

/// Build the canonical (q^2, q, m)-multipool. Throws DesignBound when
/// m > q+1 (or m == 0) and UnsupportedField for unsupported q.
PoolingMatrix build_multipool(const MultipoolParams& params);

enum class ViolationKind { RowSum, ColumnSum, Overlap };

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  /// Pool index for RowSum, item index for ColumnSum, item pair for Overlap.
  std::vector<std::size_t> indices;
  /// The offending sum or scalar product.
  std::uint32_t value = 0;
};

struct ValidationReport {
  bool is_multipool = false;
  std::vector<std::uint32_t> row_sums;
  std::vector<std::uint32_t> col_sums;
  std::uint32_t max_pairwise_overlap = 0;
  std::vector<Violation> violations;
};

/// Check every row sum equals q, every column sum equals m and every pair of
/// columns has scalar product <= 1. Failures are collected, never thrown.
ValidationReport validate_multipool(const PoolingMatrix& matrix, std::uint32_t q, std::uint32_t m);

/// floor(n(n-1) / (q(q-1))): the largest pool count of any design with pools
/// of size q in which two items share at most one pool.
std::uint64_t max_pools_bound(std::uint32_t q, std::uint64_t n);

}  // namespace multipool

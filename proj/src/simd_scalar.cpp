#include <bit>

#include "multipool/simd.hpp"

namespace multipool::simd::scalar {

namespace {

std::uint64_t popcount(const std::uint64_t* a, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i]));
  return total;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return total;
}

std::uint64_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i] & ~b[i]));
  return total;
}

void and_popcount_rows(const std::uint64_t* rows, std::size_t nrows, std::size_t stride, const std::uint64_t* v,
                       std::size_t n, std::uint32_t* out) {
  for (std::size_t r = 0; r < nrows; ++r) {
    out[r] = static_cast<std::uint32_t>(and_popcount(rows + r * stride, v, n));
  }
}

}  // namespace

const KernelTable kTable{Backend::Scalar, "scalar", popcount, and_popcount, andnot_popcount, and_popcount_rows};

}  // namespace multipool::simd::scalar

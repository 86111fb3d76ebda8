#include <arm_neon.h>

#include "multipool/simd.hpp"

namespace multipool::simd::neon {

namespace {

inline std::uint64_t count2(uint64x2_t v) { return vaddlvq_u8(vcntq_u8(vreinterpretq_u8_u64(v))); }

std::uint64_t popcount(const std::uint64_t* a, std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) total += count2(vld1q_u64(a + i));
  for (; i < n; ++i) total += static_cast<std::uint64_t>(__builtin_popcountll(a[i]));
  return total;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) total += count2(vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  for (; i < n; ++i) total += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & b[i]));
  return total;
}

std::uint64_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  // vbicq_u64(x, y) computes x & ~y.
  for (; i + 2 <= n; i += 2) total += count2(vbicq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  for (; i < n; ++i) total += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & ~b[i]));
  return total;
}

void and_popcount_rows(const std::uint64_t* rows, std::size_t nrows, std::size_t stride, const std::uint64_t* v,
                       std::size_t n, std::uint32_t* out) {
  for (std::size_t r = 0; r < nrows; ++r) out[r] = static_cast<std::uint32_t>(and_popcount(rows + r * stride, v, n));
}

}  // namespace

const KernelTable kTable{Backend::Neon, "neon", popcount, and_popcount, andnot_popcount, and_popcount_rows};

}  // namespace multipool::simd::neon

// Built with -mavx2 -mpopcnt; only reached after a runtime CPU check.

#include <immintrin.h>

#include "multipool/simd.hpp"

namespace multipool::simd::avx2 {

namespace {

// Nibble-table popcount: per-byte counts via vpshufb, folded to four u64 lanes by vpsadbw.
inline __m256i popcount_lanes(__m256i v) {
  const __m256i lookup =
      _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  const __m128i s = _mm_add_epi64(_mm256_castsi256_si128(acc), _mm256_extracti128_si256(acc, 1));
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) + static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

inline __m256i load(const std::uint64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

std::uint64_t popcount(const std::uint64_t* a, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, popcount_lanes(load(a + i)));
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i]));
  return total;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_and_si256(load(a + i), load(b + i))));
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & b[i]));
  return total;
}

std::uint64_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  // _mm256_andnot_si256(x, y) computes ~x & y.
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_andnot_si256(load(b + i), load(a + i))));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(a[i] & ~b[i]));
  return total;
}

void and_popcount_rows(const std::uint64_t* rows, std::size_t nrows, std::size_t stride, const std::uint64_t* v,
                       std::size_t n, std::uint32_t* out) {
  if (n < 4) {
    for (std::size_t r = 0; r < nrows; ++r) {
      const std::uint64_t* row = rows + r * stride;
      std::uint64_t c = 0;
      for (std::size_t i = 0; i < n; ++i) c += static_cast<std::uint64_t>(_mm_popcnt_u64(row[i] & v[i]));
      out[r] = static_cast<std::uint32_t>(c);
    }
    return;
  }
  for (std::size_t r = 0; r < nrows; ++r) out[r] = static_cast<std::uint32_t>(and_popcount(rows + r * stride, v, n));
}

}  // namespace

const KernelTable kTable{Backend::Avx2, "avx2", popcount, and_popcount, andnot_popcount, and_popcount_rows};

}  // namespace multipool::simd::avx2

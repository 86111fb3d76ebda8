#pragma once

// Popcount kernels over packed 64-bit words.
//
// Every hot loop in the library (pool loads, NCOMP decoding, tallies and the
// pairwise-overlap check) reduces to AND/ANDNOT followed by a population
// count. Each backend implements the same table; the active one is picked at
// startup from the CPU feature bits and can be pinned with the environment
// variable MULTIPOOL_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace multipool::simd {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  const char* name;
  /// popcount(a[0..n))
  std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t n);
  /// popcount(a & b)
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  /// popcount(a & ~b)
  std::uint64_t (*andnot_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
  /// out[r] = popcount(rows[r*stride .. r*stride+n) & v) for r < nrows.
  void (*and_popcount_rows)(const std::uint64_t* rows, std::size_t nrows, std::size_t stride,
                            const std::uint64_t* v, std::size_t n, std::uint32_t* out);
};

/// Kernel table for a backend, or nullptr when it is not compiled in or the
/// CPU lacks the required instructions.
const KernelTable* table(Backend backend) noexcept;

/// Backends usable on this machine, scalar first.
std::vector<Backend> available_backends();

/// The dispatched table (best available unless overridden by MULTIPOOL_SIMD).
const KernelTable& active();

std::optional<Backend> parse_backend(std::string_view name) noexcept;

namespace scalar {
extern const KernelTable kTable;
}
#if defined(MULTIPOOL_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif
#if defined(MULTIPOOL_HAVE_NEON)
namespace neon {
extern const KernelTable kTable;
}
#endif

}  // namespace multipool::simd

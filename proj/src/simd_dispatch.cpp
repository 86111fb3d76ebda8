#include <cstdlib>

#include "multipool/bitvec.hpp"
#include "multipool/simd.hpp"

namespace multipool::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(MULTIPOOL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* env = std::getenv("MULTIPOOL_SIMD")) {
    if (auto b = parse_backend(env)) {
      if (const KernelTable* t = table(*b)) return *t;
    }
  }
  const auto backends = available_backends();
  return *table(backends.back());
}

}  // namespace

const KernelTable* table(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar:
      return &scalar::kTable;
    case Backend::Avx2:
#if defined(MULTIPOOL_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2::kTable;
#endif
      return nullptr;
    case Backend::Neon:
#if defined(MULTIPOOL_HAVE_NEON)
      return &neon::kTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (table(b) != nullptr) out.push_back(b);
  }
  return out;
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "neon") return Backend::Neon;
  return std::nullopt;
}

}  // namespace multipool::simd

namespace multipool {

std::size_t BitVector::count() const noexcept {
  return static_cast<std::size_t>(simd::active().popcount(words_.data(), words_.size()));
}

}  // namespace multipool

#include <doctest.h>

#include <bit>
#include <random>

#include "multipool/bitvec.hpp"
#include "multipool/simd.hpp"

using namespace multipool;

namespace {

std::uint64_t reference_and(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int bit = 0; bit < 64; ++bit) total += ((a[i] & b[i]) >> bit) & 1U;
  }
  return total;
}

std::vector<std::uint64_t> random_words(std::mt19937_64& gen, std::size_t n, int density) {
  std::vector<std::uint64_t> v(n);
  for (auto& w : v) {
    w = gen();
    // Thin out or fill up to exercise sparse and dense inputs.
    for (int d = 0; d < density; ++d) w &= gen();
    if (density < 0) w |= gen();
  }
  return v;
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar backend is always available") {
  const auto backends = simd::available_backends();
  REQUIRE_FALSE(backends.empty());
  CHECK(backends.front() == simd::Backend::Scalar);
  CHECK(simd::table(simd::Backend::Scalar) != nullptr);
  CHECK(simd::parse_backend("avx2") == simd::Backend::Avx2);
  CHECK_FALSE(simd::parse_backend("sse9").has_value());
  MESSAGE("active backend: " << simd::active().name);
}

TEST_CASE("every backend matches the bitwise reference") {
  std::mt19937_64 gen(2024);
  for (auto backend : simd::available_backends()) {
    const auto& k = *simd::table(backend);
    CAPTURE(k.name);
    for (std::size_t n = 0; n <= 70; ++n) {
      for (int density : {-1, 0, 2}) {
        const auto a = random_words(gen, n, density);
        const auto b = random_words(gen, n, density);
        std::vector<std::uint64_t> not_b(b);
        for (auto& w : not_b) w = ~w;
        CHECK(k.popcount(a.data(), n) == reference_and(a, a));
        CHECK(k.and_popcount(a.data(), b.data(), n) == reference_and(a, b));
        CHECK(k.andnot_popcount(a.data(), b.data(), n) == reference_and(a, not_b));
      }
    }
  }
}

TEST_CASE("row kernel equals per-row scalar counts across backends") {
  std::mt19937_64 gen(99);
  const auto& ref = *simd::table(simd::Backend::Scalar);
  for (std::size_t words : {1u, 2u, 3u, 4u, 5u, 16u, 17u, 64u}) {
    const std::size_t rows = 37;
    const std::size_t stride = words + 1;
    const auto matrix = random_words(gen, rows * stride, 1);
    const auto v = random_words(gen, words, 0);
    std::vector<std::uint32_t> expected(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      expected[r] = static_cast<std::uint32_t>(ref.and_popcount(matrix.data() + r * stride, v.data(), words));
    }
    for (auto backend : simd::available_backends()) {
      const auto& k = *simd::table(backend);
      std::vector<std::uint32_t> out(rows, 0xdead);
      k.and_popcount_rows(matrix.data(), rows, stride, v.data(), words, out.data());
      CAPTURE(k.name);
      CAPTURE(words);
      CHECK(out == expected);
    }
  }
}

TEST_CASE("bit vector keeps its tail clear") {
  BitVector v(70);
  v.fill(true);
  CHECK(v.count() == 70);
  CHECK(v.words()[1] == (std::uint64_t{1} << 6) - 1);
  v.set(3, false);
  CHECK_FALSE(v.get(3));
  CHECK(v.count() == 69);
}

}  // TEST_SUITE

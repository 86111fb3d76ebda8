#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace multipool {

inline constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + 63) / 64; }

/// Fixed-length packed bit vector. Bits past size() are always zero so that
/// word-wise kernels can run over the whole storage.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

  std::size_t size() const noexcept { return size_; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  bool operator[](std::size_t i) const noexcept { return get(i); }

  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  void fill(bool value) noexcept {
    for (auto& w : words_) w = value ? ~std::uint64_t{0} : 0;
    if (value) clear_tail();
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> mutable_words() noexcept { return words_; }

  /// Zero the unused high bits of the last word.
  void clear_tail() noexcept {
    if (const std::size_t r = size_ & 63; r != 0) words_.back() &= (std::uint64_t{1} << r) - 1;
  }

  std::size_t count() const noexcept;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace multipool

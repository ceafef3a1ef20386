#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mvrobust {

// Fixed-size bitset sized at runtime. Used for conflict matrices and
// graph adjacency/closure rows, where bit-parallel unions dominate.
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

  std::size_t size() const { return size_; }

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  DynBitset& operator|=(const DynBitset& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }

  bool intersects(const DynBitset& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  bool operator==(const DynBitset&) const = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace mvrobust

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace mbs {

/// Bitset over canonical point indices with a cached cardinality.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::uint32_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::uint32_t universe() const { return universe_; }
  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(std::uint32_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  /// Returns true when the point was not yet present.
  bool insert(std::uint32_t i) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (words_[i >> 6] & bit) return false;
    words_[i >> 6] |= bit;
    ++count_;
    return true;
  }

  bool erase(std::uint32_t i) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (!(words_[i >> 6] & bit)) return false;
    words_[i >> 6] &= ~bit;
    --count_;
    return true;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(static_cast<std::uint32_t>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::uint32_t> indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(count_);
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  PointSet& operator|=(const PointSet& other) {
    check_same(other);
    count_ = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      words_[w] |= other.words_[w];
      count_ += std::popcount(words_[w]);
    }
    return *this;
  }

  std::uint64_t intersection_size(const PointSet& other) const {
    check_same(other);
    std::uint64_t n = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) n += std::popcount(words_[w] & other.words_[w]);
    return n;
  }

  /// Recomputed population count; equals size() for every valid set.
  std::uint64_t popcount() const {
    std::uint64_t n = 0;
    for (const auto w : words_) n += std::popcount(w);
    return n;
  }

  bool operator==(const PointSet& other) const { return universe_ == other.universe_ && words_ == other.words_; }

  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }

 private:
  void check_same(const PointSet& other) const;

  std::uint32_t universe_ = 0;
  std::vector<std::uint64_t> words_;
  std::uint64_t count_ = 0;
};

}  // namespace mbs

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dscp {

using Element = std::uint32_t;

// Fixed-width bitset over the universe [0, n). Used as the accumulator for
// unions and coverage checks; all set operations are whole-word.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t universe_size() const { return n_; }

  bool contains(Element e) const {
    return (words_[e >> 6] >> (e & 63)) & 1u;
  }
  // Returns true if the element was newly inserted.
  bool insert(Element e) {
    std::uint64_t& w = words_[e >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (e & 63);
    const bool fresh = (w & bit) == 0;
    w |= bit;
    return fresh;
  }
  void erase(Element e) {
    words_[e >> 6] &= ~(std::uint64_t{1} << (e & 63));
  }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  ElementSet& operator|=(const ElementSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }
  bool full() const { return count() == n_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        fn(static_cast<Element>(i * 64 + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  bool operator==(const ElementSet&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace dscp

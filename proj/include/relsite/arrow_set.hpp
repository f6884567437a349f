#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace relsite {

inline constexpr int kMaxObjects = 64;
inline constexpr int kMaxArrows = 512;

/// Fixed-width bitset over the arrow table of a category. Sieves, images of
/// sieves and arrow families are all stored this way.
class ArrowSet {
 public:
  static constexpr int kWords = kMaxArrows / 64;

  ArrowSet() = default;

  void insert(int a) { words_[a >> 6] |= std::uint64_t{1} << (a & 63); }
  void erase(int a) { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }
  bool contains(int a) const { return (words_[a >> 6] >> (a & 63)) & 1U; }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  int size() const {
    int n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
  }
  bool subset_of(const ArrowSet& o) const {
    for (int i = 0; i < kWords; ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  ArrowSet& operator|=(const ArrowSet& o) {
    for (int i = 0; i < kWords; ++i) words_[i] |= o.words_[i];
    return *this;
  }
  ArrowSet& operator&=(const ArrowSet& o) {
    for (int i = 0; i < kWords; ++i) words_[i] &= o.words_[i];
    return *this;
  }
  friend ArrowSet operator|(ArrowSet a, const ArrowSet& b) { return a |= b; }
  friend ArrowSet operator&(ArrowSet a, const ArrowSet& b) { return a &= b; }

  friend bool operator==(const ArrowSet&, const ArrowSet&) = default;
  friend auto operator<=>(const ArrowSet&, const ArrowSet&) = default;

  /// Members in increasing arrow-id order.
  std::vector<int> elements() const {
    std::vector<int> out;
    for (int i = 0; i < kWords; ++i) {
      auto w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        out.push_back(i * 64 + b);
        w &= w - 1;
      }
    }
    return out;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (int i = 0; i < kWords; ++i) {
      auto w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        fn(i * 64 + b);
        w &= w - 1;
      }
    }
  }

  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto w : words_) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

 private:
  std::array<std::uint64_t, kWords> words_{};
};

struct ArrowSetHash {
  std::size_t operator()(const ArrowSet& s) const { return s.hash(); }
};

}  // namespace relsite

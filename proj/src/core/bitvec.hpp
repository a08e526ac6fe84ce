#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lucid {

/// Fixed-length packed bit vector. Bits past `size()` in the last word are
/// always zero, so word-wise popcounts and comparisons need no masking.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t n, bool value = false);

  static BitVector from_words(std::size_t n, std::vector<Word> words);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_words() const noexcept { return words_.size(); }
  std::span<const Word> words() const noexcept { return words_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value = true) noexcept {
    Word bit = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= bit;
    } else {
      words_[i / kWordBits] &= ~bit;
    }
  }

  std::size_t count() const noexcept;
  bool any() const noexcept;
  bool none() const noexcept { return !any(); }

  BitVector& operator&=(const BitVector& o);
  BitVector& operator|=(const BitVector& o);
  BitVector& operator^=(const BitVector& o);
  /// this &= ~o
  BitVector& and_not(const BitVector& o);
  BitVector operator~() const;

  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool operator==(const BitVector& o) const noexcept {
    return n_ == o.n_ && words_ == o.words_;
  }

  /// Lexicographic on words; only meaningful for equal lengths.
  bool operator<(const BitVector& o) const noexcept { return words_ < o.words_; }

  std::uint64_t hash() const noexcept;

  /// popcount(a & b) without materializing the intersection.
  static std::size_t count_and(const BitVector& a, const BitVector& b);
  /// popcount(a & ~b)
  static std::size_t count_and_not(const BitVector& a, const BitVector& b);
  /// popcount(a & b & ~c)
  static std::size_t count_and_and_not(const BitVector& a, const BitVector& b,
                                       const BitVector& c);

 private:
  void clear_tail() noexcept;
  void check_same(const BitVector& o) const;

  std::size_t n_ = 0;
  std::vector<Word> words_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept {
    return static_cast<std::size_t>(v.hash());
  }
};

}  // namespace lucid

#include "core/bitvec.hpp"

#include <bit>

#include "core/error.hpp"

namespace lucid {

BitVector::BitVector(std::size_t n, bool value)
    : n_(n), words_((n + kWordBits - 1) / kWordBits, value ? ~Word{0} : Word{0}) {
  clear_tail();
}

BitVector BitVector::from_words(std::size_t n, std::vector<Word> words) {
  if (words.size() != (n + kWordBits - 1) / kWordBits) {
    fail(ErrorKind::kInput, "bit vector word count does not match its length");
  }
  BitVector v;
  v.n_ = n;
  v.words_ = std::move(words);
  v.clear_tail();
  return v;
}

void BitVector::clear_tail() noexcept {
  if (std::size_t r = n_ % kWordBits; r != 0 && !words_.empty()) {
    words_.back() &= (Word{1} << r) - 1;
  }
}

void BitVector::check_same(const BitVector& o) const {
  if (n_ != o.n_) fail(ErrorKind::kInternal, "bit vector length mismatch");
}

std::size_t BitVector::count() const noexcept {
  std::size_t c = 0;
  for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::any() const noexcept {
  for (Word w : words_) {
    if (w) return true;
  }
  return false;
}

BitVector& BitVector::operator&=(const BitVector& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

BitVector& BitVector::operator^=(const BitVector& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

BitVector& BitVector::and_not(const BitVector& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

BitVector BitVector::operator~() const {
  BitVector r = *this;
  for (Word& w : r.words_) w = ~w;
  r.clear_tail();
  return r;
}

std::uint64_t BitVector::hash() const noexcept {
  // splitmix64 finalizer folded over the words
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ n_;
  for (Word w : words_) {
    std::uint64_t x = w + 0x9e3779b97f4a7c15ULL + h;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    h = x ^ (x >> 31);
  }
  return h;
}

std::size_t BitVector::count_and(const BitVector& a, const BitVector& b) {
  a.check_same(b);
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
  }
  return c;
}

std::size_t BitVector::count_and_not(const BitVector& a, const BitVector& b) {
  a.check_same(b);
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(a.words_[i] & ~b.words_[i]));
  }
  return c;
}

std::size_t BitVector::count_and_and_not(const BitVector& a, const BitVector& b,
                                         const BitVector& c) {
  a.check_same(b);
  a.check_same(c);
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    n += static_cast<std::size_t>(
        std::popcount(a.words_[i] & b.words_[i] & ~c.words_[i]));
  }
  return n;
}

}  // namespace lucid

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srumcc {

// Fixed-length vector over GF(2), packed 64 bits per word, LSB-first.
// Bits past the logical length are kept zero so word-level comparison
// and hashing stay canonical.
class BitBlock {
 public:
  BitBlock() = default;
  explicit BitBlock(int n) : n_(n), w_((n + 63) / 64, 0) {}

  static BitBlock from_string(std::string_view s) {
    BitBlock b(static_cast<int>(s.size()));
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        b.set(static_cast<int>(i), true);
      else if (s[i] != '0')
        throw std::invalid_argument("BitBlock: expected '0'/'1' string");
    }
    return b;
  }

  int size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

  void set(int i, bool v) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }

  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  int weight() const {
    int c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
  }

  BitBlock& operator^=(const BitBlock& o) {
    if (o.n_ != n_) throw std::invalid_argument("BitBlock xor: length mismatch");
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }

  friend BitBlock operator^(BitBlock a, const BitBlock& b) { return a ^= b; }

  bool operator==(const BitBlock&) const = default;

  std::span<const uint64_t> words() const { return w_; }
  std::span<uint64_t> words() { return w_; }
  int num_words() const { return static_cast<int>(w_.size()); }

  std::string to_string() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  // Calls f(i) for every set bit, ascending.
  template <class F>
  void for_each_set(F&& f) const {
    for (size_t wi = 0; wi < w_.size(); ++wi) {
      uint64_t w = w_[wi];
      while (w) {
        int b = std::countr_zero(w);
        f(static_cast<int>(wi * 64) + b);
        w &= w - 1;
      }
    }
  }

  // Zero out bits past the logical length.
  void mask_tail() {
    if (n_ & 63) w_.back() &= (uint64_t{1} << (n_ & 63)) - 1;
  }

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace srumcc

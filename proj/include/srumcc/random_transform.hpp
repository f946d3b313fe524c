#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srumcc/bitblock.hpp"

namespace srumcc {

// Dense n x n matrix over GF(2) with i.i.d. Bernoulli(1/2) entries drawn
// from a SplitMix64 stream keyed by the seed: entries are consumed
// row-major, 64 per generator output starting at the low bit, and each
// row starts a fresh generator output. Reconstructible bit-exactly from
// (seed, n) on any platform.
class RandomTransform {
 public:
  RandomTransform() = default;

  static RandomTransform sample(uint64_t seed, int n);

  int n() const { return n_; }
  uint64_t seed() const { return seed_; }

  bool entry(int row, int col) const {
    return (rows_[static_cast<size_t>(row) * words_per_row_ + (col >> 6)] >> (col & 63)) & 1u;
  }

  // out = v * R (row vector times matrix): XOR of the rows selected by
  // the support of v. This sits inside the per-candidate decoding loop.
  void apply_into(const BitBlock& v, BitBlock& out) const;
  BitBlock apply(const BitBlock& v) const;

  // Binary file: magic "SRTR", version u32, n u32, seed u64, then
  // row-major packed rows (words_per_row u64 little-endian words each).
  void save(const std::string& path) const;
  static RandomTransform load(const std::string& path);

  bool operator==(const RandomTransform&) const = default;

 private:
  int n_ = 0;
  int words_per_row_ = 0;
  uint64_t seed_ = 0;
  std::vector<uint64_t> rows_;
};

}  // namespace srumcc

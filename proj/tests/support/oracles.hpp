#pragma once

// Brute-force reference implementations for tests. Everything here is
// deliberately naive and kept independent of the library's decoding and
// counting paths.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "srumcc/basic_code.hpp"
#include "srumcc/bitblock.hpp"
#include "srumcc/random_transform.hpp"

namespace oracles {

using srumcc::BasicCode;
using srumcc::BitBlock;

// Direct bit-loop convolutional encoder from octal taps (binary values,
// bit j = coefficient of D^j). Independent of srumcc::conv_encode.
inline std::vector<int> naive_conv_encode(const std::vector<uint32_t>& taps,
                                          const std::vector<int>& u, bool tail_biting) {
  int k = static_cast<int>(u.size());
  int m = 0;
  for (uint32_t t : taps) {
    int deg = 0;
    for (int j = 0; j < 32; ++j)
      if ((t >> j) & 1) deg = j;
    m = std::max(m, deg);
  }
  std::vector<int> out;
  for (int t = 0; t < k; ++t) {
    for (uint32_t g : taps) {
      int acc = 0;
      for (int j = 0; j <= m; ++j) {
        if (!((g >> j) & 1)) continue;
        int idx = t - j;
        if (idx >= 0)
          acc ^= u[idx];
        else if (tail_biting)
          acc ^= u[(idx % k + k) % k];
      }
      out.push_back(acc);
    }
  }
  return out;
}

struct CodebookEntry {
  BitBlock info;
  BitBlock codeword;
};

// All 2^k (info, codeword) pairs through the code's encoder.
inline std::vector<CodebookEntry> codebook(const BasicCode& code) {
  if (code.k() > 20) throw std::logic_error("codebook oracle: k too large");
  int64_t count = int64_t{1} << code.k();
  std::vector<CodebookEntry> book;
  book.reserve(count);
  for (int64_t i = 0; i < count; ++i) {
    BitBlock u(code.k());
    for (int j = 0; j < code.k(); ++j) u.set(j, (i >> j) & 1);
    book.push_back({u, code.encode(u)});
  }
  return book;
}

inline double correlation(const BitBlock& cw, std::span<const double> y) {
  double c = 0.0;
  for (int i = 0; i < cw.size(); ++i) c += cw.get(i) ? -y[i] : y[i];
  return c;
}

inline bool info_lex_less(const BitBlock& a, const BitBlock& b) {
  for (int i = 0; i < a.size(); ++i) {
    bool ai = a.get(i), bi = b.get(i);
    if (ai != bi) return bi;  // 0 before 1
  }
  return false;
}

// Codebook sorted by correlation descending; exact ties fall back to the
// lexicographically smaller information word.
inline std::vector<CodebookEntry> sorted_by_likelihood(const std::vector<CodebookEntry>& book,
                                                       std::span<const double> y) {
  std::vector<CodebookEntry> s = book;
  std::stable_sort(s.begin(), s.end(), [&](const CodebookEntry& a, const CodebookEntry& b) {
    double ca = correlation(a.codeword, y), cb = correlation(b.codeword, y);
    if (ca != cb) return ca > cb;
    return info_lex_less(a.info, b.info);
  });
  return s;
}

// v * R by scalar lookups of individual matrix entries.
inline BitBlock naive_apply(const srumcc::RandomTransform& R, const BitBlock& v) {
  BitBlock out(R.n());
  for (int col = 0; col < R.n(); ++col) {
    int acc = 0;
    for (int row = 0; row < R.n(); ++row)
      if (v.get(row) && R.entry(row, col)) acc ^= 1;
    out.set(col, acc);
  }
  return out;
}

}  // namespace oracles

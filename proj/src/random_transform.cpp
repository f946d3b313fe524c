#include "srumcc/random_transform.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "srumcc/rng.hpp"

namespace srumcc {

RandomTransform RandomTransform::sample(uint64_t seed, int n) {
  if (n < 1) throw std::invalid_argument("RandomTransform: n must be >= 1");
  RandomTransform r;
  r.n_ = n;
  r.seed_ = seed;
  r.words_per_row_ = (n + 63) / 64;
  r.rows_.resize(static_cast<size_t>(n) * r.words_per_row_);
  SplitMix64 g(seed);
  uint64_t tail_mask = (n & 63) ? ((uint64_t{1} << (n & 63)) - 1) : ~uint64_t{0};
  for (int i = 0; i < n; ++i) {
    for (int w = 0; w < r.words_per_row_; ++w)
      r.rows_[static_cast<size_t>(i) * r.words_per_row_ + w] = g.next();
    r.rows_[static_cast<size_t>(i) * r.words_per_row_ + r.words_per_row_ - 1] &= tail_mask;
  }
  return r;
}

void RandomTransform::apply_into(const BitBlock& v, BitBlock& out) const {
  if (v.size() != n_) throw std::invalid_argument("RandomTransform::apply: dimension mismatch");
  if (out.size() != n_) out = BitBlock(n_);
  auto ow = out.words();
  std::fill(ow.begin(), ow.end(), 0);
  auto vw = v.words();
  for (int wi = 0; wi < v.num_words(); ++wi) {
    uint64_t w = vw[wi];
    while (w) {
      int b = std::countr_zero(w);
      w &= w - 1;
      const uint64_t* row = rows_.data() + static_cast<size_t>(wi * 64 + b) * words_per_row_;
      for (int j = 0; j < words_per_row_; ++j) ow[j] ^= row[j];
    }
  }
}

BitBlock RandomTransform::apply(const BitBlock& v) const {
  BitBlock out(n_);
  apply_into(v, out);
  return out;
}

namespace {
constexpr char kMagic[4] = {'S', 'R', 'T', 'R'};
constexpr uint32_t kVersion = 1;
}  // namespace

void RandomTransform::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("RandomTransform::save: cannot open " + path);
  f.write(kMagic, 4);
  uint32_t ver = kVersion, n32 = static_cast<uint32_t>(n_);
  f.write(reinterpret_cast<const char*>(&ver), 4);
  f.write(reinterpret_cast<const char*>(&n32), 4);
  f.write(reinterpret_cast<const char*>(&seed_), 8);
  f.write(reinterpret_cast<const char*>(rows_.data()),
          static_cast<std::streamsize>(rows_.size() * sizeof(uint64_t)));
  if (!f) throw std::runtime_error("RandomTransform::save: write failed for " + path);
}

RandomTransform RandomTransform::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("RandomTransform::load: cannot open " + path);
  char magic[4];
  uint32_t ver = 0, n32 = 0;
  uint64_t seed = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(&ver), 4);
  f.read(reinterpret_cast<char*>(&n32), 4);
  f.read(reinterpret_cast<char*>(&seed), 8);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("RandomTransform::load: bad header in " + path);
  if (ver != kVersion) throw std::runtime_error("RandomTransform::load: unsupported version");
  RandomTransform r;
  r.n_ = static_cast<int>(n32);
  r.seed_ = seed;
  r.words_per_row_ = (r.n_ + 63) / 64;
  r.rows_.resize(static_cast<size_t>(r.n_) * r.words_per_row_);
  f.read(reinterpret_cast<char*>(r.rows_.data()),
         static_cast<std::streamsize>(r.rows_.size() * sizeof(uint64_t)));
  if (!f) throw std::runtime_error("RandomTransform::load: truncated file " + path);
  return r;
}

}  // namespace srumcc

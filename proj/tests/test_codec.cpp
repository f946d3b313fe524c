#include <doctest.h>

#include <cstdio>

#include "srumcc/channel.hpp"
#include "srumcc/rng.hpp"
#include "srumcc/srumcc_codec.hpp"
#include "support/oracles.hpp"

using namespace srumcc;

TEST_SUITE("codec") {

TEST_CASE("transform sampling is deterministic in (seed, n)") {
  auto a = RandomTransform::sample(123, 64);
  auto b = RandomTransform::sample(123, 64);
  auto c = RandomTransform::sample(124, 64);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("transform entry density concentrates at one half") {
  // 4096 Bernoulli(1/2) entries: |density - 0.5| < 0.05 is a 6.4-sigma event
  for (uint64_t seed = 0; seed < 200; ++seed) {
    auto r = RandomTransform::sample(seed, 64);
    int ones = 0;
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) ones += r.entry(i, j);
    double density = ones / 4096.0;
    CHECK(density > 0.45);
    CHECK(density < 0.55);
  }
}

TEST_CASE("transform application matches the scalar oracle") {
  auto r = RandomTransform::sample(9, 96);
  CHECK(r.apply(BitBlock(96)).weight() == 0);  // 0 * R = 0
  SplitMix64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    BitBlock v(96);
    for (int i = 0; i < 96; ++i) v.set(i, rng.next() & 1);
    CHECK(r.apply(v) == oracles::naive_apply(r, v));
  }
}

TEST_CASE("transform file round trip") {
  auto r = RandomTransform::sample(77, 80);
  std::string path = "rt_test.bin";
  r.save(path);
  auto back = RandomTransform::load(path);
  CHECK(back == r);
  std::remove(path.c_str());
  CHECK_THROWS(RandomTransform::load("does_not_exist.bin"));
}

TEST_CASE("frame encoding basics") {
  BasicCode code{CodeSpec::parse("conv:[27,31]o:k=8:tb")};
  auto R = RandomTransform::sample(3, code.n());

  // all-zero data stays all-zero through the chain
  std::vector<BitBlock> zeros(5, BitBlock(8));
  FrameSet fz = encode_frame(zeros, code, R);
  CHECK(fz.c_blocks.size() == 6);
  for (const auto& c : fz.c_blocks) CHECK(c.weight() == 0);

  // L = 1 unrolls to c0 = v0, c1 = v0 R
  SplitMix64 rng(8);
  BitBlock u(8);
  for (int i = 0; i < 8; ++i) u.set(i, rng.next() & 1);
  FrameSet f1 = encode_frame({u}, code, R);
  BitBlock v0 = code.encode(u);
  CHECK(f1.c_blocks[0] == v0);
  CHECK(f1.c_blocks[1] == R.apply(v0));
  CHECK(f1.rate(code.k(), code.n()) == doctest::Approx(0.25));
}

TEST_CASE("unit-memory form: c_t = u_t G0 + u_{t-1} G1 with G0=S, G1=SR") {
  BasicCode code{CodeSpec::parse("conv:[27,31]o:k=8:tb")};
  auto R = RandomTransform::sample(41, code.n());
  // materialize S by encoding unit vectors
  std::vector<BitBlock> S, SR;
  for (int i = 0; i < code.k(); ++i) {
    BitBlock e(code.k());
    e.set(i, true);
    S.push_back(code.encode(e));
    SR.push_back(R.apply(S.back()));
  }
  auto times = [&](const BitBlock& u, const std::vector<BitBlock>& G) {
    BitBlock acc(code.n());
    for (int i = 0; i < u.size(); ++i)
      if (u.get(i)) acc ^= G[i];
    return acc;
  };
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BitBlock> u(3, BitBlock(code.k()));
    for (auto& b : u)
      for (int i = 0; i < code.k(); ++i) b.set(i, rng.next() & 1);
    FrameSet f = encode_frame(u, code, R);
    BitBlock prev(code.k());  // u(-1) = 0
    for (int t = 0; t < 3; ++t) {
      CHECK(f.c_blocks[t] == (times(u[t], S) ^ times(prev, SR)));
      prev = u[t];
    }
  }
}

TEST_CASE("frame encoder is linear") {
  BasicCode code{CodeSpec::parse("conv:[7,5]o:k=6:trunc")};
  auto R = RandomTransform::sample(2, code.n());
  SplitMix64 rng(30);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<BitBlock> a(4, BitBlock(6)), b(4, BitBlock(6)), s(4, BitBlock(6));
    for (int t = 0; t < 4; ++t)
      for (int i = 0; i < 6; ++i) {
        a[t].set(i, rng.next() & 1);
        b[t].set(i, rng.next() & 1);
        s[t].set(i, a[t].get(i) ^ b[t].get(i));
      }
    FrameSet fa = encode_frame(a, code, R), fb = encode_frame(b, code, R),
             fs = encode_frame(s, code, R);
    for (int t = 0; t <= 4; ++t) CHECK(fs.c_blocks[t] == (fa.c_blocks[t] ^ fb.c_blocks[t]));
  }
}

TEST_CASE("noiseless cancellation recovers the next codeword") {
  BasicCode code{CodeSpec::parse("conv:[27,31]o:k=8:tb")};
  auto R = RandomTransform::sample(6, code.n());
  SplitMix64 rng(55);
  std::vector<BitBlock> u(4, BitBlock(8));
  for (auto& b : u)
    for (int i = 0; i < 8; ++i) b.set(i, rng.next() & 1);
  FrameSet f = encode_frame(u, code, R);
  for (int t = 0; t + 1 < 4; ++t) {
    auto y_next = bpsk_map(f.c_blocks[t + 1]);
    std::vector<double> z;
    flip_into(y_next, R.apply(f.v_blocks[t]), z);
    auto expect = bpsk_map(f.v_blocks[t + 1]);
    for (int i = 0; i < code.n(); ++i) CHECK(z[i] == doctest::Approx(expect[i]));
  }
}

TEST_CASE("block length mismatch is rejected") {
  BasicCode code{CodeSpec::parse("conv:[7,5]o:k=6:trunc")};
  auto R = RandomTransform::sample(2, code.n());
  CHECK_THROWS_AS(encode_frame({BitBlock(5)}, code, R), std::invalid_argument);
  CHECK_THROWS_AS(encode_frame({}, code, R), std::invalid_argument);
  CHECK_THROWS_AS(R.apply(BitBlock(7)), std::invalid_argument);
}

}  // TEST_SUITE

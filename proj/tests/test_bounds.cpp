#include <doctest.h>

#include <cmath>
#include <map>

#include "srumcc/bounds.hpp"
#include "srumcc/channel.hpp"
#include "srumcc/numeric.hpp"
#include "srumcc/rng.hpp"
#include "srumcc/srumcc_codec.hpp"
#include "support/oracles.hpp"

using namespace srumcc;

namespace {

// Independent weight count by explicit enumeration of the codebook.
std::map<int, int64_t> enumerate_weights(const BasicCode& code) {
  std::map<int, int64_t> w;
  for (const auto& e : oracles::codebook(code)) w[e.codeword.weight()]++;
  return w;
}

// Backward-direction dynamic program over the trellis, written against
// the raw section arrays as a second opinion on wef().
std::vector<int64_t> wef_backward(const BasicCode& code) {
  const Trellis& t = code.trellis();
  std::vector<int64_t> acc(t.n + 1, 0);
  int starts = t.num_subcodes();
  for (int c = 0; c < starts; ++c) {
    int start = (t.mode == TrellisMode::tail_biting) ? c : 0;
    int final_states = t.sections.back().out_states;
    // dp[state][w] walking sections from the last to the first
    std::vector<std::vector<int64_t>> dp(final_states, std::vector<int64_t>(t.n + 1, 0));
    if (t.mode == TrellisMode::tail_biting)
      dp[start][0] = 1;
    else
      for (int s = 0; s < final_states; ++s) dp[s][0] = 1;
    for (int si = t.num_sections() - 1; si >= 0; --si) {
      const TrellisSection& sec = t.sections[si];
      std::vector<std::vector<int64_t>> nd(sec.in_states, std::vector<int64_t>(t.n + 1, 0));
      for (int s = 0; s < sec.in_states; ++s)
        for (int b = 0; b < sec.n_in(); ++b) {
          int e = s * sec.n_in() + b;
          int wt = 0;
          for (int j = 0; j < sec.bits; ++j) wt += (sec.out[e] >> j) & 1;
          const auto& src = dp[sec.next[e]];
          for (int w = 0; w + wt <= t.n; ++w)
            if (src[w]) nd[s][w + wt] += src[w];
        }
      dp = std::move(nd);
    }
    for (int w = 0; w <= t.n; ++w) acc[w] += dp[start][w];
  }
  return acc;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("RM[8,4] weight enumerator") {
  BasicCode code{CodeSpec::parse("rm84x1")};
  WeightEnumerator A = wef(code);
  CHECK(A.counts[0] == 1);
  CHECK(A.counts[4] == 14);
  CHECK(A.counts[8] == 1);
  for (int w : {1, 2, 3, 5, 6, 7}) CHECK(A.counts[w] == 0);
  CHECK(A.total() == 16);
}

TEST_CASE("weight enumerator equals brute-force enumeration") {
  for (const char* spec : {"conv:[7,5]o:k=12:trunc", "conv:[27,31]o:k=10:tb", "rm84x2"}) {
    BasicCode code{CodeSpec::parse(spec)};
    WeightEnumerator A = wef(code);
    auto ref = enumerate_weights(code);
    CHECK(A.total() == BigInt(1) << code.k());
    for (int w = 0; w <= code.n(); ++w) {
      int64_t expect = ref.count(w) ? ref[w] : 0;
      CHECK(A.counts[w] == expect);
    }
  }
}

TEST_CASE("forward and backward trellis counts agree") {
  for (const char* spec : {"conv:[27,31]o:k=14:tb", "conv:[25,33,37]o:k=12:trunc", "rm84x3"}) {
    BasicCode code{CodeSpec::parse(spec)};
    WeightEnumerator A = wef(code);
    auto back = wef_backward(code);
    for (int w = 0; w <= code.n(); ++w) CHECK(A.counts[w] == back[w]);
  }
}

TEST_CASE("ensemble enumerator normalization for shipped codes") {
  for (const char* spec :
       {"conv:[27,31]o:k=32:tb", "conv:[27,31]o:k=32:trunc", "conv:[25,33,37]o:k=32:tb",
        "conv:[25,27,33,37]o:k=32:tb", "conv:[27,31]o:k=48:trunc", "rm84x8"}) {
    BasicCode code{CodeSpec::parse(spec)};
    EnsembleWEF B = ensemble_wef(wef(code));
    double expect = code.k() * std::log(2.0) +
                    std::log(std::pow(2.0, code.k()) - 1.0);
    CHECK(B.log_total() == doctest::Approx(expect).epsilon(1e-10));
    CHECK(B.log_coeff[0] == -std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("single-term enumerator expands through the binomial") {
  WeightEnumerator A;
  A.n = 16;
  A.k = 4;
  A.counts.assign(17, BigInt(0));
  A.counts[5] = 12;
  EnsembleWEF B = ensemble_wef(A);
  for (int w = 1; w <= 32; ++w) {
    int j = w - 5;
    if (j < 0 || j > 16) {
      CHECK(B.log_coeff[w] == -std::numeric_limits<double>::infinity());
    } else {
      double expect = (4 - 16) * std::log(2.0) + std::log(12.0) + log_binom(16, j);
      CHECK(B.log_coeff[w] == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("RM ensemble coefficients match exact rational expansion") {
  BasicCode code{CodeSpec::parse("rm84x1")};
  EnsembleWEF B = ensemble_wef(wef(code));
  // B_w * 2^{n-k} = sum_d A_d C(8, w-d) with A = 14 X^4 + X^8
  auto comb = [](int n, int k) -> double {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
  };
  for (int w = 1; w <= 16; ++w) {
    double exact = 14.0 * comb(8, w - 4) + comb(8, w - 8);
    if (exact == 0.0)
      CHECK(B.log_coeff[w] == -std::numeric_limits<double>::infinity());
    else
      CHECK(B.log_coeff[w] == doctest::Approx(std::log(exact / 16.0)).epsilon(1e-12));
  }
}

TEST_CASE("union bound values and monotonicity") {
  BasicCode code{CodeSpec::parse("conv:[27,31]o:k=32:tb")};
  EnsembleWEF B = ensemble_wef(wef(code));
  // frozen from an independent arbitrary-precision evaluation
  struct Point {
    double snr, value;
  } points[] = {{2.5, 5.818e-2}, {3.0, 1.862e-3}, {3.5, 6.490e-5}, {4.0, 2.356e-6}};
  for (auto [snr, value] : points) {
    double b = union_bound_fer0(B, ChannelParams::from_snr_db(snr).sigma2);
    CHECK(b == doctest::Approx(value).epsilon(2e-3));
  }
  double prev = 1e300;
  for (double snr = 1.0; snr <= 8.0; snr += 0.5) {
    double b = union_bound_fer0(B, ChannelParams::from_snr_db(snr).sigma2);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(union_bound_fer0(B, 1e-9) == 0.0);  // sigma -> 0
}

TEST_CASE("frame bound arithmetic") {
  CHECK(fer_bound(1e-4, 1) == doctest::Approx(1e-4));
  CHECK(fer_bound(1e-4, 49) == doctest::Approx(2.5e-3));
  CHECK(fer_bound(0.5, 49) == 1.0);
  CHECK_THROWS_AS(fer_bound(-0.1, 49), std::invalid_argument);
  CHECK_THROWS_AS(fer_bound(0.1, 0), std::invalid_argument);
}

TEST_CASE("complexity estimate") {
  CHECK(complexity_estimate(16, 1.0, 64.0) == doctest::Approx(2.0 * 16 * 64));
  CHECK(complexity_estimate(16, 1.1, 64.0) == doctest::Approx(2156.8));
  CHECK_THROWS_AS(complexity_estimate(0, 1, 1), std::invalid_argument);
}

TEST_CASE("exhaustive two-block decoders") {
  BasicCode code{CodeSpec::parse("conv:[27,31]o:k=8:tb")};
  auto R = RandomTransform::sample(21, code.n());
  SplitMix64 rng(90);

  // noiseless: both return the transmitted word
  BitBlock u0(8), u1(8);
  for (int i = 0; i < 8; ++i) {
    u0.set(i, rng.next() & 1);
    u1.set(i, rng.next() & 1);
  }
  auto enc = encode_frame({u0, u1}, code, R);
  ReceivedBlock y0{bpsk_map(enc.c_blocks[0]), 0.25};
  ReceivedBlock y1{bpsk_map(enc.c_blocks[1]), 0.25};
  MapMlResult r = exhaustive_map_ml(y0, y1, code, R);
  CHECK(r.map_word == enc.v_blocks[0]);
  CHECK(r.ml_word == enc.v_blocks[0]);

  // the two rules agree on nearly all realizations at 4 dB
  double sigma2 = ChannelParams::from_snr_db(4.0).sigma2;
  int agree = 0, trials = 300;
  for (int t = 0; t < trials; ++t) {
    BitBlock a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a.set(i, rng.next() & 1);
      b.set(i, rng.next() & 1);
    }
    auto f = encode_frame({a, b}, code, R);
    GaussianStream g(mix_seed({555, static_cast<uint64_t>(t)}));
    ReceivedBlock w0{awgn(bpsk_map(f.c_blocks[0]), sigma2, g), sigma2};
    ReceivedBlock w1{awgn(bpsk_map(f.c_blocks[1]), sigma2, g), sigma2};
    MapMlResult mr = exhaustive_map_ml(w0, w1, code, R);
    if (mr.map_word == mr.ml_word) agree++;
  }
  CHECK(agree > trials * 99 / 100);

  BasicCode big{CodeSpec::parse("conv:[27,31]o:k=16:tb")};
  CHECK_THROWS_AS(exhaustive_map_ml(y0, y1, big, R), std::invalid_argument);
}

}  // TEST_SUITE

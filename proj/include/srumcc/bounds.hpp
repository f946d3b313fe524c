#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "srumcc/basic_code.hpp"
#include "srumcc/channel.hpp"
#include "srumcc/random_transform.hpp"

namespace srumcc {

using BigInt = boost::multiprecision::cpp_int;

// Exact codeword counts by Hamming weight; counts[0] includes the zero
// word, so the total is 2^k.
struct WeightEnumerator {
  int n = 0, k = 0;
  std::vector<BigInt> counts;  // index 0..n

  BigInt total() const;
};

// Transfer-matrix DP over the trellis; tail-biting sums the per-start
// closed-path counts.
WeightEnumerator wef(const BasicCode& code);

// Random-transform ensemble weight enumerator of the two-block code with
// a nonzero first block: coefficients of 2^{k-n} (1+X)^n A(X) where A
// excludes the zero word. Kept in the log domain; sums to 2^k (2^k - 1).
struct EnsembleWEF {
  int n = 0, k = 0;
  std::vector<double> log_coeff;  // index w = 0..2n, log_coeff[0] = -inf

  double log_total() const;
};

EnsembleWEF ensemble_wef(const WeightEnumerator& A);

// Union upper bound on the first-sub-frame ML error rate:
// sum_w B_w Q(sqrt(w / sigma^2)).
double union_bound_fer0(const EnsembleWEF& B, double sigma2);

// fER <= (L+1)/2 * fER_0, clamped to 1.
double fer_bound(double fer0, int L);

// Per-sub-frame operation count of the serial list pass with an inner
// pass per candidate: (s + ell_bar - 1 + ell_bar * s) * n.
double complexity_estimate(double s, double ell_bar, double n);

// Exhaustive two-block decoding: the posterior-maximizing first block
// (summing the second block out) and the jointly most likely one.
// Enumeration over all 2^{2k} pairs; test-scale only (k <= 10).
struct MapMlResult {
  BitBlock map_word;
  BitBlock ml_word;
};

MapMlResult exhaustive_map_ml(const ReceivedBlock& y0, const ReceivedBlock& y1,
                              const BasicCode& basic, const RandomTransform& R);

}  // namespace srumcc

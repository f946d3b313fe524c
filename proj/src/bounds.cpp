#include "srumcc/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "srumcc/numeric.hpp"

namespace srumcc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

BigInt WeightEnumerator::total() const {
  BigInt s = 0;
  for (const BigInt& c : counts) s += c;
  return s;
}

WeightEnumerator wef(const BasicCode& code) {
  const Trellis& t = code.trellis();
  WeightEnumerator A;
  A.n = t.n;
  A.k = t.k;
  A.counts.assign(t.n + 1, BigInt(0));

  int starts = t.num_subcodes();
  for (int c = 0; c < starts; ++c) {
    int start = (t.mode == TrellisMode::tail_biting) ? c : 0;
    // dp[state][w] = number of paths from the start with accumulated weight w
    std::vector<std::vector<BigInt>> dp(t.sections[0].in_states,
                                        std::vector<BigInt>(t.n + 1, BigInt(0)));
    dp[start][0] = 1;
    int max_w = 0;
    for (int si = 0; si < t.num_sections(); ++si) {
      const TrellisSection& sec = t.sections[si];
      std::vector<std::vector<BigInt>> nd(sec.out_states,
                                          std::vector<BigInt>(t.n + 1, BigInt(0)));
      int n_in = sec.n_in();
      for (int s = 0; s < sec.in_states; ++s) {
        for (int b = 0; b < n_in; ++b) {
          int e = s * n_in + b;
          int wt = std::popcount(sec.out[e]);
          auto& dst = nd[sec.next[e]];
          const auto& src = dp[s];
          for (int w = 0; w <= max_w; ++w)
            if (src[w] != 0) dst[w + wt] += src[w];
        }
      }
      max_w += sec.bits;
      dp = std::move(nd);
    }
    if (t.mode == TrellisMode::tail_biting) {
      for (int w = 0; w <= t.n; ++w) A.counts[w] += dp[start][w];
    } else {
      int final_states = t.sections.back().out_states;
      int end_lo = 0, end_hi = final_states;
      for (int s = end_lo; s < end_hi; ++s)
        for (int w = 0; w <= t.n; ++w) A.counts[w] += dp[s][w];
    }
  }
  return A;
}

EnsembleWEF ensemble_wef(const WeightEnumerator& A) {
  EnsembleWEF B;
  B.n = A.n;
  B.k = A.k;
  B.log_coeff.assign(2 * A.n + 1, kNegInf);
  const double ln2 = 0.6931471805599453094;
  std::vector<double> log_a(A.n + 1, kNegInf);
  for (int d = 1; d <= A.n; ++d)
    if (A.counts[d] != 0) log_a[d] = std::log(A.counts[d].convert_to<double>());
  std::vector<double> terms;
  for (int w = 1; w <= 2 * A.n; ++w) {
    terms.clear();
    for (int d = std::max(1, w - A.n); d <= std::min(w, A.n); ++d)
      if (log_a[d] != kNegInf) terms.push_back(log_a[d] + log_binom(A.n, w - d));
    if (!terms.empty())
      B.log_coeff[w] = (A.k - A.n) * ln2 + log_sum_exp(terms);
  }
  return B;
}

double EnsembleWEF::log_total() const { return log_sum_exp(log_coeff); }

double union_bound_fer0(const EnsembleWEF& B, double sigma2) {
  if (sigma2 <= 0.0) throw std::invalid_argument("union_bound_fer0: sigma2 must be positive");
  std::vector<double> terms;
  terms.reserve(B.log_coeff.size());
  for (int w = 1; w < static_cast<int>(B.log_coeff.size()); ++w) {
    if (B.log_coeff[w] == kNegInf) continue;
    terms.push_back(B.log_coeff[w] + log_q_func(std::sqrt(w / sigma2)));
  }
  if (terms.empty()) return 0.0;
  double lv = log_sum_exp(terms);
  return lv < -700.0 ? 0.0 : std::exp(lv);
}

double fer_bound(double fer0, int L) {
  if (fer0 < 0.0 || fer0 > 1.0) throw std::invalid_argument("fer_bound: fer0 must be in [0,1]");
  if (L < 1) throw std::invalid_argument("fer_bound: L must be >= 1");
  return std::min(1.0, 0.5 * (L + 1) * fer0);
}

double complexity_estimate(double s, double ell_bar, double n) {
  if (s <= 0 || ell_bar <= 0 || n <= 0)
    throw std::invalid_argument("complexity_estimate: arguments must be positive");
  return (s + ell_bar - 1.0 + ell_bar * s) * n;
}

MapMlResult exhaustive_map_ml(const ReceivedBlock& y0, const ReceivedBlock& y1,
                              const BasicCode& basic, const RandomTransform& R) {
  const int k = basic.k();
  const int n = basic.n();
  if (k > 10) throw std::invalid_argument("exhaustive_map_ml: k too large for enumeration");
  if (static_cast<int>(y0.samples.size()) != n || static_cast<int>(y1.samples.size()) != n)
    throw std::invalid_argument("exhaustive_map_ml: length mismatch");
  const int64_t count = int64_t{1} << k;

  // Precompute codewords and their correlations with y0.
  std::vector<BitBlock> info(count), cw(count);
  std::vector<double> corr0(count);
  for (int64_t i = 0; i < count; ++i) {
    BitBlock u(k);
    for (int j = 0; j < k; ++j) u.set(j, (i >> j) & 1);
    info[i] = u;
    cw[i] = basic.encode(u);
    double c = 0.0;
    for (int j = 0; j < n; ++j) c += cw[i].get(j) ? -y0.samples[j] : y0.samples[j];
    corr0[i] = c;
  }

  const double inv_s0 = 1.0 / y0.sigma2;
  const double inv_s1 = 1.0 / y1.sigma2;
  double best_map = kNegInf, best_ml = kNegInf;
  int64_t arg_map = 0, arg_ml = 0;
  std::vector<double> z1(n), inner(count);
  BitBlock w(n);
  for (int64_t i = 0; i < count; ++i) {
    R.apply_into(cw[i], w);
    for (int j = 0; j < n; ++j) z1[j] = w.get(j) ? -y1.samples[j] : y1.samples[j];
    // log P(y1 | v0, v1) = corr(z1, phi(v1))/sigma^2 + const
    double mx = kNegInf;
    for (int64_t m = 0; m < count; ++m) {
      double c = 0.0;
      for (int j = 0; j < n; ++j) c += cw[m].get(j) ? -z1[j] : z1[j];
      inner[m] = c * inv_s1;
      if (inner[m] > mx) mx = inner[m];
    }
    double sum = 0.0;
    for (int64_t m = 0; m < count; ++m) sum += std::exp(inner[m] - mx);
    double log_sum = mx + std::log(sum);
    double base = corr0[i] * inv_s0;
    if (base + log_sum > best_map) {
      best_map = base + log_sum;
      arg_map = i;
    }
    if (base + mx > best_ml) {
      best_ml = base + mx;
      arg_ml = i;
    }
  }
  return MapMlResult{cw[arg_map], cw[arg_ml]};
}

}  // namespace srumcc

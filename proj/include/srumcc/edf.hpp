#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srumcc/basic_code.hpp"
#include "srumcc/bitblock.hpp"
#include "srumcc/channel.hpp"
#include "srumcc/random_transform.hpp"

namespace srumcc {

// Empirical divergence (1/n) log2[P(y|x)/P(y)] with P(y) the equal-prior
// mixture over both bit values per coordinate. Bounded above by 1; the
// mean for the transmitted word equals I(X;Y). Evaluated in the log
// domain through softplus so high SNR cannot overflow.
double edf(const BitBlock& x, std::span<const double> y, double sigma2);

inline double edf(const BitBlock& x, const ReceivedBlock& y) {
  return edf(x, y.samples, y.sigma2);
}

// Two-term acceptance metric for a candidate first-block codeword:
// M2 = D(cand, y0) + D(v~, y1 * phi(cand R)) where v~ is the basic-code
// ML word for the flipped second block. Returns (M2, v~).
std::pair<double, BitBlock> m2_metric(const BitBlock& cand, const ReceivedBlock& y0,
                                      const ReceivedBlock& y1, const RandomTransform& R,
                                      const BasicCode& basic);

struct MetricSample {
  enum class Label { correct, erroneous, random_flip, random_word };
  double value = 0.0;
  Label label = Label::correct;
};

const char* label_name(MetricSample::Label label);

// Per-SNR acceptance thresholds, learned off-line or transcribed.
// Lookup is linear in dB between calibrated points, clamped at the ends.
struct ThresholdTable {
  std::string code_id;
  int ell_max = 64;
  std::string policy;
  uint64_t seed = 0;
  std::vector<std::pair<double, double>> entries;  // (snr_db, T), ascending snr

  double lookup(double snr_db) const;
  bool covers(double snr_db) const;

  // Versioned text file: '#' header lines (code_id, ell_max, policy,
  // seed), then "snr_db,T" lines.
  void save(const std::string& path) const;
  static ThresholdTable load(const std::string& path);

  // Threshold sets for the 16-state rate-1/2 tail-biting basic code with
  // k=32: the conservative set A and the faster set B (A - 0.35).
  static ThresholdTable preset_a();
  static ThresholdTable preset_b();
};

struct CalibrationPolicy {
  enum class Kind { preset_a, preset_b, learned };
  Kind kind = Kind::learned;
  double correct_quantile = 0.01;    // bounds the false-reject rate
  double erroneous_quantile = 0.99;  // cap: T stays at or below this point
};

// Simulates M2 populations for correct and erroneous candidates at each
// SNR and picks T per policy. With no erroneous samples (very high SNR)
// the correct-quantile rule alone applies and the entry is flagged on
// stderr.
ThresholdTable calibrate_thresholds(const BasicCode& basic, const RandomTransform& R,
                                    std::span<const double> snr_list, int ell_max,
                                    int trials, const CalibrationPolicy& policy, uint64_t seed);

// EDF samples for the four statistical cases: the transmitted codeword,
// an independent random word, the ML word for y, and the ML word after a
// random flip of y.
std::vector<MetricSample> collect_histograms(const BasicCode& basic, double sigma2,
                                             int trials, uint64_t seed);

// M2 samples labelled correct/erroneous from list decoding of two-block
// transmissions (the populations the threshold separates).
std::vector<MetricSample> collect_m2_histograms(const BasicCode& basic, const RandomTransform& R,
                                                double sigma2, int ell_max, int trials,
                                                uint64_t seed);

}  // namespace srumcc

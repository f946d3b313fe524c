#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "srumcc/basic_code.hpp"
#include "srumcc/bounds.hpp"
#include "srumcc/edf.hpp"
#include "srumcc/random_transform.hpp"
#include "srumcc/sc_decoder.hpp"

namespace srumcc {

struct SimConfig {
  std::string code = "conv:[27,31]o:k=32:tb";
  int L = 49;
  std::vector<double> snr_db = {2.0, 2.5, 3.0, 3.5, 4.0};
  uint64_t master_seed = 1;
  uint64_t r_seed = 7;
  int64_t max_frames = 1000000;
  int64_t min_subframe_errors = 100;
  int ell_max = 64;
  int window = 2;
  int keep_list = 4;
  std::string threshold_policy = "preset-A";  // preset-A | preset-B | learned | file:<path>
  int calib_trials = 2000;                    // learned policy, per SNR
  int threads = 0;                            // 0: all hardware threads

  static SimConfig from_json_file(const std::string& path);
  static SimConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  uint64_t digest() const;  // FNV-1a of the canonical JSON

  void validate() const;
};

struct SimRecord {
  double snr_db = 0.0;
  double sigma2 = 0.0;
  int64_t frames = 0;
  int64_t subframes = 0;
  int64_t subframe_errors = 0;
  double fer = 0.0;         // subframe_errors / subframes
  double fer_stderr = 0.0;  // sqrt(p(1-p)/subframes)
  double frame_error_rate = 0.0;
  double avg_list_size = 0.0;
  double fer0 = 0.0;  // measured first-position error rate
  std::vector<int64_t> fer_t_errors;     // errors per position
  std::vector<int64_t> first_error_at;   // first-error histogram
  int64_t frame_errors = 0;
  int64_t total_list_size = 0;
  double fer0_bound = 0.0;  // union bound (attached by run_sweep)
  double fer_upper = 0.0;   // (L+1)/2 * fer0_bound
  double seconds = 0.0;
  bool converged = false;   // min_subframe_errors reached
};

// Simulates one SNR point. Frame i draws its data and noise from streams
// keyed by (master_seed, snr_index, i), so the record is a pure function
// of the config, independent of thread count and scheduling.
SimRecord run_point(const SimConfig& cfg, int snr_index, const BasicCode& basic,
                    const RandomTransform& R, const ThresholdTable& thresholds);

struct SweepResult {
  std::vector<SimRecord> records;
  EnsembleWEF ensemble;
  ThresholdTable thresholds;
};

SweepResult run_sweep(const SimConfig& cfg);

ThresholdTable resolve_thresholds(const SimConfig& cfg, const BasicCode& basic,
                                  const RandomTransform& R);

// CSV with '#' provenance header; one row per SNR point. with_timing=false
// zeroes the seconds column for byte-reproducible output.
void write_sweep_csv(std::ostream& os, const SimConfig& cfg, const SweepResult& sweep,
                     bool with_timing);

}  // namespace srumcc

#pragma once

#include <vector>

#include "srumcc/basic_code.hpp"
#include "srumcc/channel.hpp"
#include "srumcc/edf.hpp"
#include "srumcc/random_transform.hpp"

namespace srumcc {

struct DecodeConfig {
  int ell_max = 64;
  int window = 2;        // 2: decide from (y_t, y_t+1); 3: extend failed decisions
  int keep_list = 4;     // candidates retained when the window-3 step triggers
  ThresholdTable thresholds;

  void validate() const;
};

struct SubframeTrace {
  int list_size = 0;       // candidates drawn for this sub-frame
  double m_max = 0.0;      // best two-term metric seen
  bool passed = false;     // a candidate cleared the threshold
  bool extended = false;   // window-3 reprocessing ran
};

struct DecodeTrace {
  std::vector<SubframeTrace> subframes;

  double avg_list_size() const;
  int64_t total_list_size() const;
};

struct DecodeResult {
  std::vector<BitBlock> u_blocks;
  DecodeTrace trace;
};

// Sliding-window successive cancellation list decoding. For each
// sub-frame, candidates come serially from the list decoder on the
// cancelled observation z0; each is scored by the two-term divergence
// metric against the next block; the first one clearing the threshold
// (or the metric-maximizing one after ell_max draws) is decided and
// cancelled from the next block. The final step tests the termination
// block directly against the all-zero word. window=3 reprocesses
// low-confidence decisions against one more future block.
DecodeResult decode_frame(const std::vector<ReceivedBlock>& y_blocks, const BasicCode& basic,
                          const RandomTransform& R, const DecodeConfig& cfg);

// Reusable decoder (buffers survive across frames). One instance per
// thread; trellis, transform and thresholds are shared immutable state.
class FrameDecoder {
 public:
  FrameDecoder(const BasicCode& basic, const RandomTransform& R, const DecodeConfig& cfg);

  DecodeResult decode(const std::vector<ReceivedBlock>& y_blocks);

 private:
  struct Candidate {
    BitBlock info, codeword;
    double m2 = 0.0;
    double corr0 = 0.0;  // correlation of the candidate against z0
  };

  // One window-2 step: draws candidates from z0, scores them against
  // y_next, applies the threshold. Returns the index of the decision in
  // cands_ and fills the trace entry. When track_joint is set, also
  // reports the best correlation of (candidate, completion) pairs seen,
  // for the window-3 selection.
  int window2_step(const std::vector<double>& z0, const ReceivedBlock& y_next, bool last_step,
                   SubframeTrace& tr, std::vector<Candidate>& cands, double* best_joint);

  const BasicCode& basic_;
  const RandomTransform& R_;
  DecodeConfig cfg_;
  double threshold_ = 0.0;

  SlvaIterator slva_;
  std::vector<double> z0_, z1_, z0_inner_;
  BitBlock w_, zero_word_;
  std::vector<Candidate> cands_, inner_cands_;
};

// Lower bound on first-sub-frame error rate: the probability that the
// transmitted codeword is missing from the first ell_max list outputs.
double genie_lower_bound(const BasicCode& basic, int ell_max, double sigma2, int64_t trials,
                         uint64_t seed);

}  // namespace srumcc

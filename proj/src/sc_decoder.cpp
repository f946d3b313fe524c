#include "srumcc/sc_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace srumcc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void DecodeConfig::validate() const {
  if (ell_max < 1) throw std::invalid_argument("DecodeConfig: ell_max must be >= 1");
  if (window != 2 && window != 3) throw std::invalid_argument("DecodeConfig: window must be 2 or 3");
  if (keep_list < 1 || keep_list > ell_max)
    throw std::invalid_argument("DecodeConfig: keep_list must be in [1, ell_max]");
  if (thresholds.entries.empty()) throw std::invalid_argument("DecodeConfig: empty threshold table");
}

double DecodeTrace::avg_list_size() const {
  if (subframes.empty()) return 0.0;
  return static_cast<double>(total_list_size()) / static_cast<double>(subframes.size());
}

int64_t DecodeTrace::total_list_size() const {
  int64_t s = 0;
  for (const auto& t : subframes) s += t.list_size;
  return s;
}

FrameDecoder::FrameDecoder(const BasicCode& basic, const RandomTransform& R,
                           const DecodeConfig& cfg)
    : basic_(basic), R_(R), cfg_(cfg), w_(basic.n()) {
  cfg_.validate();
  if (R.n() != basic.n()) throw std::invalid_argument("FrameDecoder: transform size mismatch");
}

int FrameDecoder::window2_step(const std::vector<double>& z0, const ReceivedBlock& y_next,
                               bool last_step, SubframeTrace& tr, std::vector<Candidate>& cands,
                               double* best_joint) {
  const double sigma2 = y_next.sigma2;
  slva_.init(basic_.trellis(), z0);
  double m_max = kNegInf;
  int best_idx = -1;
  if (best_joint) *best_joint = kNegInf;
  int count = 0;
  while (m_max <= threshold_ && count < cfg_.ell_max) {
    if (static_cast<int>(cands.size()) <= count) cands.emplace_back();
    Candidate& c = cands[count];
    if (!slva_.next(c.info, c.codeword, &c.corr0)) break;
    ++count;
    double d0 = edf(c.codeword, z0, sigma2);
    R_.apply_into(c.codeword, w_);
    flip_into(y_next.samples, w_, z1_);
    double d1, completion_corr;
    if (last_step) {
      // Termination block: the clean continuation is the known all-zero
      // word, so score z1 against it directly instead of running the
      // inner pass.
      if (zero_word_.size() != basic_.n()) zero_word_ = BitBlock(basic_.n());
      d1 = edf(zero_word_, z1_, sigma2);
      completion_corr = std::accumulate(z1_.begin(), z1_.end(), 0.0);
    } else {
      ViterbiResult inner = viterbi(basic_.trellis(), z1_);
      d1 = edf(inner.codeword, z1_, sigma2);
      completion_corr = inner.metric;
    }
    c.m2 = d0 + d1;
    if (best_joint) *best_joint = std::max(*best_joint, c.corr0 + completion_corr);
    if (c.m2 > m_max) {
      m_max = c.m2;
      best_idx = count - 1;
    }
  }
  if (best_idx < 0) throw std::logic_error("window2_step: list decoder produced no candidate");
  tr.list_size = count;
  tr.m_max = m_max;
  tr.passed = m_max > threshold_;
  return best_idx;
}

DecodeResult FrameDecoder::decode(const std::vector<ReceivedBlock>& y_blocks) {
  if (y_blocks.size() < 2) throw std::invalid_argument("decode: need at least two received blocks");
  const int L = static_cast<int>(y_blocks.size()) - 1;
  for (const auto& b : y_blocks)
    if (static_cast<int>(b.samples.size()) != basic_.n())
      throw std::invalid_argument("decode: received block length mismatch");
  threshold_ = cfg_.thresholds.lookup(ChannelParams{y_blocks[0].sigma2}.snr_db());

  DecodeResult res;
  res.u_blocks.resize(L);
  res.trace.subframes.assign(L, SubframeTrace{});

  z0_ = y_blocks[0].samples;
  for (int t = 0; t < L; ++t) {
    SubframeTrace& tr = res.trace.subframes[t];
    bool last = (t == L - 1);
    int idx = window2_step(z0_, y_blocks[t + 1], last, tr, cands_, nullptr);
    int decision = idx;

    if (cfg_.window == 3 && !last && !tr.passed) {
      // Low confidence: rescore the strongest candidates against one more
      // future block and pick the jointly most likely chain.
      tr.extended = true;
      std::vector<int> order(tr.list_size);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return cands_[a].m2 > cands_[b].m2; });
      int keep = std::min(cfg_.keep_list, tr.list_size);
      double best_total = kNegInf;
      bool inner_last = (t + 1 == L - 1);
      for (int j = 0; j < keep; ++j) {
        const Candidate& c = cands_[order[j]];
        R_.apply_into(c.codeword, w_);
        flip_into(y_blocks[t + 1].samples, w_, z0_inner_);
        SubframeTrace inner_tr;
        double inner_joint;
        window2_step(z0_inner_, y_blocks[t + 2], inner_last, inner_tr, inner_cands_, &inner_joint);
        double total = c.corr0 + inner_joint;
        if (total > best_total) {
          best_total = total;
          decision = order[j];
        }
      }
    }

    const Candidate& chosen = cands_[decision];
    res.u_blocks[t] = chosen.info;
    if (!last) {
      R_.apply_into(chosen.codeword, w_);
      flip_into(y_blocks[t + 1].samples, w_, z0_);
    }
  }
  return res;
}

DecodeResult decode_frame(const std::vector<ReceivedBlock>& y_blocks, const BasicCode& basic,
                          const RandomTransform& R, const DecodeConfig& cfg) {
  FrameDecoder dec(basic, R, cfg);
  return dec.decode(y_blocks);
}

double genie_lower_bound(const BasicCode& basic, int ell_max, double sigma2, int64_t trials,
                         uint64_t seed) {
  return list_failure_probability(basic, ell_max, sigma2, trials, seed);
}

}  // namespace srumcc

#include "srumcc/basic_code.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "srumcc/channel.hpp"
#include "srumcc/rng.hpp"

namespace srumcc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

BasicCode::BasicCode(const CodeSpec& spec) : spec_(spec) {
  if (spec.family == CodeSpec::Family::rm_product) {
    trellis_ = build_rm_product_trellis(spec.rm_copies);
  } else {
    polys_ = GeneratorPolynomials::from_octal(spec.octal_taps);
    if (spec.mode == TrellisMode::tail_biting && spec.k < polys_.memory())
      throw std::invalid_argument("BasicCode: tail-biting needs k >= encoder memory");
    trellis_ = build_trellis(polys_, spec.k, spec.mode);
  }
}

BitBlock BasicCode::encode(const BitBlock& u) const {
  if (u.size() != k()) throw std::invalid_argument("BasicCode::encode: info length mismatch");
  if (spec_.family == CodeSpec::Family::convolutional)
    return conv_encode(polys_, u, spec_.mode);
  return trellis_encode(trellis_, u);
}

uint64_t& acs_op_count() {
  static thread_local uint64_t count = 0;
  return count;
}

namespace {

// Per-section branch correlations sum(+-y) for every edge, via a table
// over the 2^bits output patterns.
void build_branch_metrics(const Trellis& t, std::span<const double> y,
                          std::vector<double>& bm, std::vector<int32_t>& bm_off) {
  bm_off.assign(t.num_sections() + 1, 0);
  for (int s = 0; s < t.num_sections(); ++s)
    bm_off[s + 1] = bm_off[s] + static_cast<int32_t>(t.sections[s].next.size());
  bm.resize(bm_off.back());
  double pattern[1 << 8];
  int pos = 0;
  for (int si = 0; si < t.num_sections(); ++si) {
    const TrellisSection& sec = t.sections[si];
    int np = 1 << sec.bits;
    for (int p = 0; p < np; ++p) {
      double c = 0.0;
      for (int j = 0; j < sec.bits; ++j) c += ((p >> j) & 1) ? -y[pos + j] : y[pos + j];
      pattern[p] = c;
    }
    double* out = bm.data() + bm_off[si];
    for (size_t e = 0; e < sec.next.size(); ++e) out[e] = pattern[sec.out[e]];
    pos += sec.bits;
  }
}

// Boundary state counts: sections[b].in_states for b < K, final out_states.
std::vector<int32_t> boundary_offsets(const Trellis& t) {
  std::vector<int32_t> off(t.num_sections() + 2, 0);
  for (int b = 0; b <= t.num_sections(); ++b) {
    int states = b < t.num_sections() ? t.sections[b].in_states : t.sections.back().out_states;
    off[b + 1] = off[b] + states;
  }
  return off;
}

struct SinglePassResult {
  double metric = kNegInf;
  int end_state = -1;
};

// Forward Viterbi for one (start,end) constraint. end_state < 0 leaves the
// final boundary free. Decision = pred index per (section, state).
SinglePassResult forward_pass(const Trellis& t, std::span<const double> bm,
                              std::span<const int32_t> bm_off, int start_state, int end_state,
                              std::vector<double>& a0, std::vector<double>& a1,
                              std::vector<uint8_t>& dec, std::span<const int32_t> bnd_off) {
  int K = t.num_sections();
  dec.resize(bnd_off[K + 1]);
  a0.assign(t.sections[0].in_states, kNegInf);
  a0[start_state] = 0.0;
  for (int si = 0; si < K; ++si) {
    const TrellisSection& sec = t.sections[si];
    const double* b = bm.data() + bm_off[si];
    a1.assign(sec.out_states, kNegInf);
    uint8_t* d = dec.data() + bnd_off[si + 1];
    for (int s2 = 0; s2 < sec.out_states; ++s2) {
      double best = kNegInf;
      uint8_t best_p = 0;
      for (int32_t p = sec.pred_offset[s2]; p < sec.pred_offset[s2 + 1]; ++p) {
        int e = sec.pred_edge[p];
        double cand = a0[e / sec.n_in()] + b[e];
        if (cand > best) {
          best = cand;
          best_p = static_cast<uint8_t>(p - sec.pred_offset[s2]);
        }
      }
      a1[s2] = best;
      d[s2] = best_p;
    }
    std::swap(a0, a1);
    acs_op_count() += static_cast<uint64_t>(sec.out_states) * sec.bits;
  }
  SinglePassResult r;
  if (end_state >= 0) {
    r.metric = a0[end_state];
    r.end_state = end_state;
  } else {
    for (int s = 0; s < static_cast<int>(a0.size()); ++s)
      if (a0[s] > r.metric) {
        r.metric = a0[s];
        r.end_state = s;
      }
  }
  return r;
}

void traceback(const Trellis& t, const std::vector<uint8_t>& dec, std::span<const int32_t> bnd_off,
               int end_state, BitBlock& info, BitBlock& codeword) {
  int K = t.num_sections();
  if (info.size() != t.k) info = BitBlock(t.k);
  if (codeword.size() != t.n) codeword = BitBlock(t.n);
  info.clear();
  codeword.clear();
  int state = end_state;
  int bit_pos = t.n;
  int info_pos = t.k;
  for (int si = K - 1; si >= 0; --si) {
    const TrellisSection& sec = t.sections[si];
    int e = sec.pred_edge[sec.pred_offset[state] + dec[bnd_off[si + 1] + state]];
    bit_pos -= sec.bits;
    uint32_t out = sec.out[e];
    for (int j = 0; j < sec.bits; ++j)
      if ((out >> j) & 1) codeword.set(bit_pos + j, true);
    if (sec.has_input && (e & 1)) info.set(--info_pos, true);
    else if (sec.has_input) --info_pos;
    state = e / sec.n_in();
  }
}

// Tail-biting forward pass over all start states at once, layout
// alpha[state*C + c]. Assumes the uniform radix-2 sections built by
// build_trellis. Decisions are per-(section,state) masks over starts.
struct TbPassResult {
  double metric = kNegInf;
  int subcode = -1;
};

TbPassResult forward_pass_tb(const Trellis& t, std::span<const double> bm,
                             std::span<const int32_t> bm_off, std::vector<double>& a0,
                             std::vector<double>& a1, std::vector<uint16_t>& dec) {
  int K = t.num_sections();
  int S = t.sections[0].in_states;
  int C = S;
  a0.assign(static_cast<size_t>(S) * C, kNegInf);
  for (int c = 0; c < C; ++c) a0[static_cast<size_t>(c) * C + c] = 0.0;
  a1.resize(a0.size());
  dec.assign(static_cast<size_t>(K) * S, 0);
  for (int si = 0; si < K; ++si) {
    const TrellisSection& sec = t.sections[si];
    const double* b = bm.data() + bm_off[si];
    uint16_t* d = dec.data() + static_cast<size_t>(si) * S;
    for (int s2 = 0; s2 < S; ++s2) {
      int e0 = sec.pred_edge[sec.pred_offset[s2]];
      int e1 = sec.pred_edge[sec.pred_offset[s2] + 1];
      const double* p0 = a0.data() + static_cast<size_t>(e0 / 2) * C;
      const double* p1 = a0.data() + static_cast<size_t>(e1 / 2) * C;
      double w0 = b[e0], w1 = b[e1];
      double* o = a1.data() + static_cast<size_t>(s2) * C;
      uint16_t mask = 0;
      for (int c = 0; c < C; ++c) {
        double m0 = p0[c] + w0;
        double m1 = p1[c] + w1;
        if (m1 > m0) {
          o[c] = m1;
          mask |= static_cast<uint16_t>(1u << c);
        } else {
          o[c] = m0;
        }
      }
      d[s2] = mask;
    }
    std::swap(a0, a1);
    acs_op_count() += static_cast<uint64_t>(S) * C * sec.bits;
  }
  TbPassResult r;
  for (int c = 0; c < C; ++c) {
    double m = a0[static_cast<size_t>(c) * C + c];
    if (m > r.metric) {
      r.metric = m;
      r.subcode = c;
    }
  }
  return r;
}

void traceback_tb(const Trellis& t, const std::vector<uint16_t>& dec, int subcode,
                  BitBlock& info, BitBlock& codeword) {
  int K = t.num_sections();
  int S = t.sections[0].in_states;
  if (info.size() != t.k) info = BitBlock(t.k);
  if (codeword.size() != t.n) codeword = BitBlock(t.n);
  info.clear();
  codeword.clear();
  int state = subcode;
  int bit_pos = t.n;
  for (int si = K - 1; si >= 0; --si) {
    const TrellisSection& sec = t.sections[si];
    int pick = (dec[static_cast<size_t>(si) * S + state] >> subcode) & 1;
    int e = sec.pred_edge[sec.pred_offset[state] + pick];
    bit_pos -= sec.bits;
    uint32_t out = sec.out[e];
    for (int j = 0; j < sec.bits; ++j)
      if ((out >> j) & 1) codeword.set(bit_pos + j, true);
    if (e & 1) info.set(si, true);
    state = e / 2;
  }
}

}  // namespace

ViterbiResult viterbi(const Trellis& t, std::span<const double> y) {
  if (static_cast<int>(y.size()) != t.n)
    throw std::invalid_argument("viterbi: received length mismatch");
  static thread_local std::vector<double> bm, a0, a1;
  static thread_local std::vector<int32_t> bm_off;
  static thread_local std::vector<uint8_t> dec8;
  static thread_local std::vector<uint16_t> dec16;
  build_branch_metrics(t, y, bm, bm_off);
  ViterbiResult r;
  if (t.mode == TrellisMode::tail_biting) {
    TbPassResult p = forward_pass_tb(t, bm, bm_off, a0, a1, dec16);
    r.metric = p.metric;
    traceback_tb(t, dec16, p.subcode, r.info, r.codeword);
  } else {
    auto bnd = boundary_offsets(t);
    SinglePassResult p = forward_pass(t, bm, bm_off, 0, -1, a0, a1, dec8, bnd);
    r.metric = p.metric;
    traceback(t, dec8, bnd, p.end_state, r.info, r.codeword);
  }
  return r;
}

void SlvaIterator::init(const Trellis& t, std::span<const double> y) {
  if (static_cast<int>(y.size()) != t.n)
    throw std::invalid_argument("SlvaIterator: received length mismatch");
  trellis_ = &t;
  emitted_ = 0;
  num_subcodes_ = t.num_subcodes();
  build_branch_metrics(t, y, bm_, bm_off_);

  int K = t.num_sections();
  beta_off_ = boundary_offsets(t);
  int C = num_subcodes_;
  beta_.assign(static_cast<size_t>(beta_off_.back()) * C, kNegInf);

  // Backward pass: metric-to-go to a valid end. Tail-biting subcode c must
  // end in state c; other modes end anywhere (the block trellis has a
  // single final state).
  {
    double* last = beta_.data() + static_cast<size_t>(beta_off_[K]) * C;
    int final_states = beta_off_[K + 1] - beta_off_[K];
    for (int s = 0; s < final_states; ++s)
      for (int c = 0; c < C; ++c)
        last[static_cast<size_t>(s) * C + c] =
            (t.mode == TrellisMode::tail_biting && s != c) ? kNegInf : 0.0;
  }
  for (int si = K - 1; si >= 0; --si) {
    const TrellisSection& sec = t.sections[si];
    const double* b = bm_.data() + bm_off_[si];
    double* cur = beta_.data() + static_cast<size_t>(beta_off_[si]) * C;
    const double* nxt = beta_.data() + static_cast<size_t>(beta_off_[si + 1]) * C;
    int n_in = sec.n_in();
    for (int s = 0; s < sec.in_states; ++s) {
      double* o = cur + static_cast<size_t>(s) * C;
      for (int c = 0; c < C; ++c) o[c] = kNegInf;
      for (int e = s * n_in; e < (s + 1) * n_in; ++e) {
        const double* p = nxt + static_cast<size_t>(sec.next[e]) * C;
        double w = b[e];
        for (int c = 0; c < C; ++c) {
          double cand = p[c] + w;
          if (cand > o[c]) o[c] = cand;
        }
      }
    }
    acs_op_count() += static_cast<uint64_t>(sec.in_states) * C * sec.bits;
  }

  // Seed the merge with each subcode's exact best metric (its root's
  // metric-to-go); the searches themselves start lazily on first pop.
  subs_.assign(C, SubSearch{});
  merge_ = std::priority_queue<MergeEntry>();
  for (int c = 0; c < C; ++c) {
    SubSearch& s = subs_[c];
    int start = (t.mode == TrellisMode::tail_biting) ? c : 0;
    double f = beta_[static_cast<size_t>(beta_off_[0] + start) * C + c];
    if (f == kNegInf) continue;
    s.arena.push_back(Node{0.0, -1, start, 0, 0});
    s.heap.push(HeapEntry{f, 0});
    merge_.push(MergeEntry{f, c});
  }
}

// Pops until the subcode's search completes its next path; stores it as
// pending. Expansion pushes the input-0 edge first so equal-metric
// candidates surface in that order.
void SlvaIterator::advance(int sub) {
  const Trellis& t = *trellis_;
  SubSearch& s = subs_[sub];
  s.pending_valid = false;
  int K = t.num_sections();
  int C = num_subcodes_;
  while (!s.heap.empty()) {
    HeapEntry top = s.heap.top();
    s.heap.pop();
    const Node nd = s.arena[top.node];
    if (nd.boundary == K) {
      s.pending_valid = true;
      s.pending_metric = nd.g;
      s.pending_node = top.node;
      return;
    }
    const TrellisSection& sec = t.sections[nd.boundary];
    const double* b = bm_.data() + bm_off_[nd.boundary];
    const double* nxt = beta_.data() + static_cast<size_t>(beta_off_[nd.boundary + 1]) * C;
    int n_in = sec.n_in();
    acs_op_count() += sec.bits;
    for (int in = 0; in < n_in; ++in) {
      int e = nd.state * n_in + in;
      double g2 = nd.g + b[e];
      double f2 = g2 + nxt[static_cast<size_t>(sec.next[e]) * C + sub];
      if (f2 == kNegInf) continue;
      s.arena.push_back(Node{g2, static_cast<int32_t>(top.node), sec.next[e],
                             static_cast<int16_t>(nd.boundary + 1), static_cast<uint8_t>(in)});
      s.heap.push(HeapEntry{f2, static_cast<uint32_t>(s.arena.size() - 1)});
    }
  }
}

void SlvaIterator::reconstruct(const SubSearch& s, uint32_t node, BitBlock& info,
                               BitBlock& codeword) const {
  const Trellis& t = *trellis_;
  if (info.size() != t.k) info = BitBlock(t.k);
  if (codeword.size() != t.n) codeword = BitBlock(t.n);
  info.clear();
  codeword.clear();
  int32_t cur = static_cast<int32_t>(node);
  int bit_pos = t.n;
  int info_pos = t.k;
  while (s.arena[cur].parent >= 0) {
    const Node& nd = s.arena[cur];
    const Node& par = s.arena[nd.parent];
    const TrellisSection& sec = t.sections[par.boundary];
    int e = par.state * sec.n_in() + nd.input;
    bit_pos -= sec.bits;
    uint32_t out = sec.out[e];
    for (int j = 0; j < sec.bits; ++j)
      if ((out >> j) & 1) codeword.set(bit_pos + j, true);
    if (sec.has_input) {
      --info_pos;
      if (nd.input) info.set(info_pos, true);
    }
    cur = nd.parent;
  }
}

bool SlvaIterator::next(BitBlock& info, BitBlock& codeword, double* metric) {
  if (merge_.empty()) return false;
  MergeEntry top = merge_.top();
  merge_.pop();
  SubSearch& s = subs_[top.sub];
  if (!s.started) {
    s.started = true;
    advance(top.sub);  // materializes the path whose metric seeded the merge
  }
  if (metric) *metric = s.pending_metric;
  reconstruct(s, s.pending_node, info, codeword);
  ++emitted_;
  advance(top.sub);
  if (s.pending_valid) merge_.push(MergeEntry{s.pending_metric, top.sub});
  return true;
}

namespace {

struct ListTrialStats {
  int64_t trials = 0;
  int64_t found = 0;
  int64_t rank_sum = 0;
  double rank_sq_sum = 0.0;
};

ListTrialStats run_list_trials(const BasicCode& code, int ell_max, double sigma2,
                               int64_t trials, uint64_t seed) {
  ListTrialStats st;
  st.trials = trials;
  BitBlock u(code.k()), info(code.k()), cw(code.n());
  std::vector<double> x, y;
  SlvaIterator it;
  for (int64_t tr = 0; tr < trials; ++tr) {
    SplitMix64 data(mix_seed({seed, static_cast<uint64_t>(tr), 0xda7a}));
    for (int i = 0; i < code.k(); ++i) u.set(i, data.next() & 1);
    BitBlock v = code.encode(u);
    bpsk_map_into(v, x);
    GaussianStream noise(mix_seed({seed, static_cast<uint64_t>(tr), 0x4015e}));
    awgn_into(x, sigma2, noise, y);
    it.init(code.trellis(), y);
    for (int ell = 1; ell <= ell_max; ++ell) {
      if (!it.next(info, cw)) break;
      if (cw == v) {
        st.found++;
        st.rank_sum += ell;
        st.rank_sq_sum += static_cast<double>(ell) * ell;
        break;
      }
    }
  }
  return st;
}

}  // namespace

double list_failure_probability(const BasicCode& code, int ell_max, double sigma2,
                                int64_t trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("list_failure_probability: trials must be >= 1");
  ListTrialStats st = run_list_trials(code, ell_max, sigma2, trials, seed);
  return static_cast<double>(st.trials - st.found) / static_cast<double>(st.trials);
}

ListRankProfile list_rank_profile(const BasicCode& code, int ell_max, double sigma2,
                                  int64_t trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("list_rank_profile: trials must be >= 1");
  ListTrialStats st = run_list_trials(code, ell_max, sigma2, trials, seed);
  ListRankProfile p;
  p.trials = st.trials;
  p.found = st.found;
  p.failure_prob = static_cast<double>(st.trials - st.found) / static_cast<double>(st.trials);
  if (st.found > 0) {
    p.mean_rank = static_cast<double>(st.rank_sum) / static_cast<double>(st.found);
    double var = st.rank_sq_sum / static_cast<double>(st.found) - p.mean_rank * p.mean_rank;
    p.rank_stderr = std::sqrt(std::max(0.0, var) / static_cast<double>(st.found));
  }
  return p;
}

}  // namespace srumcc

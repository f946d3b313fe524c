#pragma once

#include <cstdint>
#include <memory>
#include <queue>
#include <span>
#include <vector>

#include "srumcc/bitblock.hpp"
#include "srumcc/code_spec.hpp"
#include "srumcc/trellis.hpp"

namespace srumcc {

// A basic block code C[n,k] with a trellis for decoding: a truncated or
// tail-biting convolutional code, or the RM[8,4] Cartesian product.
class BasicCode {
 public:
  explicit BasicCode(const CodeSpec& spec);

  const CodeSpec& spec() const { return spec_; }
  const Trellis& trellis() const { return trellis_; }
  int k() const { return trellis_.k; }
  int n() const { return trellis_.n; }
  std::string id() const { return spec_.to_string(); }

  BitBlock encode(const BitBlock& u) const;

 private:
  CodeSpec spec_;
  GeneratorPolynomials polys_;
  Trellis trellis_;
};

// Thread-local counter of add-compare-select equivalents, at the
// granularity of one operation per state per received bit. Viterbi and
// list passes add to it; tests may reset and read it.
uint64_t& acs_op_count();

struct ViterbiResult {
  BitBlock info;
  BitBlock codeword;
  double metric = 0.0;  // correlation sum(y_i * phi(v_i))
};

// Exact ML decoding under the correlation metric. Tail-biting mode
// maximizes over all start=end subcodes.
ViterbiResult viterbi(const Trellis& t, std::span<const double> y);

// Serial list decoding: emits codewords in non-increasing correlation
// (equivalently likelihood) order. The first output equals viterbi().
// Implemented as best-first search over path prefixes with the exact
// metric-to-go from a backward pass; tail-biting runs one search per
// subcode merged best-first. Equal metrics resolve toward the candidate
// generated first (input bit 0 expanded before 1).
class SlvaIterator {
 public:
  SlvaIterator() = default;

  void init(const Trellis& t, std::span<const double> y);

  // Fills the next-best codeword; returns false once the codebook is
  // exhausted. metric receives the correlation if non-null.
  bool next(BitBlock& info, BitBlock& codeword, double* metric = nullptr);

  int emitted() const { return emitted_; }

 private:
  struct Node {
    double g;        // prefix correlation
    int32_t parent;
    int32_t state;
    int16_t boundary;
    uint8_t input;
  };
  struct HeapEntry {
    double f;
    uint32_t node;
    bool operator<(const HeapEntry& o) const {
      if (f != o.f) return f < o.f;
      return node > o.node;  // FIFO on ties
    }
  };
  struct SubSearch {
    std::vector<Node> arena;
    std::priority_queue<HeapEntry> heap;
    bool started = false;  // searches materialize on first pop from the merge
    bool pending_valid = false;
    double pending_metric = 0.0;
    uint32_t pending_node = 0;
  };
  struct MergeEntry {
    double metric;
    int sub;
    bool operator<(const MergeEntry& o) const {
      if (metric != o.metric) return metric < o.metric;
      return sub > o.sub;
    }
  };

  void advance(int sub);
  void reconstruct(const SubSearch& s, uint32_t node, BitBlock& info, BitBlock& codeword) const;

  const Trellis* trellis_ = nullptr;
  int num_subcodes_ = 1;
  int emitted_ = 0;
  std::vector<double> bm_;          // branch metrics, per section offset
  std::vector<int32_t> bm_off_;
  std::vector<double> beta_;        // metric-to-go, layout [boundary][state][subcode]
  std::vector<int32_t> beta_off_;   // per-boundary offsets (in states)
  std::vector<SubSearch> subs_;
  std::priority_queue<MergeEntry> merge_;
};

// Monte Carlo estimate of P(transmitted codeword not among the first
// ell_max list outputs).
double list_failure_probability(const BasicCode& code, int ell_max, double sigma2,
                                int64_t trials, uint64_t seed);

struct ListRankProfile {
  double mean_rank = 0.0;      // mean rank over trials where the codeword was found
  double rank_stderr = 0.0;
  double failure_prob = 0.0;   // P(not in first ell_max outputs)
  int64_t trials = 0;
  int64_t found = 0;
};

ListRankProfile list_rank_profile(const BasicCode& code, int ell_max, double sigma2,
                                  int64_t trials, uint64_t seed);

}  // namespace srumcc

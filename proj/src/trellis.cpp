#include "srumcc/trellis.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace srumcc {

GeneratorPolynomials GeneratorPolynomials::from_octal(const std::vector<uint32_t>& vals) {
  if (vals.empty()) throw std::invalid_argument("generator polynomials: empty tap list");
  for (uint32_t v : vals)
    if (v == 0) throw std::invalid_argument("generator polynomials: zero tap");
  return GeneratorPolynomials{vals};
}

int GeneratorPolynomials::memory() const {
  int m = 0;
  for (uint32_t t : taps) m = std::max(m, 31 - std::countl_zero(t));
  return m;
}

void TrellisSection::build_predecessors() {
  pred_offset.assign(out_states + 1, 0);
  for (int32_t ns : next) pred_offset[ns + 1]++;
  for (int s = 0; s < out_states; ++s) pred_offset[s + 1] += pred_offset[s];
  pred_edge.assign(next.size(), 0);
  std::vector<int32_t> fill(pred_offset.begin(), pred_offset.end() - 1);
  for (int e = 0; e < static_cast<int>(next.size()); ++e) pred_edge[fill[next[e]]++] = e;
}

int Trellis::max_states() const {
  int m = 1;
  for (const auto& s : sections) m = std::max({m, s.in_states, s.out_states});
  return m;
}

int Trellis::num_subcodes() const {
  return mode == TrellisMode::tail_biting ? sections.front().in_states : 1;
}

int Trellis::tail_biting_start_state(const BitBlock& u) const {
  int m = std::countr_zero(static_cast<unsigned>(sections.front().in_states));
  int s = 0;
  for (int j = 0; j < m; ++j)
    if (u.get(k - 1 - j)) s |= 1 << j;
  return s;
}

Trellis build_trellis(const GeneratorPolynomials& polys, int k, TrellisMode mode) {
  if (k < 1) throw std::invalid_argument("build_trellis: k must be >= 1");
  if (polys.taps.empty()) throw std::invalid_argument("build_trellis: empty tap list");
  if (mode == TrellisMode::block) throw std::invalid_argument("build_trellis: block mode needs a block code");
  int m = polys.memory();
  int n_out = polys.n_out();
  int num_states = 1 << m;

  TrellisSection sec;
  sec.in_states = num_states;
  sec.out_states = num_states;
  sec.bits = n_out;
  sec.has_input = true;
  sec.next.resize(num_states * 2);
  sec.out.resize(num_states * 2);
  for (int s = 0; s < num_states; ++s) {
    for (int b = 0; b < 2; ++b) {
      // Register word: input at bit 0, previous inputs shifted up.
      uint32_t r = static_cast<uint32_t>(b) | (static_cast<uint32_t>(s) << 1);
      uint32_t out = 0;
      for (int j = 0; j < n_out; ++j)
        out |= static_cast<uint32_t>(std::popcount(polys.taps[j] & r) & 1) << j;
      sec.next[s * 2 + b] = static_cast<int32_t>(r & (num_states - 1));
      sec.out[s * 2 + b] = out;
    }
  }
  sec.build_predecessors();

  Trellis t;
  t.mode = mode;
  t.k = k;
  t.n = n_out * k;
  t.sections.assign(k, sec);
  t.input_section.resize(k);
  for (int i = 0; i < k; ++i) t.input_section[i] = i;
  return t;
}

namespace {

// Greedy reduction of a binary generator matrix to minimal span form:
// all row starts distinct and all row ends distinct.
struct SpanRow {
  uint32_t bits;  // column j in bit j
  int start, end;
};

void recompute_span(SpanRow& r, int n) {
  r.start = -1;
  r.end = -1;
  for (int j = 0; j < n; ++j)
    if ((r.bits >> j) & 1) {
      if (r.start < 0) r.start = j;
      r.end = j;
    }
}

std::vector<SpanRow> minimal_span_form(std::vector<uint32_t> rows, int n) {
  std::vector<SpanRow> g(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    g[i].bits = rows[i];
    recompute_span(g[i], n);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < g.size(); ++i)
      for (size_t j = 0; j < g.size(); ++j) {
        if (i == j) continue;
        bool same_start = g[i].start == g[j].start;
        bool same_end = g[i].end == g[j].end;
        if (!same_start && !same_end) continue;
        // Add the shorter-span row into the longer one.
        size_t lo = i, hi = j;
        int span_i = g[i].end - g[i].start;
        int span_j = g[j].end - g[j].start;
        if (span_i > span_j) std::swap(lo, hi);
        g[hi].bits ^= g[lo].bits;
        if (g[hi].bits == 0) throw std::logic_error("minimal_span_form: dependent rows");
        recompute_span(g[hi], n);
        changed = true;
      }
  }
  return g;
}

}  // namespace

Trellis build_rm_product_trellis(int copies) {
  if (copies < 1) throw std::invalid_argument("build_rm_product_trellis: copies must be >= 1");
  // First-order Reed-Muller code of length 8 (the [8,4] extended Hamming
  // code): evaluations of 1, x1, x2, x3 over F_2^3 in lexicographic point
  // order, then reduced to minimal span form so trellis path bits are the
  // information bits.
  const int n1 = 8;
  std::vector<uint32_t> natural = {0xFFu, 0xF0u, 0xCCu, 0xAAu};  // bit j = column j
  // Natural rows are stored LSB = column 0; 0xF0 is x1 = 00001111.
  std::vector<SpanRow> msf = minimal_span_form(natural, n1);
  std::sort(msf.begin(), msf.end(), [](const SpanRow& a, const SpanRow& b) { return a.start < b.start; });

  // Boundary b state = bits of rows with start < b <= end, ordered by row.
  auto active_rows = [&](int b) {
    std::vector<int> act;
    for (int r = 0; r < 4; ++r)
      if (msf[r].start < b && b <= msf[r].end) act.push_back(r);
    return act;
  };

  Trellis t;
  t.mode = TrellisMode::block;
  t.k = 4 * copies;
  t.n = 8 * copies;

  std::vector<TrellisSection> copy_sections;
  for (int i = 0; i < n1; ++i) {
    auto in_act = active_rows(i);
    auto out_act = active_rows(i + 1);
    int starting = -1;
    for (int r = 0; r < 4; ++r)
      if (msf[r].start == i) starting = r;

    TrellisSection sec;
    sec.in_states = 1 << in_act.size();
    sec.out_states = 1 << out_act.size();
    sec.bits = 1;
    sec.has_input = starting >= 0;
    int n_in = sec.n_in();
    sec.next.resize(sec.in_states * n_in);
    sec.out.resize(sec.in_states * n_in);
    for (int s = 0; s < sec.in_states; ++s) {
      for (int b = 0; b < n_in; ++b) {
        // Row values live at this section: active-in rows plus a starting row.
        uint32_t bit = 0;
        int next_state = 0;
        auto row_value = [&](int r) -> int {
          for (size_t a = 0; a < in_act.size(); ++a)
            if (in_act[a] == r) return (s >> a) & 1;
          if (r == starting) return b;
          return 0;  // row not live here; its column entry is 0 anyway
        };
        for (int r = 0; r < 4; ++r)
          bit ^= static_cast<uint32_t>(row_value(r) & ((msf[r].bits >> i) & 1));
        for (size_t a = 0; a < out_act.size(); ++a)
          next_state |= row_value(out_act[a]) << a;
        sec.next[s * n_in + b] = next_state;
        sec.out[s * n_in + b] = bit;
      }
    }
    sec.build_predecessors();
    copy_sections.push_back(std::move(sec));
  }

  for (int c = 0; c < copies; ++c)
    for (const auto& sec : copy_sections) t.sections.push_back(sec);

  t.input_section.clear();
  for (int si = 0; si < t.num_sections(); ++si)
    if (t.sections[si].has_input) t.input_section.push_back(si);
  if (static_cast<int>(t.input_section.size()) != t.k)
    throw std::logic_error("build_rm_product_trellis: input section count mismatch");
  return t;
}

BitBlock conv_encode(const GeneratorPolynomials& polys, const BitBlock& u, TrellisMode mode) {
  if (mode == TrellisMode::block) throw std::invalid_argument("conv_encode: not a convolutional mode");
  int k = u.size();
  if (k < 1) throw std::invalid_argument("conv_encode: empty input");
  int m = polys.memory();
  int n_out = polys.n_out();
  BitBlock v(n_out * k);
  for (int t = 0; t < k; ++t) {
    uint32_t r = 0;
    for (int j = 0; j <= m; ++j) {
      int idx = t - j;
      int bit;
      if (idx >= 0)
        bit = u.get(idx);
      else if (mode == TrellisMode::tail_biting)
        bit = u.get((idx % k + k) % k);
      else
        bit = 0;
      r |= static_cast<uint32_t>(bit) << j;
    }
    for (int j = 0; j < n_out; ++j)
      if (std::popcount(polys.taps[j] & r) & 1) v.set(t * n_out + j, true);
  }
  return v;
}

BitBlock trellis_encode(const Trellis& t, const BitBlock& u) {
  if (u.size() != t.k) throw std::invalid_argument("trellis_encode: info length mismatch");
  int state = (t.mode == TrellisMode::tail_biting) ? t.tail_biting_start_state(u) : 0;
  BitBlock v(t.n);
  int bit_pos = 0;
  int info_pos = 0;
  for (const auto& sec : t.sections) {
    int b = sec.has_input ? (u.get(info_pos++) ? 1 : 0) : 0;
    int e = state * sec.n_in() + b;
    uint32_t out = sec.out[e];
    for (int j = 0; j < sec.bits; ++j)
      if ((out >> j) & 1) v.set(bit_pos + j, true);
    bit_pos += sec.bits;
    state = sec.next[e];
  }
  return v;
}

}  // namespace srumcc

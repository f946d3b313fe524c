#pragma once

#include <cstdint>
#include <vector>

#include "srumcc/bitblock.hpp"
#include "srumcc/code_spec.hpp"

namespace srumcc {

// Polynomial taps of a feedforward convolutional encoder. Tap values are
// binary: bit j of a tap is the coefficient of D^j, so octal 27 ->
// 10111 -> D^4 + D^2 + D + 1.
struct GeneratorPolynomials {
  std::vector<uint32_t> taps;

  static GeneratorPolynomials from_octal(const std::vector<uint32_t>& octal_as_binary);

  int memory() const;  // degree of the highest-degree tap
  int n_out() const { return static_cast<int>(taps.size()); }
};

// One time step of a sectioned trellis. Edges are indexed
// state * n_in() + input. Sections either consume one information bit
// (n_in()==2) or none (n_in()==1, block-code trellises only).
struct TrellisSection {
  int in_states = 0;
  int out_states = 0;
  int bits = 0;        // channel bits emitted per edge
  bool has_input = false;
  std::vector<int32_t> next;   // edge -> next state
  std::vector<uint32_t> out;   // edge -> packed output bits (bit j = j-th bit)

  // reverse adjacency, CSR over out-states
  std::vector<int32_t> pred_offset;
  std::vector<int32_t> pred_edge;

  int n_in() const { return has_input ? 2 : 1; }
  void build_predecessors();
};

struct Trellis {
  TrellisMode mode = TrellisMode::truncated;
  int k = 0;  // information bits per block
  int n = 0;  // channel bits per block
  std::vector<TrellisSection> sections;
  std::vector<int32_t> input_section;  // i-th info bit -> consuming section

  int num_sections() const { return static_cast<int>(sections.size()); }
  int max_states() const;
  // Number of start states a decoder must try: 2^m for tail-biting, else 1.
  int num_subcodes() const;
  // Start state of the tail-biting path for information word u (register
  // preloaded with the last m bits, newest in the lowest position).
  int tail_biting_start_state(const BitBlock& u) const;
};

Trellis build_trellis(const GeneratorPolynomials& polys, int k, TrellisMode mode);
Trellis build_rm_product_trellis(int copies);

// Polynomial-convolution encoder (reference path, independent of the
// trellis walk). Tail-biting preloads the register with the last m bits.
BitBlock conv_encode(const GeneratorPolynomials& polys, const BitBlock& u, TrellisMode mode);

// Encode by walking the trellis; works for every trellis family.
BitBlock trellis_encode(const Trellis& t, const BitBlock& u);

}  // namespace srumcc

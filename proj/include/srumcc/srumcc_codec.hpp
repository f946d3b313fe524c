#pragma once

#include <vector>

#include "srumcc/basic_code.hpp"
#include "srumcc/bitblock.hpp"
#include "srumcc/random_transform.hpp"

namespace srumcc {

// One encoded frame: L information blocks and the L+1 transmitted
// sub-frames (the last one terminates the chain). Overall rate is
// (k/n) * L/(L+1).
struct FrameSet {
  int L = 0;
  std::vector<BitBlock> u_blocks;  // L blocks of k bits
  std::vector<BitBlock> v_blocks;  // L basic-code codewords
  std::vector<BitBlock> c_blocks;  // L+1 sub-frames of n bits

  double rate(int k, int n) const {
    return static_cast<double>(k) / n * L / (L + 1.0);
  }
};

// Unit-memory encoding: v(-1)=0; c(t) = v(t) + v(t-1)R for t < L;
// c(L) = v(L-1)R. Equivalent to a UMCC with G0 = S and G1 = S*R where S
// generates the basic code.
FrameSet encode_frame(const std::vector<BitBlock>& u_blocks, const BasicCode& basic,
                      const RandomTransform& R);

}  // namespace srumcc

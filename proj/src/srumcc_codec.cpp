#include "srumcc/srumcc_codec.hpp"

#include <stdexcept>

namespace srumcc {

FrameSet encode_frame(const std::vector<BitBlock>& u_blocks, const BasicCode& basic,
                      const RandomTransform& R) {
  if (u_blocks.empty()) throw std::invalid_argument("encode_frame: no information blocks");
  if (R.n() != basic.n()) throw std::invalid_argument("encode_frame: transform size mismatch");
  FrameSet f;
  f.L = static_cast<int>(u_blocks.size());
  f.u_blocks = u_blocks;
  f.v_blocks.reserve(f.L);
  f.c_blocks.reserve(f.L + 1);
  BitBlock w(basic.n());
  BitBlock prev_v(basic.n());  // v(-1) = 0
  for (int t = 0; t < f.L; ++t) {
    if (u_blocks[t].size() != basic.k())
      throw std::invalid_argument("encode_frame: block length mismatch at t=" + std::to_string(t));
    BitBlock v = basic.encode(u_blocks[t]);
    R.apply_into(prev_v, w);
    f.c_blocks.push_back(v ^ w);
    f.v_blocks.push_back(v);
    prev_v = std::move(v);
  }
  R.apply_into(prev_v, w);
  f.c_blocks.push_back(w);  // termination: u(L) = 0
  return f;
}

}  // namespace srumcc

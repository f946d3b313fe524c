#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "srumcc/bitblock.hpp"
#include "srumcc/rng.hpp"

namespace srumcc {

// AWGN parameters under the convention SNR_dB = 10*log10(1/sigma^2) with
// unit-energy BPSK. This is the convention under which the pairwise error
// probability at Hamming distance w is Q(sqrt(w/sigma^2)).
struct ChannelParams {
  double sigma2 = 1.0;

  static ChannelParams from_snr_db(double snr_db) {
    return ChannelParams{std::pow(10.0, -snr_db / 10.0)};
  }
  double snr_db() const { return 10.0 * std::log10(1.0 / sigma2); }
};

// One received block: real channel outputs plus the noise variance they
// were produced with.
struct ReceivedBlock {
  std::vector<double> samples;
  double sigma2 = 1.0;
};

// BPSK map: bit 0 -> +1.0, bit 1 -> -1.0.
void bpsk_map_into(const BitBlock& c, std::vector<double>& x);
std::vector<double> bpsk_map(const BitBlock& c);

void awgn_into(std::span<const double> x, double sigma2, GaussianStream& g, std::vector<double>& y);
std::vector<double> awgn(std::span<const double> x, double sigma2, GaussianStream& g);

// Componentwise product y * phi(c): removes (or applies) the modulation
// of the binary word c.
void flip_into(std::span<const double> y, const BitBlock& c, std::vector<double>& out);

// I(X;Y) in bits per channel use for equiprobable BPSK over AWGN,
// Gauss-Hermite quadrature, absolute error well under 1e-3.
double mutual_information(const ChannelParams& params);

}  // namespace srumcc

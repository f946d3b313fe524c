#include "srumcc/channel.hpp"

#include <stdexcept>

#include "srumcc/numeric.hpp"

namespace srumcc {

void bpsk_map_into(const BitBlock& c, std::vector<double>& x) {
  x.resize(c.size());
  for (int i = 0; i < c.size(); ++i) x[i] = c.get(i) ? -1.0 : 1.0;
}

std::vector<double> bpsk_map(const BitBlock& c) {
  std::vector<double> x;
  bpsk_map_into(c, x);
  return x;
}

void awgn_into(std::span<const double> x, double sigma2, GaussianStream& g, std::vector<double>& y) {
  if (sigma2 <= 0.0) throw std::invalid_argument("awgn: sigma2 must be positive");
  double s = std::sqrt(sigma2);
  y.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + s * g.next();
}

std::vector<double> awgn(std::span<const double> x, double sigma2, GaussianStream& g) {
  std::vector<double> y;
  awgn_into(x, sigma2, g, y);
  return y;
}

void flip_into(std::span<const double> y, const BitBlock& c, std::vector<double>& out) {
  if (static_cast<int>(y.size()) != c.size())
    throw std::invalid_argument("flip: length mismatch");
  out.resize(y.size());
  auto words = c.words();
  for (size_t i = 0; i < y.size(); ++i) {
    bool bit = (words[i >> 6] >> (i & 63)) & 1u;
    out[i] = bit ? -y[i] : y[i];
  }
}

double mutual_information(const ChannelParams& params) {
  if (params.sigma2 <= 0.0) throw std::invalid_argument("mutual_information: sigma2 must be positive");
  // I = 1 - E[log2(1 + e^{-2y/sigma^2})], y ~ N(1, sigma^2).
  static thread_local std::vector<double> nodes, weights;
  static thread_local int cached_m = 0;
  const int m = 96;
  if (cached_m != m) {
    gauss_hermite(m, nodes, weights);
    cached_m = m;
  }
  double sigma = std::sqrt(params.sigma2);
  const double inv_sqrt_pi = 0.5641895835477562869;
  const double ln2 = 0.6931471805599453094;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    double y = 1.0 + 1.4142135623730950488 * sigma * nodes[i];
    acc += weights[i] * softplus(-2.0 * y / params.sigma2);
  }
  return 1.0 - inv_sqrt_pi * acc / ln2;
}

}  // namespace srumcc

#include "srumcc/numeric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace srumcc {

double softplus(double x) {
  if (x > 36.0) return x;           // e^{-x} below double epsilon
  if (x < -745.0) return 0.0;       // e^{x} underflows
  return std::log1p(std::exp(x));
}

double q_func(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

double log_q_func(double x) {
  if (x < 30.0) {
    double q = q_func(x);
    if (q > 0.0) return std::log(q);
  }
  // Asymptotic expansion Q(x) ~ phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6).
  double x2 = x * x;
  double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - 0.5 * std::log(2.0 * M_PI) - std::log(x) + std::log(series);
}

double log_sum_exp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v)
    if (x > mx) mx = x;
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

double log_binom(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Newton iteration on the Hermite recurrence (standard gauher scheme).
void gauss_hermite(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  if (m < 1) throw std::invalid_argument("gauss_hermite: m must be >= 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  const double eps = 1e-14;
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  int mid = (m + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < mid; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(m), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * nodes[1];
    else
      z = 2.0 * z - nodes[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < m; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * m) * p2;
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= eps) break;
    }
    nodes[i] = z;
    nodes[m - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[m - 1 - i] = weights[i];
  }
}

}  // namespace srumcc

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace srumcc {

// log(1 + e^x), overflow-safe.
double softplus(double x);

// Gaussian tail Q(x) and its logarithm; log_q stays finite far past the
// point where erfc underflows.
double q_func(double x);
double log_q_func(double x);

// log(sum exp(v_i)) over possibly -inf entries.
double log_sum_exp(std::span<const double> v);

// log C(n, k) via lgamma.
double log_binom(int n, int k);

// Gauss-Hermite nodes/weights for weight e^{-x^2} (physicists'), m points.
void gauss_hermite(int m, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace srumcc

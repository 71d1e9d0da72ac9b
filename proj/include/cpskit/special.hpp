#pragma once

#include <span>
#include <vector>

#include "cpskit/types.hpp"

namespace cpskit::special {

double log_factorial(int n);

/// Normalized harmonic-oscillator eigenfunctions h_n(x), n = 0..count-1,
/// evaluated on `grid` by the three-term recursion
///   h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}.
/// Result is count x grid.size().
Eigen::MatrixXd hermite_functions(int count, std::span<const double> grid);

/// Momentum-quadrature wavefunctions <p|n> = (-i)^n h_n(p) for
/// p = (a - a^dag)/(i sqrt 2). Result is count x grid.size().
CMatrix momentum_wavefunctions(int count, std::span<const double> grid);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Physicists' Gauss-Hermite rule: sum_i w_i f(x_i) ~ int f(x) e^{-x^2} dx.
QuadratureRule gauss_hermite(int nodes);

}  // namespace cpskit::special

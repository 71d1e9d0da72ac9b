#include "cpskit/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace cpskit::special {

double log_factorial(int n) {
  require(n >= 0, ErrorCode::InvalidArgument, "log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

Eigen::MatrixXd hermite_functions(int count, std::span<const double> grid) {
  require(count >= 0, ErrorCode::InvalidArgument,
          "hermite_functions: negative count");
  const auto points = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(count, points);
  if (count == 0) return h;
  const double norm0 = std::pow(kPi, -0.25);
  for (Eigen::Index j = 0; j < points; ++j) {
    const double x = grid[static_cast<std::size_t>(j)];
    h(0, j) = norm0 * std::exp(-0.5 * x * x);
    if (count > 1) h(1, j) = std::sqrt(2.0) * x * h(0, j);
    for (int n = 1; n + 1 < count; ++n) {
      h(n + 1, j) = std::sqrt(2.0 / (n + 1)) * x * h(n, j) -
                    std::sqrt(static_cast<double>(n) / (n + 1)) * h(n - 1, j);
    }
  }
  return h;
}

CMatrix momentum_wavefunctions(int count, std::span<const double> grid) {
  const Eigen::MatrixXd h = hermite_functions(count, grid);
  // (-i)^n cycles through 1, -i, -1, i.
  static constexpr cplx kPhase[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0},
                                     {0.0, 1.0}};
  CMatrix out(h.rows(), h.cols());
  for (Eigen::Index n = 0; n < h.rows(); ++n) {
    out.row(n) = kPhase[n % 4] * h.row(n).cast<cplx>();
  }
  return out;
}

QuadratureRule gauss_hermite(int nodes) {
  require(nodes >= 1, ErrorCode::InvalidArgument,
          "gauss_hermite: need at least one node");
  // Golub-Welsch: eigenpairs of the symmetric Jacobi matrix of the
  // recurrence H_{k+1} = 2x H_k - 2k H_{k-1}.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int k = 1; k < nodes; ++k) {
    const double off = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(nodes));
  rule.weights.resize(static_cast<std::size_t>(nodes));
  const double mu0 = std::sqrt(kPi);
  for (int k = 0; k < nodes; ++k) {
    const double v0 = solver.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  // Symmetrize: the rule is exactly even in x.
  for (int k = 0; k < nodes / 2; ++k) {
    const auto lo = static_cast<std::size_t>(k);
    const auto hi = static_cast<std::size_t>(nodes - 1 - k);
    const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (nodes % 2 == 1) rule.nodes[static_cast<std::size_t>(nodes / 2)] = 0.0;
  return rule;
}

}  // namespace cpskit::special

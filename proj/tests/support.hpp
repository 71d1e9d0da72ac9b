#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "cpskit/types.hpp"

namespace testing {

inline cpskit::CVector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  cpskit::CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

inline cpskit::CMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  cpskit::CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = {g(rng), g(rng)};
  }
  return m;
}

inline cpskit::CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const cpskit::CMatrix a = random_matrix(rng, n, n);
  return (a + a.adjoint()) / 2.0;
}

/// Random density matrix: A A^H / tr.
inline cpskit::CMatrix random_density(std::mt19937_64& rng, int n) {
  const cpskit::CMatrix a = random_matrix(rng, n, n);
  cpskit::CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
inline cpskit::CMatrix haar_unitary(std::mt19937_64& rng, int n) {
  const cpskit::CMatrix z = random_matrix(rng, n, n);
  Eigen::HouseholderQR<cpskit::CMatrix> qr(z);
  cpskit::CMatrix q = qr.householderQ();
  const cpskit::CMatrix r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const cpskit::cplx d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

inline double rel_diff(const cpskit::CVector& a, const cpskit::CVector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace testing

#pragma once

// Brute-force truncated number-basis reference. Dense matrices only, D <= 256.
// Every CPS identity in the library is checked against this module.

#include <functional>
#include <span>
#include <vector>

#include "cpskit/types.hpp"

namespace cpskit::fock {

inline constexpr int kMaxDim = 256;

struct FockVector {
  CVector coeffs;
  int dim() const { return static_cast<int>(coeffs.size()); }
  double norm() const { return coeffs.norm(); }
};

struct FockOperator {
  CMatrix entries;
  int dim() const { return static_cast<int>(entries.rows()); }
};

struct FockDensity {
  CMatrix entries;
  int dim() const { return static_cast<int>(entries.rows()); }
  cplx trace() const { return entries.trace(); }
};

struct LadderOps {
  FockOperator a;
  FockOperator a_dag;
  FockOperator n;
};

LadderOps ladder_ops(int dim);

/// Coefficients alpha^n / sqrt(n!) by the recursion c_n = c_{n-1} alpha/sqrt(n).
/// `normalized` divides by the full-space norm e^{|alpha|^2/2}, not the
/// truncated one.
FockVector coherent_vector(cplx alpha, int dim, bool normalized);

struct ProjectorResult {
  FockOperator projector;
  bool empty = false;  // warning status: no state selected
};

ProjectorResult number_projector(int dim, const std::function<bool(int)>& select);

/// Multimode projector on the product space with per-mode cutoffs `dims`.
/// Basis index ordering is row-major: mode 0 is the most significant digit.
ProjectorResult number_projector(
    std::span<const int> dims,
    const std::function<bool(std::span<const int>)>& select);

/// exp(-iHt) psi through the eigendecomposition of the Hermitian H.
FockVector evolve_exact(const FockVector& psi, const FockOperator& hamiltonian,
                        double t);

struct LindbladRates {
  double omega = 0.0;
  double kappa = 0.0;
  double gamma_p = 0.0;
  double gamma_a = 0.0;
};

/// Dense D^2 x D^2 Liouvillian for H = omega n + kappa n^2/2 with dephasing
/// gamma_p (2 n rho n - n^2 rho - rho n^2) and loss gamma_a (2 a rho a^dag -
/// n rho - rho n), acting on column-major vec(rho).
CMatrix lindblad_superoperator(int dim, const LindbladRates& rates);

FockDensity lindblad_evolve_exact(const FockDensity& rho,
                                  const LindbladRates& rates, double t,
                                  int steps);

/// P(p) = |sum_n psi_n <p|n>|^2 for p = (a - a^dag)/(i sqrt 2).
std::vector<double> quadrature_density(const FockVector& psi,
                                       std::span<const double> p_grid);

/// Ryser's formula with Gray-code row updates, O(2^N N).
cplx permanent(const CMatrix& matrix);

}  // namespace cpskit::fock

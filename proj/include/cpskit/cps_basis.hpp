#pragma once

// Coherent-phase-state (CPS) bases: d projected coherent states with
// amplitudes alpha e^{i q 2pi/d}, spanning number states n0..n0+d-1.

#include <memory>
#include <span>
#include <vector>

#include "cpskit/types.hpp"

namespace cpskit {

/// Immutable single-mode basis. Copies share the precomputed data.
///
/// Norms are held in log space: ln g_n = n ln|alpha| - ln(n!)/2 and ln g_Q.
/// `weights()` holds g_n^2 / g_Q^2, which stays finite for |alpha|^2 up to
/// about 10^3 and d in the thousands.
class CpsBasis {
 public:
  CpsBasis(int d, int n0, cplx alpha);

  int dim() const { return data_->d; }
  int n0() const { return data_->n0; }
  int n_max() const { return data_->n0 + data_->d - 1; }
  cplx alpha() const { return alpha_; }
  double radius() const { return std::abs(alpha_); }
  /// phi = 2 pi / d
  double phase_step() const;

  /// e^{2 pi i k / d} for any integer k (reduced mod d).
  cplx root(long k) const;
  /// alpha^{(q)} = alpha e^{i q phi}
  cplx amplitude(int q) const;

  /// ln g_n = n ln|alpha| - ln(n!)/2 for any n >= 0; -infinity for n < 0.
  double log_gn(int n) const;
  double log_gq() const { return data_->log_gq; }
  double gq() const;
  /// g_n^2 / g_Q^2, indexed by n - n0.
  const std::vector<double>& weights() const { return data_->weights; }

  /// Gram matrix M_{q1 q2} of the normalized basis states.
  const CMatrix& gram() const { return data_->gram; }

  /// Same radius and cutoffs with alpha -> alpha e^{i theta}. The Gram matrix
  /// depends only on |alpha| and is shared.
  CpsBasis rotated(double theta) const;

  /// Identity of the basis: same d, n0 and alpha (exact comparison).
  bool same_as(const CpsBasis& other) const;

 private:
  // Everything that depends on |alpha| only; shared by rotated copies.
  struct Radial {
    int d = 0;
    int n0 = 0;
    double log_radius = 0.0;
    double log_gq = 0.0;
    std::vector<double> weights;
    std::vector<cplx> roots;
    CMatrix gram;
  };
  CpsBasis(std::shared_ptr<const Radial> radial, cplx alpha)
      : data_(std::move(radial)), alpha_(alpha) {}

  std::shared_ptr<const Radial> data_;
  cplx alpha_;
};

/// Expansion of a projected state over a CPS basis.
struct CpsState {
  CpsBasis basis;
  CVector coeffs;
  Convention convention = Convention::Normalized;

  /// Coefficients Psi_q for the normalized basis (Psi_q = g_Q psi_q).
  CVector normalized_coeffs() const;
  CpsState as(Convention target) const;
  /// Psi^H M Psi
  double physical_norm_sq() const;
};

struct CpsProductBasis {
  std::vector<CpsBasis> modes;
};

/// Basis member q in the normalized convention: Psi = e_q.
CpsState basis_member(const CpsBasis& basis, int q);

/// g_Q for n0 = 0 from the regularized upper incomplete gamma function:
/// sqrt(e^{|alpha|^2} Gamma(1 + n_max, |alpha|^2) / n_max!).
double norm_gq_gamma(cplx alpha, int n_max);

/// Direct log-space sum sqrt(sum_{n=n0}^{n_max} |alpha|^{2n}/n!).
double norm_gq_direct(cplx alpha, int n0, int n_max);

/// Large-|alpha| Gaussian approximation of g_n^2:
/// e^{|alpha|^2 - (n/|alpha| - |alpha|)^2/2} / sqrt(2 pi |alpha|^2).
double gn_sq_gaussian(double alpha_sq, int n);

/// Number-basis amplitudes psi_n (n = n0..n_max, length d) to CPS
/// coefficients psi_q = sum_n psi_n sqrt(n!) / (d (alpha^{(q)})^n).
CpsState fock_to_cps(const CpsBasis& basis, const CVector& psi_n,
                     Convention convention = Convention::Unnormalized);

/// c_n = (alpha^n / sqrt(n!)) sum_q psi_q e^{i q n phi}, n = n0..n_max.
CVector cps_to_fock(const CpsState& state);

/// Psi_1^H M Psi_2 in the normalized convention.
cplx gram_inner(const CpsState& lhs, const CpsState& rhs);

/// Expansion of the projected coherent state at alpha_tilde (n0 = 0):
/// psi_q = (1/d)(1 - z_q^d)/(1 - z_q), z_q = alpha_tilde / alpha^{(q)}.
/// The normalized form scales by g_Q(alpha)/g_Q(alpha_tilde).
CpsState reexpand_coherent(const CpsBasis& basis, cplx alpha_tilde,
                           Convention convention = Convention::Unnormalized);

/// (1/d) sum_{n=0}^{d-1} z^n, with direct summation near z = 1.
cplx geometric_mean_sum(cplx z, int d);

/// Wirtinger derivative d/d alpha of ln g_Q:
/// (alpha^*/2)[1 + (g_{n0-1}^2 - g_{n_max}^2)/g_Q^2].
cplx log_norm_gradient(const CpsBasis& basis);

/// Bounded total-number selection {n : min_total <= sum n_i <= max_total}.
/// A negative max_total means unbounded and is rejected by the norm helper.
struct TotalNumberSet {
  int min_total = 0;
  int max_total = -1;
};

/// g_N(alphas) = sqrt(sum_{n in S} prod_i |alpha_i|^{2 n_i}/n_i!) by
/// enumeration; at most 4 modes.
double total_number_norm(std::span<const cplx> alphas, const TotalNumberSet& set);

}  // namespace cpskit

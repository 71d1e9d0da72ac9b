#pragma once

// Projected P-representations over CPS bases.
//
// A density matrix on the projected space is written as
//   rho = sum_{q, q'} p_{q q'} |alpha^(q)>_Q <(beta^(q'))^*|_Q
// with alpha-side amplitudes alpha e^{i q phi} and beta-side amplitudes
// beta e^{-i q' phi}. The beta side is stored as a CpsBasis whose reference
// amplitude is beta^*, so <(beta^(q'))^*| is that basis' member q'.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpskit/cps_basis.hpp"

namespace cpskit {

inline constexpr int kMaxPfuncModes = 3;

struct CpsPFunction {
  std::vector<CpsBasis> alpha_modes;
  std::vector<CpsBasis> beta_conj_modes;
  /// Rows index q (mode 0 most significant), columns index q'.
  CMatrix coeffs;
  Convention convention = Convention::Unnormalized;

  int modes() const { return static_cast<int>(alpha_modes.size()); }
};

/// beta^(q') = conj(beta_conj.amplitude(q'))
cplx beta_amplitude(const CpsBasis& beta_conj, int q);

/// Density matrices are indexed over n_j = 0..n_max_j per mode (mode 0 most
/// significant). Rows or columns with some n_j < n0_j must vanish.
int fock_extent(std::span<const CpsBasis> modes);

/// p = L_alpha rho L_beta^T with L[q, n] = sqrt(n!) / (d (amp_q)^n).
/// `beta_conj_modes` defaults to the alpha modes (beta = alpha^*).
CpsPFunction pfunc_from_rho(const CMatrix& rho, std::vector<CpsBasis> alpha_modes,
                            std::optional<std::vector<CpsBasis>> beta_conj_modes = {});

/// rho_{m n} = sum p prod_j (alpha^(q_j))^{m_j} (beta^(q'_j))^{n_j} / sqrt(m_j! n_j!)
CMatrix rho_from_pfunc(const CpsPFunction& pfunc);

/// G_{q q'} = sum_{n=n0}^{n_max} (beta^(q') alpha^(q))^n / n!, one mode.
CMatrix pair_normalization(const CpsBasis& alpha_basis, const CpsBasis& beta_conj_basis);
/// Product over modes as a kron-ordered matrix.
CMatrix pair_normalization(const CpsPFunction& pfunc);

CpsPFunction to_normalized(const CpsPFunction& pfunc);
CpsPFunction to_unnormalized(const CpsPFunction& pfunc);

/// Single-mode coefficients of the outer product |alpha~>_Q <beta~^*|_Q in
/// the target bases (n0 = 0):
///   (1/d^2) [(1 - z^d)/(1 - z)] [(1 - zeta^d)/(1 - zeta)],
/// z = alpha~ / alpha^(q), zeta = beta~ / beta^(q').
CpsPFunction pfunc_reexpand(cplx alpha_tilde, cplx beta_tilde, const CpsBasis& alpha_basis,
                            const CpsBasis& beta_conj_basis);

/// Normally ordered product prod_j (a_j^dag)^{creators_j} a_j^{annihilators_j}.
struct NormalOrderedMoment {
  std::vector<int> creators;
  std::vector<int> annihilators;
};

/// Tr(rho O) evaluated on the P-function with the exact finite pair sums
///   <beta^*|_Q a^dag^m a^n |alpha>_Q
///     = beta^m alpha^n sum_{j : j+m, j+n in [n0, n_max]} (alpha beta)^j / j!.
cplx pfunc_moment(const CpsPFunction& pfunc, const NormalOrderedMoment& moment);

/// A = sum n (alpha beta)^n/n! / sum (alpha beta)^n/n!, n in [n0, n_max].
cplx number_weight_a(cplx alpha, cplx beta, int n0, int n_max);

/// <n> of a single-mode normalized P-function as sum_{q q'} P_{q q'} A_{q q'}.
cplx number_moment_normalized(const CpsPFunction& pfunc);

// Boson sampling: <prod_{j in outputs} n_j> for single photons in `inputs`
// through the unitary U, using qubit (d = 2) CPS P-functions at radius r.

enum class SamplingMethod { Exact, MonteCarlo };

struct BosonSamplingOptions {
  SamplingMethod method = SamplingMethod::Exact;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  double radius = 1.0;
};

struct BosonSamplingResult {
  double value = 0.0;
  std::optional<double> stderr_value;
  SamplingMethod method = SamplingMethod::Exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr int kMaxExactPhotons = 12;

BosonSamplingResult boson_sampling_correlation(const CMatrix& unitary,
                                               std::span<const int> inputs,
                                               std::span<const int> outputs,
                                               const BosonSamplingOptions& options);

std::string method_name(SamplingMethod method);

}  // namespace cpskit

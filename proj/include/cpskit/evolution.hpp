#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpskit/cps_operators.hpp"
#include "cpskit/fock_oracle.hpp"
#include "cpskit/prep.hpp"

namespace cpskit {

enum class Picture { Direct, Hybrid };

struct EvolutionPlan {
  CpsOperatorMatrix hamiltonian;
  double t_max = 0.0;
  int steps = 1;
  Picture picture = Picture::Direct;
};

/// exp(-i H dt), built once and applied to any number of states.
class Propagator {
 public:
  Propagator(const CpsOperatorMatrix& hamiltonian, double dt);

  const CMatrix& matrix() const { return u_; }
  const CpsBasis& basis() const { return basis_; }
  double dt() const { return dt_; }
  CpsState step(const CpsState& state) const;

 private:
  CpsBasis basis_;
  CMatrix u_;
  double dt_;
};

struct TrajectoryPoint {
  double t = 0.0;
  CpsState state;
};

/// Psi(t + dt) = exp(-i H dt) Psi(t), dt = t_max/steps. Returns steps + 1
/// points including t = 0. Direct picture only.
std::vector<TrajectoryPoint> propagate_unitary(const CpsState& state,
                                               const EvolutionPlan& plan);

/// Hybrid picture for H = omega(t) n + H_n with H_n diagonal in n. The
/// reference amplitude follows alpha(t) = alpha(0) exp(-i int omega dt);
/// the coefficients evolve under exp(-i H_n t), which does not depend on alpha.
/// `nonlinear` must be circulant (number-diagonal) or it is rejected.
std::vector<TrajectoryPoint> hybrid_evolve(const CpsState& state,
                                           const std::function<double(double)>& omega_of_t,
                                           const CpsOperatorMatrix& nonlinear, double t_max,
                                           int steps);

/// Kerr case H = omega(t) n + kappa n^2 / 2. The quadratic part is carried as
/// kappa/2 (n^2 - n_max n) with the linear remainder folded into the
/// rotation frequency omega(t) + kappa n_max / 2.
std::vector<TrajectoryPoint> hybrid_evolve(const CpsState& state,
                                           const std::function<double(double)>& omega_of_t,
                                           double kappa, double t_max, int steps);

/// alpha exp[|alpha|^2 (e^{-i kappa t} - 1) - i (omega + kappa/2) t]
cplx anharmonic_analytic(cplx alpha, double omega, double kappa, double t);

/// <a> for a state in a zero-based basis.
cplx mean_amplitude(const CpsState& state);

struct AnharmonicConfig {
  cplx alpha = 4.0;
  int d = 32;
  double omega = 0.5;
  double kappa = 1.0;
  int steps = 500;
  double t_max = 4.0 * kPi;
  Picture picture = Picture::Direct;
};

struct AnharmonicRow {
  double t = 0.0;
  cplx amplitude;
  cplx analytic;
  double deviation = 0.0;
  double mean_number = 0.0;
  double norm_drift = 0.0;
};

struct AnharmonicResult {
  std::vector<AnharmonicRow> rows;
  double max_deviation = 0.0;
  double max_norm_drift = 0.0;
};

/// Projected coherent state at alpha (basis member q = 0, n0 = 0) under
/// omega n + kappa n^2/2. d < 2 is rejected.
AnharmonicResult run_anharmonic(const AnharmonicConfig& config);

enum class NoiseMethod { MonteCarlo, GaussHermite, Exact };

struct PhaseNoiseModel {
  double sigma = 0.0;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  NoiseMethod method = NoiseMethod::MonteCarlo;
};

inline constexpr int kGaussHermiteNodes = 64;

struct FringeMeta {
  double alpha = 0.0;
  int d = 0;
  PhaseNoiseModel noise;
  double t_collapse = 0.0;
};

struct FringeResult {
  std::vector<double> p;
  std::vector<double> density;
  std::vector<double> stderr_values;  // Monte Carlo only, else empty
  FringeMeta meta;
};

/// Default cutoff 2 ceil(alpha^2), rounded up to even.
int default_cat_dimension(double alpha);

/// Evolves the projected coherent state at real alpha under kappa n^2/2
/// (kappa = 1) to t = pi, giving a two-component cat, and averages the momentum
/// density over a Gaussian accumulated phase theta ~ N(0, sigma^2) applied as
/// exp(-i theta n). d must be even; d = 0 selects the default.
FringeResult cat_fringe(double alpha, const PhaseNoiseModel& noise,
                        std::span<const double> p_grid, int d = 0);

/// Number-basis amplitudes (n = 0..d-1) of the evolved cat before noise.
CVector cat_fock_amplitudes(double alpha, int d);

/// e^{-p^2}/sqrt(pi) [1 - sin(2 sqrt(2) alpha p)]
double cat_fringe_analytic(double alpha, double p);

/// (max - min)/(max + min) of the density over one fringe period centred on
/// p = 0, |p| <= pi / (2 sqrt(2) alpha).
double fringe_visibility(const FringeResult& result);

std::vector<double> uniform_grid(double lo, double hi, int points);

std::string noise_method_name(NoiseMethod method);

/// Single-mode master equation on an unnormalized P-function (n0 = 0):
///   dp/dt = -i(H_a p - p H_b^H) + gamma_p(2 N_a p N_b^H - N2_a p - p N2_b^H)
///           + gamma_a(2 A_a p A_b^H - N_a p - p N_b^H)
/// with _a matrices in the alpha basis and _b matrices in the beta-conj basis.
CpsPFunction master_evolve_cps(const CpsPFunction& pfunc, const fock::LindbladRates& rates,
                               double t, int steps);

/// Dense d^2 x d^2 generator acting on column-major vec(p).
CMatrix master_superoperator(const CpsBasis& alpha_basis, const CpsBasis& beta_conj_basis,
                             const fock::LindbladRates& rates);

}  // namespace cpskit

#include "cpskit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "cpskit/linalg.hpp"
#include "cpskit/parallel.hpp"
#include "cpskit/special.hpp"

namespace cpskit {

namespace {

constexpr std::size_t kSampleBlock = 256;
const cplx kI(0.0, 1.0);

void check_schedule(double t_max, int steps, const char* what) {
  require(steps >= 1, ErrorCode::InvalidArgument, std::string(what) + ": steps must be >= 1");
  require(t_max >= 0.0 && std::isfinite(t_max), ErrorCode::InvalidArgument,
          std::string(what) + ": t_max must be finite and >= 0");
}

// int_a^b f(t) dt, 10-point Gauss-Legendre; exact for constant or polynomial
// frequencies up to degree 19.
double integrate_frequency(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

}  // namespace

Propagator::Propagator(const CpsOperatorMatrix& hamiltonian, double dt)
    : basis_(hamiltonian.basis), dt_(dt) {
  require(hamiltonian.entries.rows() == basis_.dim() &&
              hamiltonian.entries.cols() == basis_.dim(),
          ErrorCode::DimensionMismatch, "Propagator: Hamiltonian must be d x d");
  u_ = linalg::expm(CMatrix(-kI * dt * hamiltonian.entries));
}

CpsState Propagator::step(const CpsState& state) const {
  require(state.basis.dim() == basis_.dim() && state.basis.n0() == basis_.n0(),
          ErrorCode::DimensionMismatch, "Propagator: state basis mismatch");
  CpsState out = state;
  out.coeffs = u_ * state.coeffs;
  return out;
}

std::vector<TrajectoryPoint> propagate_unitary(const CpsState& state,
                                               const EvolutionPlan& plan) {
  check_schedule(plan.t_max, plan.steps, "propagate_unitary");
  require(plan.picture == Picture::Direct, ErrorCode::Unsupported,
          "propagate_unitary: hybrid plans go through hybrid_evolve");
  require(state.basis.same_as(plan.hamiltonian.basis), ErrorCode::DimensionMismatch,
          "propagate_unitary: state and Hamiltonian belong to different bases");
  const double dt = plan.t_max / plan.steps;
  const Propagator prop(plan.hamiltonian, dt);
  std::vector<TrajectoryPoint> out;
  out.reserve(static_cast<std::size_t>(plan.steps) + 1);
  out.push_back({0.0, state});
  for (int s = 1; s <= plan.steps; ++s) {
    out.push_back({s * dt, prop.step(out.back().state)});
  }
  return out;
}

std::vector<TrajectoryPoint> hybrid_evolve(const CpsState& state,
                                           const std::function<double(double)>& omega_of_t,
                                           const CpsOperatorMatrix& nonlinear, double t_max,
                                           int steps) {
  check_schedule(t_max, steps, "hybrid_evolve");
  require(nonlinear.basis.dim() == state.basis.dim() &&
              nonlinear.basis.n0() == state.basis.n0(),
          ErrorCode::DimensionMismatch, "hybrid_evolve: basis mismatch");
  const double scale = std::max(1.0, linalg::max_abs(nonlinear.entries));
  require(is_circulant(nonlinear.entries, 1e-10 * scale), ErrorCode::Unsupported,
          "hybrid_evolve: nonlinear term does not conserve number");

  const double dt = t_max / steps;
  const Propagator prop(nonlinear, dt);
  std::vector<TrajectoryPoint> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, state});
  double theta = 0.0;
  CVector coeffs = state.coeffs;
  for (int s = 1; s <= steps; ++s) {
    const double t0 = (s - 1) * dt;
    const double t1 = s * dt;
    theta += integrate_frequency(omega_of_t, t0, t1);
    coeffs = prop.matrix() * coeffs;
    out.push_back({t1, CpsState{state.basis.rotated(-theta), coeffs, state.convention}});
  }
  return out;
}

std::vector<TrajectoryPoint> hybrid_evolve(const CpsState& state,
                                           const std::function<double(double)>& omega_of_t,
                                           double kappa, double t_max, int steps) {
  const double nm = state.basis.n_max();
  const CpsOperatorMatrix nonlinear = op_number_function(
      state.basis,
      [kappa, nm](int n) { return 0.5 * kappa * static_cast<double>(n) * (n - nm); },
      "kerr-shifted");
  const double shift = 0.5 * kappa * nm;
  return hybrid_evolve(
      state, [&omega_of_t, shift](double t) { return omega_of_t(t) + shift; }, nonlinear,
      t_max, steps);
}

cplx anharmonic_analytic(cplx alpha, double omega, double kappa, double t) {
  const cplx e = std::exp(cplx(0.0, -kappa * t));
  return alpha * std::exp(std::norm(alpha) * (e - 1.0) - kI * (omega + 0.5 * kappa) * t);
}

cplx mean_amplitude(const CpsState& state) {
  if (state.basis.n0() == 0) return expectation(state, op_annihilation(state.basis));
  const int d = state.basis.dim();
  CMatrix a = CMatrix::Zero(d, d);
  for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(state.basis.n0() + k));
  return expectation(state, op_from_fock_matrix(state.basis, a, "a"));
}

AnharmonicResult run_anharmonic(const AnharmonicConfig& config) {
  require(config.d >= 2, ErrorCode::InvalidArgument, "anharmonic: d must be >= 2");
  check_schedule(config.t_max, config.steps, "anharmonic");
  const CpsBasis basis(config.d, 0, config.alpha);
  const CpsState initial = basis_member(basis, 0);

  std::vector<TrajectoryPoint> traj;
  if (config.picture == Picture::Direct) {
    EvolutionPlan plan{assemble_hamiltonian(basis, config.omega, config.kappa), config.t_max,
                       config.steps, Picture::Direct};
    traj = propagate_unitary(initial, plan);
  } else {
    const double omega = config.omega;
    traj = hybrid_evolve(
        initial, [omega](double) { return omega; }, config.kappa, config.t_max, config.steps);
  }

  const CpsOperatorMatrix number = op_number_power(basis, 1);
  const double norm0 = initial.physical_norm_sq();
  AnharmonicResult result;
  result.rows.reserve(traj.size());
  for (const TrajectoryPoint& point : traj) {
    AnharmonicRow row;
    row.t = point.t;
    row.amplitude = mean_amplitude(point.state);
    row.analytic = anharmonic_analytic(config.alpha, config.omega, config.kappa, point.t);
    row.deviation = std::abs(row.amplitude - row.analytic);
    CpsState in_basis = point.state;
    in_basis.basis = basis;  // n is independent of the reference phase
    row.mean_number = expectation(in_basis, number).real();
    row.norm_drift = std::abs(point.state.physical_norm_sq() - norm0);
    result.max_deviation = std::max(result.max_deviation, row.deviation);
    result.max_norm_drift = std::max(result.max_norm_drift, row.norm_drift);
    result.rows.push_back(row);
  }
  return result;
}

int default_cat_dimension(double alpha) {
  int d = 2 * static_cast<int>(std::ceil(alpha * alpha));
  if (d % 2 != 0) ++d;
  return std::max(d, 2);
}

CVector cat_fock_amplitudes(double alpha, int d) {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::InvalidArgument,
          "cat_fringe: alpha must be positive");
  require(d >= 2 && d % 2 == 0, ErrorCode::InvalidArgument,
          "cat_fringe: d must be even so -alpha is a basis amplitude");
  const CpsBasis basis(d, 0, alpha);
  const double kappa = 1.0;
  const double t_c = kPi / kappa;
  EvolutionPlan plan{op_number_function(
                         basis, [kappa](int n) { return 0.5 * kappa * n * n; }, "kerr"),
                     t_c, 1, Picture::Direct};
  const auto traj = propagate_unitary(basis_member(basis, 0), plan);
  return cps_to_fock(traj.back().state);
}

double cat_fringe_analytic(double alpha, double p) {
  return std::exp(-p * p) / std::sqrt(kPi) * (1.0 - std::sin(2.0 * std::sqrt(2.0) * alpha * p));
}

namespace {

// Mean of e^{-i k theta} over the phase distribution, k = 0..kmax.
std::vector<cplx> phase_moments(const PhaseNoiseModel& noise, int kmax) {
  const auto count = static_cast<std::size_t>(kmax) + 1;
  std::vector<cplx> m(count, cplx(0.0, 0.0));
  if (noise.sigma == 0.0) {
    std::fill(m.begin(), m.end(), cplx(1.0, 0.0));
    return m;
  }
  switch (noise.method) {
    case NoiseMethod::Exact:
      for (std::size_t k = 0; k < count; ++k) {
        const double x = static_cast<double>(k) * noise.sigma;
        m[k] = std::exp(-0.5 * x * x);
      }
      return m;
    case NoiseMethod::GaussHermite: {
      const special::QuadratureRule rule = special::gauss_hermite(kGaussHermiteNodes);
      std::vector<cplx> terms(rule.nodes.size());
      for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double theta = std::sqrt(2.0) * noise.sigma * rule.nodes[i];
          terms[i] = rule.weights[i] / std::sqrt(kPi) *
                     std::polar(1.0, -static_cast<double>(k) * theta);
        }
        m[k] = linalg::pairwise_sum(terms);
      }
      return m;
    }
    case NoiseMethod::MonteCarlo: {
      const std::size_t blocks = parallel::chunk_count(noise.samples, kSampleBlock);
      std::vector<std::vector<cplx>> partial(blocks, std::vector<cplx>(count));
      parallel::for_chunks(
          noise.samples, kSampleBlock,
          [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            std::vector<cplx>& acc = partial[chunk];
            for (std::size_t i = begin; i < end; ++i) {
              const double theta = noise.sigma * parallel::standard_normal(noise.seed, i);
              const cplx step = std::polar(1.0, -theta);
              cplx e(1.0, 0.0);
              for (std::size_t k = 0; k < count; ++k) {
                acc[k] += e;
                e *= step;
              }
            }
          });
      std::vector<cplx> column(blocks);
      for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t b = 0; b < blocks; ++b) column[b] = partial[b][k];
        m[k] = linalg::pairwise_sum(column) / static_cast<double>(noise.samples);
      }
      return m;
    }
  }
  return m;
}

}  // namespace

FringeResult cat_fringe(double alpha, const PhaseNoiseModel& noise,
                        std::span<const double> p_grid, int d) {
  require(noise.sigma >= 0.0 && std::isfinite(noise.sigma), ErrorCode::InvalidArgument,
          "cat_fringe: sigma must be >= 0");
  require(noise.samples >= 1, ErrorCode::InvalidArgument, "cat_fringe: samples must be >= 1");
  if (d == 0) d = default_cat_dimension(alpha);
  const CVector c = cat_fock_amplitudes(alpha, d);

  // P_theta(p) = sum_k F_k(p) e^{-i k theta}, F_{-k} = conj(F_k), with
  // F_k(p) = sum_m G_{m+k}(p) conj(G_m(p)) and G_n(p) = c_n <p|n>.
  const CMatrix w = special::momentum_wavefunctions(d, p_grid);
  const CMatrix g = c.asDiagonal() * w;
  const auto points = static_cast<Eigen::Index>(p_grid.size());
  CMatrix f = CMatrix::Zero(d, points);
  for (int k = 0; k < d; ++k) {
    for (int m = 0; m + k < d; ++m) {
      f.row(k).array() += g.row(m + k).array() * g.row(m).array().conjugate();
    }
  }

  const bool mc = noise.method == NoiseMethod::MonteCarlo;
  const int kmax = mc ? 2 * (d - 1) : d - 1;
  const std::vector<cplx> m = phase_moments(noise, kmax);
  const auto moment = [&](int j) { return j >= 0 ? m[static_cast<std::size_t>(j)] : std::conj(m[static_cast<std::size_t>(-j)]); };
  const auto f_at = [&](int k, Eigen::Index j) { return k >= 0 ? f(k, j) : std::conj(f(-k, j)); };

  FringeResult result;
  result.p.assign(p_grid.begin(), p_grid.end());
  result.density.resize(p_grid.size());
  result.meta = {alpha, d, noise, kPi};
  for (Eigen::Index j = 0; j < points; ++j) {
    cplx acc = f(0, j);
    for (int k = 1; k < d; ++k) acc += 2.0 * std::real(m[static_cast<std::size_t>(k)] * f(k, j));
    result.density[static_cast<std::size_t>(j)] = acc.real();
  }
  if (mc) {
    result.stderr_values.resize(p_grid.size());
    const double n = static_cast<double>(noise.samples);
    for (Eigen::Index j = 0; j < points; ++j) {
      cplx second = 0.0;
      for (int k = -(d - 1); k < d; ++k) {
        for (int kp = -(d - 1); kp < d; ++kp) second += f_at(k, j) * f_at(kp, j) * moment(k + kp);
      }
      const double mean = result.density[static_cast<std::size_t>(j)];
      const double var =
          noise.samples > 1 ? std::max(0.0, (second.real() - mean * mean) * n / (n - 1.0)) : 0.0;
      result.stderr_values[static_cast<std::size_t>(j)] = std::sqrt(var / n);
    }
  }
  return result;
}

double fringe_visibility(const FringeResult& result) {
  const double half = kPi / (2.0 * std::sqrt(2.0) * result.meta.alpha);
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  int used = 0;
  for (std::size_t i = 0; i < result.p.size(); ++i) {
    if (std::abs(result.p[i]) > half) continue;
    hi = std::max(hi, result.density[i]);
    lo = std::min(lo, result.density[i]);
    ++used;
  }
  require(used >= 2, ErrorCode::InvalidArgument,
          "fringe_visibility: grid does not resolve the central fringe");
  return (hi - lo) / (hi + lo);
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  require(points >= 2 && hi > lo, ErrorCode::InvalidArgument,
          "uniform_grid: need points >= 2 and hi > lo");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + i * h;
  out.back() = hi;
  return out;
}

std::string noise_method_name(NoiseMethod method) {
  switch (method) {
    case NoiseMethod::MonteCarlo:
      return "mc";
    case NoiseMethod::GaussHermite:
      return "gauss-hermite";
    case NoiseMethod::Exact:
      return "exact";
  }
  return "unknown";
}

CMatrix master_superoperator(const CpsBasis& alpha_basis, const CpsBasis& beta_conj_basis,
                             const fock::LindbladRates& rates) {
  require(alpha_basis.n0() == 0 && beta_conj_basis.n0() == 0, ErrorCode::Unsupported,
          "master_evolve_cps: n0 must be 0");
  require(alpha_basis.dim() == beta_conj_basis.dim(), ErrorCode::DimensionMismatch,
          "master_evolve_cps: alpha and beta bases differ in size");
  const int d = alpha_basis.dim();
  const CMatrix ident = CMatrix::Identity(d, d);
  const CMatrix h_a = assemble_hamiltonian(alpha_basis, rates.omega, rates.kappa).entries;
  const CMatrix h_b = assemble_hamiltonian(beta_conj_basis, rates.omega, rates.kappa).entries;
  const CMatrix n_a = op_number_power(alpha_basis, 1).entries;
  const CMatrix n_b = op_number_power(beta_conj_basis, 1).entries;

  // vec(X p) = (I kron X) vec(p); vec(p Y^H) = (conj(Y) kron I) vec(p).
  const auto left = [&](const CMatrix& x) { return linalg::kron(ident, x); };
  const auto right = [&](const CMatrix& y) { return linalg::kron(CMatrix(y.conjugate()), ident); };
  const auto both = [&](const CMatrix& x, const CMatrix& y) {
    return linalg::kron(CMatrix(y.conjugate()), x);
  };

  CMatrix l = -kI * (left(h_a) - right(h_b));
  if (rates.gamma_p != 0.0) {
    const CMatrix n2_a = op_number_power(alpha_basis, 2).entries;
    const CMatrix n2_b = op_number_power(beta_conj_basis, 2).entries;
    l += rates.gamma_p * (2.0 * both(n_a, n_b) - left(n2_a) - right(n2_b));
  }
  if (rates.gamma_a != 0.0) {
    const CMatrix a_a = op_annihilation(alpha_basis).entries;
    const CMatrix a_b = op_annihilation(beta_conj_basis).entries;
    l += rates.gamma_a * (2.0 * both(a_a, a_b) - left(n_a) - right(n_b));
  }
  return l;
}

CpsPFunction master_evolve_cps(const CpsPFunction& pfunc, const fock::LindbladRates& rates,
                               double t, int steps) {
  require(rates.gamma_p >= 0.0 && rates.gamma_a >= 0.0, ErrorCode::InvalidArgument,
          "master_evolve_cps: negative rate");
  check_schedule(t, steps, "master_evolve_cps");
  require(pfunc.modes() == 1, ErrorCode::Unsupported, "master_evolve_cps: single mode only");
  CpsPFunction p = to_unnormalized(pfunc);
  const int d = p.alpha_modes[0].dim();
  const CMatrix prop =
      linalg::expm(master_superoperator(p.alpha_modes[0], p.beta_conj_modes[0], rates) *
                   (t / steps));
  CVector v = Eigen::Map<const CVector>(p.coeffs.data(), p.coeffs.size());
  for (int s = 0; s < steps; ++s) v = prop * v;
  p.coeffs = Eigen::Map<const CMatrix>(v.data(), d, d);
  return p;
}

}  // namespace cpskit

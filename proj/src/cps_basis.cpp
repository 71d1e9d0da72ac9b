#include "cpskit/cps_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "cpskit/linalg.hpp"
#include "cpskit/special.hpp"

namespace cpskit {

namespace {

constexpr int kMaxBasisDim = 4096;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> logs) {
  double top = kNegInf;
  for (double v : logs) top = std::max(top, v);
  if (top == kNegInf) return kNegInf;
  std::vector<double> scaled(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) scaled[i] = std::exp(logs[i] - top);
  return top + std::log(linalg::pairwise_sum(scaled));
}

double log_gn_formula(double log_radius, int n) {
  if (n < 0) return kNegInf;
  if (n == 0) return 0.0;
  return n * log_radius - 0.5 * special::log_factorial(n);
}

// ln of sum_{n=n0}^{n_max} |alpha|^{2n}/n!, zero-safe.
double log_norm_sq(double radius, int n0, int n_max) {
  if (radius == 0.0) return n0 == 0 ? 0.0 : kNegInf;
  const double lr = std::log(radius);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(std::max(0, n_max - n0 + 1)));
  for (int n = n0; n <= n_max; ++n) logs.push_back(2.0 * log_gn_formula(lr, n));
  return log_sum_exp(logs);
}

long positive_mod(long k, long d) {
  const long r = k % d;
  return r < 0 ? r + d : r;
}

}  // namespace

CpsBasis::CpsBasis(int d, int n0, cplx alpha) : alpha_(alpha) {
  require(d >= 1, ErrorCode::InvalidArgument, "make_basis: d must be at least 1");
  require(d <= kMaxBasisDim, ErrorCode::InvalidArgument,
          "make_basis: d exceeds " + std::to_string(kMaxBasisDim));
  require(n0 >= 0, ErrorCode::InvalidArgument, "make_basis: n0 must be >= 0");
  require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()),
          ErrorCode::InvalidArgument, "make_basis: alpha must be finite");
  require(alpha != cplx(0.0, 0.0), ErrorCode::InvalidArgument,
          "make_basis: alpha = 0 leaves the phase mapping undefined");

  auto radial = std::make_shared<Radial>();
  radial->d = d;
  radial->n0 = n0;
  radial->log_radius = std::log(std::abs(alpha));

  std::vector<double> log_sq(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    log_sq[static_cast<std::size_t>(k)] =
        2.0 * log_gn_formula(radial->log_radius, n0 + k);
  }
  const double log_gq_sq = log_sum_exp(log_sq);
  radial->log_gq = 0.5 * log_gq_sq;

  radial->weights.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const auto i = static_cast<std::size_t>(k);
    radial->weights[i] = std::exp(log_sq[i] - log_gq_sq);
  }
  const double total = linalg::pairwise_sum(radial->weights);
  for (double& w : radial->weights) w /= total;

  // Roots of unity, conjugate-symmetric by construction so the Gram matrix is
  // exactly Hermitian.
  radial->roots.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (2 * k <= d) {
      const double angle = 2.0 * kPi * k / d;
      radial->roots[i] = {std::cos(angle), std::sin(angle)};
    } else {
      radial->roots[i] = std::conj(radial->roots[static_cast<std::size_t>(d - k)]);
    }
  }

  // M_{q1 q2} = sum_n w_n e^{i (q2 - q1) n phi}; circulant in q2 - q1.
  std::vector<cplx> first_row(static_cast<std::size_t>(d));
  for (int delta = 0; delta < d; ++delta) {
    std::vector<cplx> terms(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const long phase = positive_mod(static_cast<long>(delta) * (n0 + k), d);
      terms[static_cast<std::size_t>(k)] =
          radial->weights[static_cast<std::size_t>(k)] *
          radial->roots[static_cast<std::size_t>(phase)];
    }
    first_row[static_cast<std::size_t>(delta)] = linalg::pairwise_sum(terms);
  }
  first_row[0] = 1.0;
  for (int delta = 1; 2 * delta <= d; ++delta) {
    first_row[static_cast<std::size_t>(d - delta)] =
        std::conj(first_row[static_cast<std::size_t>(delta)]);
  }
  radial->gram.resize(d, d);
  for (int q1 = 0; q1 < d; ++q1) {
    for (int q2 = 0; q2 < d; ++q2) {
      radial->gram(q1, q2) = first_row[static_cast<std::size_t>(positive_mod(q2 - q1, d))];
    }
  }
  data_ = std::move(radial);
}

double CpsBasis::phase_step() const { return 2.0 * kPi / data_->d; }

cplx CpsBasis::root(long k) const {
  return data_->roots[static_cast<std::size_t>(positive_mod(k, data_->d))];
}

cplx CpsBasis::amplitude(int q) const { return alpha_ * root(q); }

double CpsBasis::log_gn(int n) const { return log_gn_formula(data_->log_radius, n); }

double CpsBasis::gq() const { return std::exp(data_->log_gq); }

CpsBasis CpsBasis::rotated(double theta) const {
  return CpsBasis(data_, alpha_ * std::polar(1.0, theta));
}

bool CpsBasis::same_as(const CpsBasis& other) const {
  return dim() == other.dim() && n0() == other.n0() && alpha_ == other.alpha_;
}

CVector CpsState::normalized_coeffs() const {
  if (convention == Convention::Normalized) return coeffs;
  return coeffs * basis.gq();
}

CpsState CpsState::as(Convention target) const {
  if (target == convention) return *this;
  CpsState out = *this;
  out.convention = target;
  out.coeffs = target == Convention::Normalized ? CVector(coeffs * basis.gq())
                                                : CVector(coeffs / basis.gq());
  return out;
}

double CpsState::physical_norm_sq() const {
  const CVector psi = normalized_coeffs();
  return psi.dot(basis.gram() * psi).real();
}

CpsState basis_member(const CpsBasis& basis, int q) {
  require(q >= 0 && q < basis.dim(), ErrorCode::InvalidArgument,
          "basis_member: phase index out of range");
  CpsState out{basis, CVector::Zero(basis.dim()), Convention::Normalized};
  out.coeffs(q) = 1.0;
  return out;
}

double norm_gq_gamma(cplx alpha, int n_max) {
  require(n_max >= 0, ErrorCode::InvalidArgument,
          "norm_gq_gamma: n_max must be >= 0");
  const double x = std::norm(alpha);
  if (x == 0.0) return 1.0;
  const double q = boost::math::gamma_q(static_cast<double>(n_max) + 1.0, x);
  return std::exp(0.5 * (x + std::log(q)));
}

double norm_gq_direct(cplx alpha, int n0, int n_max) {
  require(n0 >= 0 && n_max >= n0, ErrorCode::InvalidArgument,
          "norm_gq_direct: need 0 <= n0 <= n_max");
  return std::exp(0.5 * log_norm_sq(std::abs(alpha), n0, n_max));
}

double gn_sq_gaussian(double alpha_sq, int n) {
  require(alpha_sq > 0.0, ErrorCode::InvalidArgument,
          "gn_sq_gaussian: |alpha|^2 must be positive");
  const double r = std::sqrt(alpha_sq);
  const double shift = n / r - r;
  return std::exp(alpha_sq - 0.5 * shift * shift) / std::sqrt(2.0 * kPi * alpha_sq);
}

CpsState fock_to_cps(const CpsBasis& basis, const CVector& psi_n,
                     Convention convention) {
  const int d = basis.dim();
  require(psi_n.size() == d, ErrorCode::DimensionMismatch,
          "fock_to_cps: vector length must equal d");
  const double arg = std::arg(basis.alpha());
  const double shift = convention == Convention::Normalized ? basis.log_gq() : 0.0;
  // Scaled amplitudes psi_n sqrt(n!)/alpha^n, then an inverse DFT.
  CVector scaled(d);
  for (int k = 0; k < d; ++k) {
    const int n = basis.n0() + k;
    scaled(k) = psi_n(k) * std::exp(shift - basis.log_gn(n)) * std::polar(1.0, -n * arg);
  }
  CpsState out{basis, CVector::Zero(d), convention};
  for (int q = 0; q < d; ++q) {
    cplx acc = 0.0;
    for (int k = 0; k < d; ++k) {
      acc += scaled(k) * std::conj(basis.root(static_cast<long>(q) * (basis.n0() + k)));
    }
    out.coeffs(q) = acc / static_cast<double>(d);
  }
  return out;
}

CVector cps_to_fock(const CpsState& state) {
  const CpsBasis& basis = state.basis;
  const int d = basis.dim();
  require(state.coeffs.size() == d, ErrorCode::DimensionMismatch,
          "cps_to_fock: coefficient length must equal d");
  const double arg = std::arg(basis.alpha());
  const double shift =
      state.convention == Convention::Normalized ? -basis.log_gq() : 0.0;
  CVector out(d);
  for (int k = 0; k < d; ++k) {
    const int n = basis.n0() + k;
    cplx acc = 0.0;
    for (int q = 0; q < d; ++q) acc += state.coeffs(q) * basis.root(static_cast<long>(q) * n);
    out(k) = acc * std::exp(basis.log_gn(n) + shift) * std::polar(1.0, n * arg);
  }
  return out;
}

cplx gram_inner(const CpsState& lhs, const CpsState& rhs) {
  require(lhs.basis.same_as(rhs.basis), ErrorCode::DimensionMismatch,
          "gram_inner: states belong to different bases");
  const CVector a = lhs.normalized_coeffs();
  const CVector b = rhs.normalized_coeffs();
  return a.dot(lhs.basis.gram() * b);
}

cplx geometric_mean_sum(cplx z, int d) {
  require(d >= 1, ErrorCode::InvalidArgument, "geometric_mean_sum: d must be >= 1");
  if (std::abs(1.0 - z) < 1e-8) {
    cplx acc = 0.0;
    for (int n = d - 1; n >= 0; --n) acc = acc * z + 1.0;
    return acc / static_cast<double>(d);
  }
  return (1.0 - std::pow(z, d)) / (1.0 - z) / static_cast<double>(d);
}

CpsState reexpand_coherent(const CpsBasis& basis, cplx alpha_tilde,
                           Convention convention) {
  require(basis.n0() == 0, ErrorCode::Unsupported,
          "reexpand_coherent: only defined for n0 = 0");
  const int d = basis.dim();
  CpsState out{basis, CVector(d), convention};
  for (int q = 0; q < d; ++q) {
    out.coeffs(q) = geometric_mean_sum(alpha_tilde / basis.amplitude(q), d);
  }
  if (convention == Convention::Normalized) {
    const double log_ratio =
        basis.log_gq() - 0.5 * log_norm_sq(std::abs(alpha_tilde), 0, basis.n_max());
    out.coeffs *= std::exp(log_ratio);
  }
  return out;
}

cplx log_norm_gradient(const CpsBasis& basis) {
  const double lower =
      basis.n0() == 0 ? 0.0 : std::exp(2.0 * (basis.log_gn(basis.n0() - 1) - basis.log_gq()));
  const double upper = basis.weights().back();
  return 0.5 * std::conj(basis.alpha()) * (1.0 + lower - upper);
}

double total_number_norm(std::span<const cplx> alphas, const TotalNumberSet& set) {
  require(!alphas.empty() && alphas.size() <= 4, ErrorCode::InvalidArgument,
          "total_number_norm: between 1 and 4 modes supported");
  require(set.max_total >= 0, ErrorCode::InvalidArgument,
          "total_number_norm: unbounded number set");
  require(set.min_total <= set.max_total, ErrorCode::InvalidArgument,
          "total_number_norm: empty number range");
  const std::size_t modes = alphas.size();
  std::vector<double> log_radius(modes);
  for (std::size_t i = 0; i < modes; ++i) {
    log_radius[i] = alphas[i] == cplx(0.0, 0.0) ? kNegInf : std::log(std::abs(alphas[i]));
  }
  std::vector<double> logs;
  std::vector<int> occ(modes, 0);
  const int top = set.max_total;
  while (true) {
    int total = 0;
    for (int n : occ) total += n;
    if (total >= set.min_total && total <= set.max_total) {
      double log_term = 0.0;
      for (std::size_t i = 0; i < modes; ++i) {
        if (occ[i] > 0) log_term += 2.0 * log_gn_formula(log_radius[i], occ[i]);
      }
      logs.push_back(log_term);
    }
    // odometer over [0, top]^modes
    std::size_t m = 0;
    while (m < modes && ++occ[m] > top) occ[m++] = 0;
    if (m == modes) break;
  }
  return std::exp(0.5 * log_sum_exp(logs));
}

}  // namespace cpskit

#include "cpskit/cps_operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cpskit/linalg.hpp"
#include "cpskit/special.hpp"

namespace cpskit {

namespace {

void require_zero_based(const CpsBasis& basis, const char* what) {
  require(basis.n0() == 0, ErrorCode::Unsupported,
          std::string(what) + ": closed form requires n0 = 0");
}

// F[k, q] = e^{i q n phi} with n = n0 + k.
CMatrix phase_table(const CpsBasis& basis) {
  const int d = basis.dim();
  CMatrix f(d, d);
  for (int k = 0; k < d; ++k) {
    for (int q = 0; q < d; ++q) f(k, q) = basis.root(static_cast<long>(q) * (basis.n0() + k));
  }
  return f;
}

}  // namespace

CpsState CpsOperatorMatrix::apply(const CpsState& state) const {
  require(state.basis.same_as(basis), ErrorCode::DimensionMismatch,
          "apply: operator and state belong to different bases");
  CpsState out = state;
  out.coeffs = entries * state.coeffs;
  return out;
}

CpsOperatorMatrix op_from_fock_matrix(const CpsBasis& basis, const CMatrix& o_fock,
                                      std::string label) {
  const int d = basis.dim();
  require(o_fock.rows() == d && o_fock.cols() == d, ErrorCode::DimensionMismatch,
          "op_from_fock_matrix: matrix must be d x d");
  const double lr = std::log(basis.radius());
  const double arg = std::arg(basis.alpha());
  CMatrix scaled = CMatrix::Zero(d, d);
  for (int kp = 0; kp < d; ++kp) {
    for (int k = 0; k < d; ++k) {
      const cplx v = o_fock(kp, k);
      if (v == cplx(0.0, 0.0)) continue;
      const int np = basis.n0() + kp;
      const int n = basis.n0() + k;
      const double log_mag = (n - np) * lr +
                             0.5 * (special::log_factorial(np) - special::log_factorial(n));
      scaled(kp, k) = v * std::exp(log_mag) * std::polar(1.0, (n - np) * arg);
    }
  }
  const CMatrix f = phase_table(basis);
  CpsOperatorMatrix out{basis, f.adjoint() * scaled * f / static_cast<double>(d),
                        std::move(label)};
  return out;
}

CpsOperatorMatrix op_number_function(const CpsBasis& basis,
                                     const std::function<double(int)>& f,
                                     std::string label) {
  const int d = basis.dim();
  std::vector<double> values(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) values[static_cast<std::size_t>(k)] = f(basis.n0() + k);
  // column of the circulant for each shift s = q - q'
  std::vector<cplx> by_shift(static_cast<std::size_t>(d));
  std::vector<cplx> terms(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) {
    for (int k = 0; k < d; ++k) {
      terms[static_cast<std::size_t>(k)] =
          values[static_cast<std::size_t>(k)] * basis.root(static_cast<long>(s) * (basis.n0() + k));
    }
    by_shift[static_cast<std::size_t>(s)] = linalg::pairwise_sum(terms) / static_cast<double>(d);
  }
  CpsOperatorMatrix out{basis, CMatrix(d, d), std::move(label)};
  for (int qp = 0; qp < d; ++qp) {
    for (int q = 0; q < d; ++q) {
      out.entries(qp, q) = by_shift[static_cast<std::size_t>(((q - qp) % d + d) % d)];
    }
  }
  return out;
}

CpsOperatorMatrix op_number_power(const CpsBasis& basis, int k) {
  require(k >= 0 && k <= 8, ErrorCode::InvalidArgument,
          "op_number_power: k must be in 0..8");
  return op_number_function(
      basis, [k](int n) { return std::pow(static_cast<double>(n), k); },
      "n^" + std::to_string(k));
}

CpsOperatorMatrix op_shifted_quadratic(const CpsBasis& basis) {
  require_zero_based(basis, "op_shifted_quadratic");
  const double nm = basis.n_max();
  return op_number_function(
      basis, [nm](int n) { return static_cast<double>(n) * (n - nm); },
      "n^2-nm*n");
}

CpsOperatorMatrix op_annihilation(const CpsBasis& basis) {
  require_zero_based(basis, "op_annihilation");
  const int d = basis.dim();
  CpsOperatorMatrix out{basis, CMatrix(d, d), "a"};
  for (int qp = 0; qp < d; ++qp) {
    for (int q = 0; q < d; ++q) {
      out.entries(qp, q) = (q == qp ? basis.amplitude(q) : cplx(0.0, 0.0)) -
                           basis.amplitude(qp) / static_cast<double>(d);
    }
  }
  return out;
}

CpsOperatorMatrix op_creation(const CpsBasis& basis) {
  require_zero_based(basis, "op_creation");
  CpsOperatorMatrix out = op_number_power(basis, 1);
  for (int q = 0; q < basis.dim(); ++q) out.entries.col(q) /= basis.amplitude(q);
  out.label = "a^dag";
  return out;
}

CpsOperatorMatrix assemble_hamiltonian(const CpsBasis& basis, double omega,
                                       double kappa) {
  return op_number_function(
      basis,
      [omega, kappa](int n) {
        const double x = n;
        return omega * x + 0.5 * kappa * x * x;
      },
      "hamiltonian");
}

CpsOperatorMatrix metric_adjoint(const CpsOperatorMatrix& op) {
  const CMatrix& m = op.basis.gram();
  CpsOperatorMatrix out = op;
  out.entries = m.fullPivLu().solve(CMatrix(op.entries.adjoint() * m));
  out.label = op.label + "^dag";
  return out;
}

cplx expectation(const CpsState& state, const CpsOperatorMatrix& op) {
  require(state.basis.same_as(op.basis), ErrorCode::DimensionMismatch,
          "expectation: operator and state belong to different bases");
  const CVector psi = state.normalized_coeffs();
  const CVector m_psi = state.basis.gram() * psi;
  const double norm = psi.dot(m_psi).real();
  require(norm > 0.0, ErrorCode::InvalidArgument, "expectation: zero state");
  return m_psi.dot(op.entries * psi) / norm;
}

cplx number_power_closed_form(int d, int k, cplx z) {
  require(d >= 1, ErrorCode::InvalidArgument, "number_power_closed_form: d >= 1");
  require(k == 1 || k == 2, ErrorCode::Unsupported,
          "number_power_closed_form: only k = 1, 2");
  const double dd = d;
  if (std::abs(1.0 - z) < 1e-8) {
    cplx acc = 0.0;
    for (int n = d - 1; n >= 0; --n) acc = acc * z + std::pow(static_cast<double>(n), k);
    return acc / dd;
  }
  const cplx zd = std::pow(z, d);
  const cplx bracket = dd - z * (dd - 1.0);
  if (k == 1) return (z - zd * bracket) / (dd * (1.0 - z) * (1.0 - z));
  const cplx one_minus = 1.0 - z;
  return (z + z * z - zd * bracket * bracket - zd * z) /
         (dd * one_minus * one_minus * one_minus);
}

cplx shifted_quadratic_closed_form(int d, cplx z) {
  require(d >= 1, ErrorCode::InvalidArgument, "shifted_quadratic_closed_form: d >= 1");
  const double dd = d;
  if (std::abs(1.0 - z) < 1e-8) {
    const double nm = d - 1;
    cplx acc = 0.0;
    for (int n = d - 1; n >= 0; --n) acc = acc * z + static_cast<double>(n) * (n - nm);
    return acc / dd;
  }
  const cplx om = 1.0 - z;
  return z * (std::pow(z, d) * (dd - 2.0) - dd * (std::pow(z, d - 1) - z + 1.0) + 2.0) /
         (dd * om * om * om);
}

bool is_circulant(const CMatrix& entries, double tol) {
  const auto d = entries.rows();
  for (Eigen::Index qp = 0; qp < d; ++qp) {
    for (Eigen::Index q = 0; q < d; ++q) {
      const Eigen::Index s = ((q - qp) % d + d) % d;
      if (std::abs(entries(qp, q) - entries(0, s)) > tol) return false;
    }
  }
  return true;
}

}  // namespace cpskit

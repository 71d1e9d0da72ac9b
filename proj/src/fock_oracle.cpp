#include "cpskit/fock_oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cpskit/linalg.hpp"
#include "cpskit/special.hpp"

namespace cpskit::fock {

namespace {

void check_dim(int dim) {
  require(dim >= 1, ErrorCode::InvalidArgument,
          "fock: dimension must be at least 1");
  require(dim <= kMaxDim, ErrorCode::InvalidArgument,
          "fock: dimension exceeds oracle cap of " + std::to_string(kMaxDim));
}

}  // namespace

LadderOps ladder_ops(int dim) {
  check_dim(dim);
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  LadderOps ops;
  ops.a.entries = a;
  ops.a_dag.entries = a.adjoint();
  ops.n.entries = ops.a_dag.entries * a;
  return ops;
}

FockVector coherent_vector(cplx alpha, int dim, bool normalized) {
  check_dim(dim);
  FockVector out;
  out.coeffs = CVector::Zero(dim);
  out.coeffs(0) = normalized ? std::exp(-0.5 * std::norm(alpha)) : 1.0;
  for (int n = 1; n < dim; ++n) {
    out.coeffs(n) = out.coeffs(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  return out;
}

ProjectorResult number_projector(int dim, const std::function<bool(int)>& select) {
  check_dim(dim);
  ProjectorResult out;
  out.projector.entries = CMatrix::Zero(dim, dim);
  int rank = 0;
  for (int n = 0; n < dim; ++n) {
    if (select(n)) {
      out.projector.entries(n, n) = 1.0;
      ++rank;
    }
  }
  out.empty = rank == 0;
  return out;
}

ProjectorResult number_projector(
    std::span<const int> dims,
    const std::function<bool(std::span<const int>)>& select) {
  require(!dims.empty(), ErrorCode::InvalidArgument,
          "number_projector: no modes given");
  long total = 1;
  for (int d : dims) {
    require(d >= 1, ErrorCode::InvalidArgument,
            "number_projector: mode dimension must be at least 1");
    total *= d;
    require(total <= kMaxDim, ErrorCode::InvalidArgument,
            "number_projector: product dimension exceeds oracle cap");
  }
  ProjectorResult out;
  out.projector.entries = CMatrix::Zero(total, total);
  std::vector<int> occupation(dims.size(), 0);
  int rank = 0;
  for (long index = 0; index < total; ++index) {
    long rest = index;
    for (std::size_t m = dims.size(); m-- > 0;) {
      occupation[m] = static_cast<int>(rest % dims[m]);
      rest /= dims[m];
    }
    if (select(occupation)) {
      out.projector.entries(index, index) = 1.0;
      ++rank;
    }
  }
  out.empty = rank == 0;
  return out;
}

FockVector evolve_exact(const FockVector& psi, const FockOperator& hamiltonian,
                        double t) {
  require(hamiltonian.dim() == psi.dim() &&
              hamiltonian.entries.cols() == hamiltonian.entries.rows(),
          ErrorCode::DimensionMismatch, "evolve_exact: dimension mismatch");
  require(linalg::hermitian_residual(hamiltonian.entries) <= 1e-12,
          ErrorCode::NotHermitian, "evolve_exact: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian.entries);
  const CMatrix& v = solver.eigenvectors();
  CVector phases(psi.dim());
  for (int k = 0; k < psi.dim(); ++k) {
    phases(k) = std::exp(cplx(0.0, -solver.eigenvalues()(k) * t));
  }
  FockVector out;
  out.coeffs = v * phases.asDiagonal() * (v.adjoint() * psi.coeffs);
  return out;
}

CMatrix lindblad_superoperator(int dim, const LindbladRates& rates) {
  check_dim(dim);
  const LadderOps ops = ladder_ops(dim);
  const CMatrix& a = ops.a.entries;
  const CMatrix& n = ops.n.entries;
  const CMatrix n2 = n * n;
  const CMatrix h = rates.omega * n + 0.5 * rates.kappa * n2;
  const CMatrix ident = CMatrix::Identity(dim, dim);
  const cplx i(0.0, 1.0);

  // vec(X rho Y) = (Y^T kron X) vec(rho) for column-major vec.
  const auto left = [&](const CMatrix& x) { return linalg::kron(ident, x); };
  const auto right = [&](const CMatrix& y) {
    return linalg::kron(CMatrix(y.transpose()), ident);
  };
  const auto sandwich = [&](const CMatrix& x, const CMatrix& y) {
    return linalg::kron(CMatrix(y.transpose()), x);
  };

  CMatrix l = -i * (left(h) - right(h));
  if (rates.gamma_p != 0.0) {
    l += rates.gamma_p * (2.0 * sandwich(n, n) - left(n2) - right(n2));
  }
  if (rates.gamma_a != 0.0) {
    l += rates.gamma_a *
         (2.0 * sandwich(a, CMatrix(a.adjoint())) - left(n) - right(n));
  }
  return l;
}

FockDensity lindblad_evolve_exact(const FockDensity& rho,
                                  const LindbladRates& rates, double t,
                                  int steps) {
  require(rates.gamma_p >= 0.0 && rates.gamma_a >= 0.0,
          ErrorCode::InvalidArgument, "lindblad_evolve_exact: negative rate");
  require(steps >= 1, ErrorCode::InvalidArgument,
          "lindblad_evolve_exact: steps must be at least 1");
  const int dim = rho.dim();
  require(rho.entries.cols() == dim, ErrorCode::DimensionMismatch,
          "lindblad_evolve_exact: density must be square");
  const CMatrix prop =
      linalg::expm(lindblad_superoperator(dim, rates) * (t / steps));
  CVector v = Eigen::Map<const CVector>(rho.entries.data(), rho.entries.size());
  for (int s = 0; s < steps; ++s) v = prop * v;
  FockDensity out;
  out.entries = Eigen::Map<const CMatrix>(v.data(), dim, dim);
  return out;
}

std::vector<double> quadrature_density(const FockVector& psi,
                                       std::span<const double> p_grid) {
  const CMatrix basis = special::momentum_wavefunctions(psi.dim(), p_grid);
  const CVector amp = basis.transpose() * psi.coeffs;
  std::vector<double> out(p_grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::norm(amp(static_cast<Eigen::Index>(j)));
  }
  return out;
}

cplx permanent(const CMatrix& matrix) {
  const auto n = static_cast<int>(matrix.rows());
  require(matrix.cols() == n, ErrorCode::DimensionMismatch,
          "permanent: matrix must be square");
  require(n <= 30, ErrorCode::InvalidArgument,
          "permanent: N > 30 exceeds the cost guard");
  if (n == 0) return 1.0;

  // perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij, with S
  // visited in Gray-code order so each step toggles one column.
  CVector row_sums = CVector::Zero(n);
  cplx total = 0.0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t changed = next ^ gray;
    const int col = std::countr_zero(changed);
    if (next & changed) {
      row_sums += matrix.col(col);
    } else {
      row_sums -= matrix.col(col);
    }
    gray = next;
    cplx prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sums(i);
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return (n % 2 == 0) ? total : -total;
}

}  // namespace cpskit::fock

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpskit/cps_operators.hpp"
#include "cpskit/fock_oracle.hpp"
#include "support.hpp"

using namespace cpskit;

namespace {

// Q O Q conjugated into the basis by explicit change of basis.
CMatrix oracle_conjugation(const CpsBasis& b, const CMatrix& o_fock) {
  const int d = b.dim();
  CMatrix out(d, d);
  for (int q = 0; q < d; ++q) {
    const CVector image = o_fock * cps_to_fock(basis_member(b, q));
    out.col(q) = fock_to_cps(b, image, Convention::Normalized).coeffs;
  }
  return out;
}

// Number-basis matrices of the window n0..n_max. Ladder matrices are taken
// from a larger space so the window block is the projected operator.
struct Window {
  CMatrix a, a_dag, n;
};

Window window(const CpsBasis& b) {
  const fock::LadderOps ops = fock::ladder_ops(b.n_max() + 2);
  const int n0 = b.n0();
  const int d = b.dim();
  return {ops.a.entries.block(n0, n0, d, d), ops.a_dag.entries.block(n0, n0, d, d),
          ops.n.entries.block(n0, n0, d, d)};
}

CMatrix number_power_fock(const CpsBasis& b, int k) {
  CMatrix m = CMatrix::Zero(b.dim(), b.dim());
  for (int i = 0; i < b.dim(); ++i) m(i, i) = std::pow(static_cast<double>(b.n0() + i), k);
  return m;
}

// psi_q = delta_{q0} on the unnormalized states, i.e. |alpha>_Q itself.
CpsState reference_state(const CpsBasis& b) {
  CVector e = CVector::Zero(b.dim());
  e(0) = 1.0;
  return {b, e, Convention::Unnormalized};
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("number power diagonals") {
  CHECK(std::abs(op_number_power(CpsBasis(32, 0, 1.0), 1).entries(3, 3) - 15.5) < 1e-13);
  CHECK(std::abs(op_number_power(CpsBasis(4, 0, 1.0), 2).entries(0, 0) - 3.5) < 1e-14);
  const CpsBasis b5(5, 0, {0.7, 0.3});
  CHECK(max_diff(op_number_power(b5, 1).entries, oracle_conjugation(b5, window(b5).n)) < 1e-12);
  CHECK(max_diff(op_number_power(b5, 0).entries, CMatrix::Identity(5, 5)) < 1e-15);
  CHECK_THROWS_AS(op_number_power(b5, 9), Error);
  CHECK_THROWS_AS(op_number_power(b5, -1), Error);
}

TEST_CASE("z sign convention at d = 3") {
  const CpsBasis b(3, 0, 1.4);
  const CMatrix o = op_number_power(b, 1).entries;
  for (int qp = 0; qp < 3; ++qp) {
    for (int q = 0; q < 3; ++q) {
      const cplx z = b.root(q - qp);
      CHECK(std::abs(o(qp, q) - (z + 2.0 * z * z) / 3.0) < 1e-15);
    }
  }
  // The opposite sign is the transpose, which differs at d = 3.
  CHECK(max_diff(o, o.transpose()) > 0.1);
  CHECK(max_diff(o, oracle_conjugation(b, window(b).n)) < 1e-12);
}

TEST_CASE("closed forms match direct sums") {
  for (int d : {2, 3, 6, 17, 64}) {
    const CpsBasis b(d, 0, 2.0);
    const CMatrix n1 = op_number_power(b, 1).entries;
    const CMatrix n2 = op_number_power(b, 2).entries;
    const CMatrix sq = op_shifted_quadratic(b).entries;
    for (int q = 0; q < d; ++q) {
      const cplx z = b.root(q);
      const double scale = static_cast<double>(d) * d;
      CHECK(std::abs(n1(0, q) - number_power_closed_form(d, 1, z)) < 1e-13 * d);
      CHECK(std::abs(n2(0, q) - number_power_closed_form(d, 2, z)) < 1e-13 * scale);
      CHECK(std::abs(sq(0, q) - shifted_quadratic_closed_form(d, z)) < 1e-13 * scale);
    }
  }
  CHECK(number_power_closed_form(7, 1, 1.0) == cplx(3.0));
  CHECK(number_power_closed_form(7, 2, 1.0) == cplx(6.0 * 13.0 / 6.0));
  CHECK(shifted_quadratic_closed_form(7, 1.0) == cplx(6.0 * -5.0 / 6.0));
}

TEST_CASE("shifted quadratic") {
  CHECK(std::abs(op_shifted_quadratic(CpsBasis(2, 0, 1.0)).entries(0, 0)) < 1e-15);
  CHECK(std::abs(op_shifted_quadratic(CpsBasis(4, 0, 1.0)).entries(1, 1) + 1.0) < 1e-14);
  const CpsBasis b(6, 0, {1.0, 1.0});
  const CMatrix expect =
      op_number_power(b, 2).entries - b.n_max() * op_number_power(b, 1).entries;
  CHECK(max_diff(op_shifted_quadratic(b).entries, expect) < 1e-12);
  CHECK_THROWS_AS(op_shifted_quadratic(CpsBasis(6, 1, 1.0)), Error);
}

TEST_CASE("annihilation") {
  const double alpha = 1.7;
  const CpsBasis qubit(2, 0, alpha);
  const CpsState out = op_annihilation(qubit).apply(reference_state(qubit));
  CHECK(std::abs(out.coeffs(0) - alpha / 2.0) < 1e-15);
  CHECK(std::abs(out.coeffs(1) - alpha / 2.0) < 1e-15);

  CHECK(op_annihilation(CpsBasis(1, 0, 1.0)).entries.cwiseAbs().maxCoeff() < 1e-15);

  const CpsBasis b(8, 0, 2.0);
  CHECK(max_diff(op_annihilation(b).entries, oracle_conjugation(b, window(b).a)) < 1e-12);
  CHECK_THROWS_AS(op_annihilation(CpsBasis(8, 2, 2.0)), Error);

  // The printed form alpha^(q)[delta - 1/d] fails the d = 2 oracle.
  CMatrix printed(2, 2);
  for (int qp = 0; qp < 2; ++qp) {
    for (int q = 0; q < 2; ++q) printed(qp, q) = qubit.amplitude(q) * ((q == qp ? 1.0 : 0.0) - 0.5);
  }
  CHECK(max_diff(printed, oracle_conjugation(qubit, window(qubit).a)) > 0.1);
}

TEST_CASE("creation") {
  const double alpha = 1.7;
  const CpsBasis qubit(2, 0, alpha);
  const CpsState out = op_creation(qubit).apply(reference_state(qubit));
  CHECK(std::abs(out.coeffs(0) - 1.0 / (2.0 * alpha)) < 1e-15);
  CHECK(std::abs(out.coeffs(1) + 1.0 / (2.0 * alpha)) < 1e-15);

  CHECK(op_creation(CpsBasis(1, 0, 1.0)).entries.cwiseAbs().maxCoeff() < 1e-15);

  const CpsBasis b(8, 0, 2.0);
  CHECK(max_diff(op_creation(b).entries, oracle_conjugation(b, window(b).a_dag)) < 1e-12);
  CHECK(max_diff(metric_adjoint(op_annihilation(b)).entries, op_creation(b).entries) < 1e-12);
}

TEST_CASE("generic constructor") {
  const CpsBasis b(7, 0, {1.2, -0.8});
  const Window w = window(b);
  CHECK(max_diff(op_from_fock_matrix(b, CMatrix::Identity(7, 7)).entries, CMatrix::Identity(7, 7)) <
        1e-14);
  CHECK(max_diff(op_from_fock_matrix(b, w.n).entries, op_number_power(b, 1).entries) < 1e-12);
  CHECK(max_diff(op_from_fock_matrix(b, w.a).entries, op_annihilation(b).entries) < 1e-12);
  CHECK(max_diff(op_from_fock_matrix(b, w.a_dag).entries, op_creation(b).entries) < 1e-12);
  CHECK_THROWS_AS(op_from_fock_matrix(b, CMatrix::Identity(6, 6)), Error);
}

TEST_CASE("Hamiltonian assembly") {
  const CpsBasis b(9, 0, 1.5);
  const CMatrix h0 = assemble_hamiltonian(b, 0.5, 0.0).entries;
  for (int q = 0; q < 9; ++q) CHECK(std::abs(h0(q, q) - 0.5 * 8.0 / 2.0) < 1e-14);

  const CpsBasis big(32, 0, 4.0);
  const CMatrix h = assemble_hamiltonian(big, 0.5, 1.0).entries;
  Eigen::ComplexEigenSolver<CMatrix> es(h);
  std::vector<double> got;
  for (int i = 0; i < 32; ++i) {
    CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-10);
    got.push_back(es.eigenvalues()(i).real());
  }
  std::sort(got.begin(), got.end());
  for (int n = 0; n < 32; ++n) CHECK(std::abs(got[n] - (0.5 * n + 0.5 * n * n)) < 1e-10);
}

TEST_CASE("circulant structure is exact") {
  for (int d : {1, 4, 9, 16}) {
    const CpsBasis b(d, d % 3, std::polar(1.3, 0.2));
    for (int k = 0; k <= 4; ++k) CHECK(is_circulant(op_number_power(b, k).entries, 0.0));
    CHECK(is_circulant(op_number_function(b, [](int n) { return std::sin(n); }, "sin").entries, 0.0));
  }
  CHECK_FALSE(is_circulant(op_annihilation(CpsBasis(4, 0, 1.0)).entries, 1e-12));
}

TEST_CASE("oracle equivalence on random states") {
  // n^4 is left to the acceptance sweep, where d = 16 at |alpha| = 0.5
  // exceeds 1e-12 from the rounding of its ~1e4-sized entries.
  std::mt19937_64 rng(23);
  const std::vector<cplx> alphas{0.5, 2.0, std::polar(4.0, kPi / 7.0)};
  for (int d : {1, 2, 3, 5, 8, 12, 16}) {
    for (cplx alpha : alphas) {
      for (int n0 : {0, 2}) {
        const CpsBasis b(d, n0, alpha);
        const Window w = window(b);
        std::vector<std::pair<CpsOperatorMatrix, CMatrix>> cases;
        for (int k = 0; k <= 3; ++k) cases.emplace_back(op_number_power(b, k), number_power_fock(b, k));
        cases.emplace_back(op_from_fock_matrix(b, w.a), w.a);
        cases.emplace_back(op_from_fock_matrix(b, w.a_dag), w.a_dag);
        if (n0 == 0) {
          cases.emplace_back(op_annihilation(b), w.a);
          cases.emplace_back(op_creation(b), w.a_dag);
          cases.emplace_back(op_shifted_quadratic(b),
                             number_power_fock(b, 2) - b.n_max() * number_power_fock(b, 1));
        }
        for (const auto& [op, fock_matrix] : cases) {
          double worst = 0.0;
          for (int trial = 0; trial < 20; ++trial) {
            const CpsState s{b, testing::random_vector(rng, d), Convention::Normalized};
            worst = std::max(worst, testing::rel_diff(cps_to_fock(op.apply(s)),
                                                      fock_matrix * cps_to_fock(s)));
          }
          CAPTURE(d);
          CAPTURE(n0);
          CAPTURE(op.label);
          CHECK(worst <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("expectation values match the number basis") {
  std::mt19937_64 rng(29);
  for (int d : {3, 8, 13}) {
    const CpsBasis b(d, 0, std::polar(1.8, 1.0));
    const Window w = window(b);
    const CpsState s{b, testing::random_vector(rng, d), Convention::Normalized};
    const CVector f = cps_to_fock(s);
    const auto fock_mean = [&](const CMatrix& o) { return f.dot(o * f) / f.squaredNorm(); };
    CHECK(std::abs(expectation(s, op_number_power(b, 1)) - fock_mean(w.n)) <=
          1e-12 * std::max(1.0, std::abs(fock_mean(w.n))));
    CHECK(std::abs(expectation(s, op_annihilation(b)) - fock_mean(w.a)) <=
          1e-12 * std::max(1.0, std::abs(fock_mean(w.a))));
    CHECK(std::abs(expectation(s, op_creation(b)) - fock_mean(w.a_dag)) <=
          1e-12 * std::max(1.0, std::abs(fock_mean(w.a_dag))));
  }
}

TEST_CASE("creation as a derivative of the projected coherent state") {
  const int d = 8;
  const cplx alpha = 2.0;
  const double h = 1e-5;
  const auto projected = [&](cplx a) { return fock::coherent_vector(a, d, false).coeffs; };
  const CpsBasis b(d, 0, alpha);
  const CVector created =
      cps_to_fock(op_creation(b).apply(reference_state(b)));
  const CVector d_re = (projected(alpha + h) - projected(alpha - h)) / (2.0 * h);
  const CVector d_im = (projected(alpha + cplx(0, h)) - projected(alpha - cplx(0, h))) / cplx(0, 2.0 * h);
  CHECK((created - d_re).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((created - d_im).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("annihilation on the reference state leaves only the top component") {
  // a_Q |alpha>_Q - alpha |alpha>_Q = -alpha g_{n_max} |n_max>, so the
  // relative residual is exactly |alpha| g_{n_max} / g_Q.
  for (double r : {0.8, 2.0, 4.0}) {
    const int d = static_cast<int>(std::ceil(3.0 * r * r)) + 1;
    const CpsBasis b(d, 0, r);
    const CpsState ref = basis_member(b, 0);
    const CVector lhs = cps_to_fock(op_annihilation(b).apply(ref));
    const CVector base = cps_to_fock(ref);
    const double rel = (lhs - r * base).norm() / base.norm();
    const double expect = r * std::sqrt(b.weights().back());
    CHECK(std::abs(rel - expect) <= 1e-6 * expect + 1e-15);
  }
}

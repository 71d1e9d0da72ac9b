#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cpskit/cps_basis.hpp"
#include "cpskit/fock_oracle.hpp"
#include "cpskit/special.hpp"
#include "support.hpp"

using namespace cpskit;

namespace {

// Unnormalized projected coherent state at amp, n = n0..n0+d-1.
CVector projected_coherent(cplx amp, int n0, int d) {
  const CVector full = fock::coherent_vector(amp, n0 + d, false).coeffs;
  return full.tail(d);
}

double spread(const CpsBasis& b) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int n = b.n0(); n <= b.n_max(); ++n) {
    lo = std::min(lo, b.log_gn(n));
    hi = std::max(hi, b.log_gn(n));
  }
  return std::exp(hi - lo);
}

}  // namespace

TEST_CASE("qubit basis") {
  const CpsBasis b(2, 0, 1.0);
  CHECK(b.gq() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(b.gram()(0, 1)) <= 1e-12);
  CHECK(std::abs(gram_inner(basis_member(b, 0), basis_member(b, 1))) <= 1e-12);

  const CVector plus = cps_to_fock({b, (CVector(2) << 1.0, 0.0).finished(), Convention::Unnormalized});
  const CVector minus = cps_to_fock({b, (CVector(2) << 0.0, 1.0).finished(), Convention::Unnormalized});
  CHECK(std::abs(plus(0) - 1.0) < 1e-15);
  CHECK(std::abs(plus(1) - 1.0) < 1e-15);
  CHECK(std::abs(minus(0) - 1.0) < 1e-15);
  CHECK(std::abs(minus(1) + 1.0) < 1e-15);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(CpsBasis(0, 0, 1.0), Error);
  CHECK_THROWS_AS(CpsBasis(4, -1, 1.0), Error);
  CHECK_THROWS_AS(CpsBasis(4, 0, 0.0), Error);
  CHECK_THROWS_AS(CpsBasis(4, 0, std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST_CASE("Gram matrix against direct sums") {
  const int d = 12;
  const CpsBasis b(d, 0, std::sqrt(6.0));
  std::vector<CVector> members;
  for (int q = 0; q < d; ++q) {
    const CVector v = projected_coherent(b.amplitude(q), 0, d);
    members.push_back(v / v.norm());
  }
  for (int q1 = 0; q1 < d; ++q1) {
    for (int q2 = 0; q2 < d; ++q2) {
      CHECK(std::abs(b.gram()(q1, q2) - members[q1].dot(members[q2])) < 1e-12);
    }
  }
}

TEST_CASE("Gram matrix structure") {
  for (int d : {1, 2, 5, 12, 31}) {
    for (int n0 : {0, 3}) {
      const CpsBasis b(d, n0, std::polar(2.3, 0.4));
      const CMatrix& m = b.gram();
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
      for (int q = 0; q < d; ++q) CHECK(std::abs(m(q, q) - 1.0) <= 1e-12);
      for (int q1 = 0; q1 < d; ++q1) {
        for (int q2 = 0; q2 < d; ++q2) {
          CHECK(m(q1, q2) == m((q1 + 1) % d, (q2 + 1) % d));
        }
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
  }
}

TEST_CASE("norms from the incomplete gamma function") {
  CHECK(norm_gq_gamma(0.0, 5) == doctest::Approx(1.0));
  CHECK(std::abs(norm_gq_gamma(1.7, 200) / std::exp(1.7 * 1.7 / 2.0) - 1.0) < 1e-10);

  double direct = 0.0;
  double term = 1.0;
  for (int n = 0; n <= 8; ++n) {
    if (n > 0) term *= 4.0 / n;
    direct += term;
  }
  CHECK(std::abs(norm_gq_gamma(2.0, 8) / std::sqrt(direct) - 1.0) < 1e-12);

  for (double r : {0.1, 1.0, 3.0, 8.0, 20.0}) {
    for (int nm : {0, 1, 7, 40, 400}) {
      CHECK(std::abs(norm_gq_gamma(r, nm) / norm_gq_direct(r, 0, nm) - 1.0) < 1e-12);
    }
  }
  const CpsBasis b(30, 0, {2.0, -1.0});
  CHECK(std::abs(b.gq() / norm_gq_gamma({2.0, -1.0}, 29) - 1.0) < 1e-12);
  CHECK(std::abs(b.gq() * b.gq() / projected_coherent({2.0, -1.0}, 0, 30).squaredNorm() - 1.0) <
        1e-12);
}

TEST_CASE("Gaussian approximation of g_n^2") {
  const double exact = std::exp(100.0 * std::log(100.0) - special::log_factorial(100));
  CHECK(std::abs(gn_sq_gaussian(100.0, 100) / exact - 1.0) < 5e-3);
}

TEST_CASE("large radius and dimension stay finite") {
  const CpsBasis b(2048, 0, std::sqrt(1000.0));
  double total = 0.0;
  for (double w : b.weights()) {
    CHECK(std::isfinite(w));
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isfinite(b.log_gq()));
  CHECK(std::abs(b.gram()(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("Fock to CPS expansions") {
  const int d = 6;
  const cplx alpha(1.3, 0.6);
  const CpsBasis b(d, 0, alpha);
  for (int n = 0; n < d; ++n) {
    CVector e = CVector::Zero(d);
    e(n) = 1.0;
    const CpsState s = fock_to_cps(b, e);
    const double fact = std::exp(0.5 * special::log_factorial(n));
    for (int q = 0; q < d; ++q) {
      const cplx expect = fact / (static_cast<double>(d) * std::pow(alpha, n)) * b.root(-static_cast<long>(q) * n);
      CHECK(std::abs(s.coeffs(q) - expect) < 1e-14 * std::abs(expect));
    }
  }

  const CpsState self = fock_to_cps(b, projected_coherent(alpha, 0, d));
  CVector delta = CVector::Zero(d);
  delta(0) = 1.0;
  CHECK((self.coeffs - delta).norm() < 1e-14);

  const CpsState uniform{b, CVector::Constant(d, 1.0 / d), Convention::Unnormalized};
  CVector vac = CVector::Zero(d);
  vac(0) = 1.0;
  CHECK((cps_to_fock(uniform) - vac).norm() < 1e-15);

  // With n0 > 0 a constant selects the n = 0 (mod d) member of the window;
  // |n0> needs the phase ramp e^{-i q n0 phi}.
  const CpsBasis shifted(5, 2, 1.5);
  const CVector five = cps_to_fock({shifted, CVector::Constant(5, 0.2), Convention::Unnormalized});
  CHECK(std::abs(five(3) - std::pow(1.5, 5) / std::sqrt(120.0)) < 1e-14);
  CHECK(five.head(3).norm() + std::abs(five(4)) < 1e-14);
  CVector ramp(5);
  for (int q = 0; q < 5; ++q) ramp(q) = 0.2 * shifted.root(-2L * q);
  const CVector two = cps_to_fock({shifted, ramp, Convention::Unnormalized});
  CHECK(std::abs(two(0) - 1.5 * 1.5 / std::sqrt(2.0)) < 1e-14);
  CHECK(two.tail(4).norm() < 1e-14);

  std::mt19937_64 rng(2);
  const CVector psi = testing::random_vector(rng, 8);
  const CpsBasis b8(8, 0, 1.9);
  CHECK(testing::rel_diff(cps_to_fock(fock_to_cps(b8, psi)), psi) < 1e-12);
  CHECK_THROWS_AS(fock_to_cps(b8, CVector::Zero(5)), Error);
}

TEST_CASE("DFT bijectivity over the full range") {
  std::mt19937_64 rng(17);
  for (int d : {1, 2, 3, 8, 16, 32}) {
    for (double r : {0.1, 0.5, 1.0, 3.0, 8.0}) {
      for (int n0 : {0, 2}) {
        const CpsBasis b(d, n0, std::polar(r, 0.3));
        for (Convention c : {Convention::Normalized, Convention::Unnormalized}) {
          const CVector coeffs = testing::random_vector(rng, d);
          const CpsState back = fock_to_cps(b, cps_to_fock({b, coeffs, c}), c);
          CHECK(testing::rel_diff(back.coeffs, coeffs) <= 1e-12);

          // The number-side round trip loses digits in proportion to the
          // spread of g_n across the window.
          const CVector psi = testing::random_vector(rng, d);
          const CVector again = cps_to_fock(fock_to_cps(b, psi, c));
          CHECK(testing::rel_diff(again, psi) <= 1e-14 * std::max(1.0, spread(b)));
        }
      }
    }
  }
}

TEST_CASE("convention switch") {
  const CpsBasis b(7, 1, {0.8, 2.0});
  std::mt19937_64 rng(4);
  const CpsState s{b, testing::random_vector(rng, 7), Convention::Unnormalized};
  const CpsState n = s.as(Convention::Normalized);
  CHECK(testing::rel_diff(n.coeffs, b.gq() * s.coeffs) < 1e-15);
  CHECK(testing::rel_diff(cps_to_fock(n), cps_to_fock(s)) < 1e-14);
  CHECK(testing::rel_diff(n.as(Convention::Unnormalized).coeffs, s.coeffs) < 1e-15);
}

TEST_CASE("physical norm and inner products") {
  std::mt19937_64 rng(9);
  for (int d : {1, 3, 8, 20}) {
    for (int n0 : {0, 2}) {
      const CpsBasis b(d, n0, std::polar(2.2, -1.0));
      const CpsState s1{b, testing::random_vector(rng, d), Convention::Normalized};
      const CpsState s2{b, testing::random_vector(rng, d), Convention::Normalized};
      const CVector f1 = cps_to_fock(s1);
      const CVector f2 = cps_to_fock(s2);
      CHECK(std::abs(s1.physical_norm_sq() / f1.squaredNorm() - 1.0) <= 1e-12);
      const cplx inner = gram_inner(s1, s2);
      CHECK(std::abs(inner - f1.dot(f2)) <= 1e-12 * f1.norm() * f2.norm());
    }
  }
  const CpsBasis b(5, 0, 1.0);
  for (int q = 0; q < 5; ++q) {
    CHECK(std::abs(gram_inner(basis_member(b, q), basis_member(b, q)) - 1.0) < 1e-14);
  }
}

TEST_CASE("coherent re-expansion") {
  const int d = 4;
  const CpsBasis b(d, 0, {1.1, 0.7});
  for (int q0 = 0; q0 < d; ++q0) {
    const CpsState s = reexpand_coherent(b, b.amplitude(q0));
    for (int q = 0; q < d; ++q) CHECK(std::abs(s.coeffs(q) - (q == q0 ? 1.0 : 0.0)) < 1e-14);
  }
  const CpsState vac = reexpand_coherent(b, 0.0);
  for (int q = 0; q < d; ++q) CHECK(std::abs(vac.coeffs(q) - 0.25) < 1e-15);

  const cplx tilde = 0.5 * b.alpha();
  const CVector got = cps_to_fock(reexpand_coherent(b, tilde));
  CHECK((got - projected_coherent(tilde, 0, d)).cwiseAbs().maxCoeff() < 1e-12);

  // Normalized form is the normalized projected state.
  const CpsState norm = reexpand_coherent(b, {0.2, -0.9}, Convention::Normalized);
  const CVector ref = projected_coherent({0.2, -0.9}, 0, d);
  CHECK(testing::rel_diff(cps_to_fock(norm), ref / ref.norm()) < 1e-13);

  CHECK_THROWS_AS(reexpand_coherent(CpsBasis(4, 1, 1.0), 0.5), Error);
  CHECK(geometric_mean_sum(1.0, 7) == cplx(1.0));
  CHECK(std::abs(geometric_mean_sum(1.0 + 1e-10, 7) - 1.0 - 3e-10) < 1e-15);
}

TEST_CASE("log-norm gradient") {
  CHECK(std::abs(log_norm_gradient(CpsBasis(1, 0, 0.8))) < 1e-15);

  const cplx alpha(1.2, -0.5);
  const CpsBasis wide(200, 0, alpha);
  CHECK(std::abs(log_norm_gradient(wide) - std::conj(alpha) / 2.0) < 1e-10);
  const CpsBasis narrow(6, 0, alpha);
  const double w_top = narrow.weights().back();
  CHECK(std::abs(log_norm_gradient(narrow) - std::conj(alpha) / 2.0 * (1.0 - w_top)) < 1e-14);

  // Wirtinger derivative from central differences along re and im.
  for (int n0 : {0, 2}) {
    const CpsBasis b(6, n0, 2.0);
    const double h = 1e-5;
    const auto lg = [&](cplx a) { return CpsBasis(6, n0, a).log_gq(); };
    const double dx = (lg(2.0 + h) - lg(2.0 - h)) / (2 * h);
    const double dy = (lg(cplx(2.0, h)) - lg(cplx(2.0, -h))) / (2 * h);
    const cplx fd = 0.5 * cplx(dx, -dy);
    CHECK(std::abs(log_norm_gradient(b) - fd) < 1e-8);
  }
}

TEST_CASE("total-number norms") {
  const std::vector<cplx> two{1.0, 1.0};
  CHECK(total_number_norm(two, {0, 0}) == doctest::Approx(1.0));
  CHECK(total_number_norm(two, {2, 2}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const std::vector<cplx> one{{1.5, 0.5}};
  CHECK(std::abs(total_number_norm(one, {0, 9}) / norm_gq_gamma({1.5, 0.5}, 9) - 1.0) < 1e-12);

  CHECK_THROWS_AS(total_number_norm(two, {0, -1}), Error);
  const std::vector<cplx> five(5, 1.0);
  CHECK_THROWS_AS(total_number_norm(five, {0, 2}), Error);
}

#include "cpskit/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include <Eigen/QR>

#include "cpskit/evolution.hpp"
#include "cpskit/fock_oracle.hpp"
#include "cpskit/linalg.hpp"
#include "cpskit/parallel.hpp"
#include "cpskit/special.hpp"

namespace cpskit::validation {

namespace {

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : seed_(seed) {}
  double normal() { return parallel::standard_normal(seed_, counter_++); }
  cplx complex_normal() {
    const double re = normal();
    return {re, normal()};
  }
  CVector vector(int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }
  CMatrix matrix(int r, int c) {
    CMatrix m(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) m(i, j) = complex_normal();
    return m;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

CMatrix haar_unitary(int m, Draws& draws) {
  const CMatrix z = draws.matrix(m, m);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

// Q O Q restricted to rows and columns n0..n_max of a full ladder matrix.
CMatrix block(const CMatrix& full, int n0, int d) { return full.block(n0, n0, d, d); }

double rel_diff(const CVector& a, const CVector& b) {
  return (a - b).norm() / std::max(1e-300, std::max(a.norm(), b.norm()));
}

double rel_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff() /
         std::max(1e-300, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
}

// max_n g_n / min_n g_n over the basis range
double spread(const CpsBasis& basis) {
  double lo = basis.log_gn(basis.n0());
  double hi = lo;
  for (int n = basis.n0(); n <= basis.n_max(); ++n) {
    lo = std::min(lo, basis.log_gn(n));
    hi = std::max(hi, basis.log_gn(n));
  }
  return std::exp(hi - lo);
}

struct Collector {
  std::string suite;
  std::vector<Check>& out;
  void add(const std::string& name, double residual, double tol) {
    out.push_back({suite, name, std::isfinite(residual) ? residual : 1e300, tol});
  }
};

void suite_basis(std::vector<Check>& out) {
  Collector c{"basis", out};
  c.add("qubit_orthogonality", std::abs(CpsBasis(2, 0, 1.0).gram()(0, 1)), 1e-12);
  c.add("gq_gamma_vs_direct",
        std::abs(norm_gq_gamma(2.0, 8) / norm_gq_direct(2.0, 0, 8) - 1.0), 1e-12);
  Draws draws(11);
  double roundtrip = 0.0;
  double fock_side = 0.0;
  double norms = 0.0;
  double gram = 0.0;
  for (int d : {2, 5, 8, 16, 32}) {
    for (cplx alpha : {cplx(0.1, 0.0), cplx(0.3, 0.0), cplx(2.0, 0.0), std::polar(4.0, kPi / 7.0),
                       cplx(8.0, 0.0)}) {
      for (int n0 : {0, 2}) {
        const CpsBasis basis(d, n0, alpha);
        const CpsState s{basis, draws.vector(d), Convention::Normalized};
        const CVector image = cps_to_fock(s);
        roundtrip = std::max(
            roundtrip, rel_diff(fock_to_cps(basis, image, Convention::Normalized).coeffs, s.coeffs));
        norms = std::max(norms, std::abs(s.physical_norm_sq() / image.squaredNorm() - 1.0));
        // The number-side trip loses digits in proportion to the spread of g_n.
        const CVector psi = draws.vector(d);
        const CVector back = cps_to_fock(fock_to_cps(basis, psi, Convention::Normalized));
        fock_side = std::max(fock_side, rel_diff(back, psi) / spread(basis));
        const CMatrix& m = basis.gram();
        gram = std::max({gram, linalg::hermitian_residual(m),
                         (m.diagonal().array() - 1.0).abs().maxCoeff()});
      }
    }
  }
  c.add("dft_roundtrip", roundtrip, 1e-12);
  c.add("dft_roundtrip_number_side_per_spread", fock_side, 1e-14);
  c.add("physical_norm_vs_fock", norms, 1e-12);
  c.add("gram_hermitian_unit_diagonal", gram, 1e-12);

  const CpsBasis b(6, 0, 2.0);
  const double h = 1e-5;
  const auto lg = [](cplx a) { return CpsBasis(6, 0, a).log_gq(); };
  const double dx = (lg(2.0 + h) - lg(2.0 - h)) / (2 * h);
  const double dy = (lg(cplx(2.0, h)) - lg(cplx(2.0, -h))) / (2 * h);
  c.add("log_norm_gradient_fd", std::abs(log_norm_gradient(b) - 0.5 * cplx(dx, -dy)), 1e-8);
}

void suite_operators(std::vector<Check>& out) {
  Collector c{"operators", out};
  Draws draws(23);
  double worst = 0.0;
  double action = 0.0;
  double circ = 0.0;
  double closed = 0.0;
  double adj = 0.0;
  for (int d : {3, 5, 8, 16}) {
    for (cplx alpha : {cplx(0.5, 0.0), cplx(2.0, 0.0), std::polar(4.0, kPi / 7.0)}) {
      for (int n0 : {0, 2}) {
        const CpsBasis basis(d, n0, alpha);
        const fock::LadderOps lad = fock::ladder_ops(basis.n_max() + 2);
        std::vector<std::pair<CpsOperatorMatrix, CMatrix>> cases;
        for (int k = 0; k <= 4; ++k) {
          CMatrix nk = CMatrix::Identity(d, d);
          for (int j = 0; j < k; ++j) nk = nk * block(lad.n.entries, n0, d);
          cases.emplace_back(op_number_power(basis, k), nk);
        }
        const CMatrix a = block(lad.a.entries, n0, d);
        const CMatrix ad = block(lad.a_dag.entries, n0, d);
        cases.emplace_back(op_from_fock_matrix(basis, a), a);
        cases.emplace_back(op_from_fock_matrix(basis, ad), ad);
        if (n0 == 0) {
          cases.emplace_back(op_annihilation(basis), a);
          cases.emplace_back(op_creation(basis), ad);
          const CMatrix n1 = block(lad.n.entries, 0, d);
          cases.emplace_back(op_shifted_quadratic(basis), n1 * n1 - basis.n_max() * n1);
        }
        for (const auto& [op, o_fock] : cases) {
          CMatrix conj(d, d);
          for (int q = 0; q < d; ++q) {
            const CVector image = o_fock * cps_to_fock(basis_member(basis, q));
            conj.col(q) = fock_to_cps(basis, image, Convention::Normalized).coeffs;
          }
          worst = std::max(worst, rel_diff(op.entries, conj));
          // In the number basis the residual grows with the spread of g_n.
          for (int trial = 0; trial < 4; ++trial) {
            const CpsState s{basis, draws.vector(d), Convention::Normalized};
            action = std::max(action, rel_diff(cps_to_fock(op.apply(s)),
                                               CVector(o_fock * cps_to_fock(s))) /
                                          spread(basis));
          }
        }
        for (int k = 0; k <= 4; ++k) {
          const CMatrix e = op_number_power(basis, k).entries;
          circ = std::max(circ, is_circulant(e, 1e-12 * std::max(1.0, linalg::max_abs(e))) ? 0.0 : 1.0);
        }
        if (n0 == 0) {
          const CMatrix n1 = op_number_power(basis, 1).entries;
          const CMatrix n2 = op_number_power(basis, 2).entries;
          const CMatrix sq = op_shifted_quadratic(basis).entries;
          for (int qp = 0; qp < d; ++qp) {
            for (int q = 0; q < d; ++q) {
              const cplx z = basis.root(q - qp);
              closed = std::max({closed, std::abs(number_power_closed_form(d, 1, z) - n1(qp, q)),
                                 std::abs(number_power_closed_form(d, 2, z) - n2(qp, q)) /
                                     std::max(1.0, std::abs(n2(qp, q))),
                                 std::abs(shifted_quadratic_closed_form(d, z) - sq(qp, q))});
            }
          }
          if (std::abs(alpha) >= 1.0 && d <= 8) {
            adj = std::max(adj, rel_diff(metric_adjoint(op_annihilation(basis)).entries,
                                         op_creation(basis).entries));
          }
        }
      }
    }
  }
  c.add("oracle_conjugation", worst, 1e-12);
  c.add("oracle_action_per_spread", action, 1e-14);
  c.add("number_diagonal_circulant", circ, 0.0);
  c.add("closed_forms_vs_direct", closed, 1e-11);
  c.add("creation_is_metric_adjoint", adj, 1e-9);
}

void suite_evolution(std::vector<Check>& out) {
  Collector c{"evolution", out};
  AnharmonicConfig cfg;
  cfg.steps = 200;
  const AnharmonicResult direct = run_anharmonic(cfg);
  cfg.picture = Picture::Hybrid;
  const AnharmonicResult hybrid = run_anharmonic(cfg);
  c.add("norm_drift_direct", direct.max_norm_drift, 1e-10);
  c.add("norm_drift_hybrid", hybrid.max_norm_drift, 1e-10);
  double pic = 0.0;
  for (std::size_t i = 0; i < direct.rows.size(); ++i) {
    pic = std::max(pic, std::abs(direct.rows[i].amplitude - hybrid.rows[i].amplitude));
  }
  c.add("picture_equivalence", pic, 1e-10);

  const CpsBasis basis(8, 0, 1.5);
  const fock::LindbladRates rates{0.5, 1.0, 0.05, 0.02};
  const fock::FockVector coh = fock::coherent_vector(1.5, 8, false);
  fock::FockDensity rho;
  rho.entries = coh.coeffs * coh.coeffs.adjoint() / coh.coeffs.squaredNorm();
  const CpsPFunction p0 = pfunc_from_rho(rho.entries, {basis});
  const CMatrix rho_cps = rho_from_pfunc(master_evolve_cps(p0, rates, 1.0, 4));
  const fock::FockDensity ref = fock::lindblad_evolve_exact(rho, rates, 1.0, 4);
  c.add("master_equation_vs_oracle", (rho_cps - ref.entries).cwiseAbs().maxCoeff(), 1e-8);
}

void suite_prep(std::vector<Check>& out) {
  Collector c{"prep", out};
  Draws draws(37);
  double round = 0.0;
  double moments = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int modes = 1 + trial % 2;
    const int d = modes == 1 ? 6 : 3;
    std::vector<CpsBasis> bases;
    for (int j = 0; j < modes; ++j) bases.emplace_back(d, 0, std::polar(1.2 + 0.2 * j, 0.3 * j));
    const int extent = fock_extent(bases);
    const CMatrix x = draws.matrix(extent, extent);
    CMatrix rho = x * x.adjoint();
    rho /= rho.trace();
    const CpsPFunction p = pfunc_from_rho(rho, bases);
    round = std::max(round, rel_diff(rho_from_pfunc(p), rho));
    if (modes == 1) {
      CMatrix n = CMatrix::Zero(extent, extent);
      for (int k = 0; k < extent; ++k) n(k, k) = k;
      moments = std::max(moments, std::abs(pfunc_moment(p, {{1}, {1}}) - (rho * n).trace()));
    }
  }
  c.add("pfunc_roundtrip", round, 1e-12);
  c.add("number_moment_vs_trace", moments, 1e-12);

  double perm = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix u = haar_unitary(4, draws);
    const std::vector<int> in{0, 1, 2};
    const std::vector<int> outm{1, 2, 3};
    const double v = boson_sampling_correlation(u, in, outm, {}).value;
    CMatrix sub(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) sub(j, i) = u(outm[j], in[i]);
    perm = std::max(perm, std::abs(v - std::norm(fock::permanent(sub))));
  }
  c.add("boson_sampling_vs_permanent", perm, 1e-10);
}

void suite_oracle(std::vector<Check>& out) {
  Collector c{"oracle", out};
  const fock::LadderOps lad = fock::ladder_ops(12);
  const CMatrix comm = lad.a.entries * lad.a_dag.entries - lad.a_dag.entries * lad.a.entries;
  c.add("truncated_commutator",
        (comm.topLeftCorner(11, 11) - CMatrix::Identity(11, 11)).cwiseAbs().maxCoeff(),
        4.0 * 12 * std::numeric_limits<double>::epsilon());
  Draws draws(41);
  const CMatrix x = draws.matrix(16, 16);
  fock::FockOperator h{(x + x.adjoint()) / 2.0};
  fock::FockVector psi{draws.vector(16)};
  c.add("evolve_norm", std::abs(fock::evolve_exact(psi, h, 3.0).norm() / psi.norm() - 1.0), 1e-12);
  const std::vector<double> grid = uniform_grid(-8.0, 8.0, 2001);
  fock::FockVector cat{fock::coherent_vector(2.0, 40, false).coeffs +
                       fock::coherent_vector(-2.0, 40, false).coeffs};
  cat.coeffs /= cat.coeffs.norm();
  const std::vector<double> dens = fock::quadrature_density(cat, grid);
  c.add("quadrature_normalization", std::abs(linalg::simpson(dens, grid[1] - grid[0]) - 1.0), 1e-6);
  const CMatrix ones = CMatrix::Ones(3, 3);
  c.add("permanent_all_ones", std::abs(fock::permanent(ones) - 6.0), 1e-12);
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

io::Json Report::to_json() const {
  io::Json list = io::Json::array();
  for (const Check& c : checks) {
    list.push_back({{"suite", c.suite},
                    {"name", c.name},
                    {"residual", c.residual},
                    {"tolerance", c.tolerance},
                    {"passed", c.passed()}});
  }
  return {{"passed", passed()}, {"checks", list}};
}

bool is_suite(const std::string& name) {
  return name == "basis" || name == "operators" || name == "evolution" || name == "prep" ||
         name == "oracle" || name == "all";
}

Report run(const std::string& suite) {
  require(is_suite(suite), ErrorCode::InvalidArgument, "validate: unknown suite '" + suite + "'");
  Report report;
  const bool all = suite == "all";
  if (all || suite == "oracle") suite_oracle(report.checks);
  if (all || suite == "basis") suite_basis(report.checks);
  if (all || suite == "operators") suite_operators(report.checks);
  if (all || suite == "evolution") suite_evolution(report.checks);
  if (all || suite == "prep") suite_prep(report.checks);
  return report;
}

}  // namespace cpskit::validation

#include "cpskit/prep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "cpskit/linalg.hpp"
#include "cpskit/parallel.hpp"
#include "cpskit/special.hpp"

namespace cpskit {

namespace {

constexpr std::size_t kConfigBlock = 256;

void check_modes(const std::vector<CpsBasis>& alpha_modes,
                 const std::vector<CpsBasis>& beta_conj_modes) {
  require(!alpha_modes.empty(), ErrorCode::InvalidArgument, "pfunc: no modes given");
  require(static_cast<int>(alpha_modes.size()) <= kMaxPfuncModes,
          ErrorCode::InvalidArgument,
          "pfunc: at most " + std::to_string(kMaxPfuncModes) + " modes at full density");
  require(alpha_modes.size() == beta_conj_modes.size(), ErrorCode::DimensionMismatch,
          "pfunc: alpha and beta mode counts differ");
  for (std::size_t j = 0; j < alpha_modes.size(); ++j) {
    require(alpha_modes[j].dim() == beta_conj_modes[j].dim() &&
                alpha_modes[j].n0() == beta_conj_modes[j].n0(),
            ErrorCode::DimensionMismatch, "pfunc: alpha and beta bases differ in range");
  }
}

// L[q, n] = sqrt(n!) / (d amp_q^n) for n in [n0, n_max], zero below n0.
CMatrix forward_map(const CpsBasis& basis) {
  const int d = basis.dim();
  const double lr = std::log(basis.radius());
  const double arg = std::arg(basis.alpha());
  CMatrix l = CMatrix::Zero(d, basis.n_max() + 1);
  for (int q = 0; q < d; ++q) {
    for (int n = basis.n0(); n <= basis.n_max(); ++n) {
      const double mag = std::exp(0.5 * special::log_factorial(n) - n * lr) / d;
      l(q, n) = mag * std::polar(1.0, -n * arg) * std::conj(basis.root(static_cast<long>(q) * n));
    }
  }
  return l;
}

// R[n, q] = amp_q^n / sqrt(n!)
CMatrix inverse_map(const CpsBasis& basis) {
  const int d = basis.dim();
  const double lr = std::log(basis.radius());
  const double arg = std::arg(basis.alpha());
  CMatrix r = CMatrix::Zero(basis.n_max() + 1, d);
  for (int n = basis.n0(); n <= basis.n_max(); ++n) {
    const double mag = std::exp(n * lr - 0.5 * special::log_factorial(n));
    for (int q = 0; q < d; ++q) {
      r(n, q) = mag * std::polar(1.0, n * arg) * basis.root(static_cast<long>(q) * n);
    }
  }
  return r;
}

CMatrix kron_all(const std::vector<CMatrix>& factors) {
  CMatrix out = factors.front();
  for (std::size_t j = 1; j < factors.size(); ++j) out = linalg::kron(out, factors[j]);
  return out;
}

// Per-mode digits of a kron index, mode 0 most significant.
std::vector<int> digits(long index, std::span<const int> extents) {
  std::vector<int> out(extents.size());
  for (std::size_t j = extents.size(); j-- > 0;) {
    out[j] = static_cast<int>(index % extents[j]);
    index /= extents[j];
  }
  return out;
}

// <beta^*|_Q a^dag^m a^n |alpha>_Q for one mode.
cplx pair_moment(cplx alpha, cplx beta, int m, int n, int n0, int n_max) {
  const cplx x = alpha * beta;
  const int lo = std::max(0, n0 - std::min(m, n));
  const int hi = n_max - std::max(m, n);
  cplx sum = 0.0;
  cplx term = 1.0;  // x^j / j!
  for (int j = 0; j <= hi; ++j) {
    if (j > 0) term *= x / static_cast<double>(j);
    if (j >= lo && j + m >= n0 && j + n >= n0) sum += term;
  }
  return std::pow(beta, m) * std::pow(alpha, n) * sum;
}

}  // namespace

cplx beta_amplitude(const CpsBasis& beta_conj, int q) {
  return std::conj(beta_conj.amplitude(q));
}

int fock_extent(std::span<const CpsBasis> modes) {
  long total = 1;
  for (const CpsBasis& b : modes) total *= b.n_max() + 1;
  return static_cast<int>(total);
}

CpsPFunction pfunc_from_rho(const CMatrix& rho, std::vector<CpsBasis> alpha_modes,
                            std::optional<std::vector<CpsBasis>> beta_conj_modes) {
  std::vector<CpsBasis> beta = beta_conj_modes ? std::move(*beta_conj_modes) : alpha_modes;
  check_modes(alpha_modes, beta);
  const int extent = fock_extent(alpha_modes);
  require(rho.rows() == extent && rho.cols() == extent, ErrorCode::DimensionMismatch,
          "pfunc_from_rho: density must cover n = 0..n_max on every mode");

  std::vector<int> extents;
  for (const CpsBasis& b : alpha_modes) extents.push_back(b.n_max() + 1);
  const double scale = std::max(1.0, linalg::max_abs(rho));
  for (long i = 0; i < extent; ++i) {
    const std::vector<int> occ = digits(i, extents);
    bool outside = false;
    for (std::size_t j = 0; j < occ.size(); ++j) outside |= occ[j] < alpha_modes[j].n0();
    if (!outside) continue;
    require(rho.row(i).cwiseAbs().maxCoeff() <= 1e-14 * scale &&
                rho.col(i).cwiseAbs().maxCoeff() <= 1e-14 * scale,
            ErrorCode::InvalidArgument, "pfunc_from_rho: density has support below n0");
  }

  std::vector<CMatrix> la;
  std::vector<CMatrix> lb;
  for (std::size_t j = 0; j < alpha_modes.size(); ++j) {
    la.push_back(forward_map(alpha_modes[j]));
    lb.push_back(forward_map(beta[j]).conjugate());
  }
  CpsPFunction out;
  out.coeffs = kron_all(la) * rho * kron_all(lb).transpose();
  out.alpha_modes = std::move(alpha_modes);
  out.beta_conj_modes = std::move(beta);
  out.convention = Convention::Unnormalized;
  return out;
}

CMatrix rho_from_pfunc(const CpsPFunction& pfunc) {
  check_modes(pfunc.alpha_modes, pfunc.beta_conj_modes);
  const CpsPFunction p = to_unnormalized(pfunc);
  std::vector<CMatrix> ra;
  std::vector<CMatrix> rb;
  for (int j = 0; j < p.modes(); ++j) {
    ra.push_back(inverse_map(p.alpha_modes[static_cast<std::size_t>(j)]));
    rb.push_back(inverse_map(p.beta_conj_modes[static_cast<std::size_t>(j)]).conjugate());
  }
  return kron_all(ra) * p.coeffs * kron_all(rb).transpose();
}

CMatrix pair_normalization(const CpsBasis& alpha_basis, const CpsBasis& beta_conj_basis) {
  require(alpha_basis.dim() == beta_conj_basis.dim() &&
              alpha_basis.n0() == beta_conj_basis.n0(),
          ErrorCode::DimensionMismatch, "pair_normalization: bases differ in range");
  const int d = alpha_basis.dim();
  CMatrix g(d, d);
  for (int q = 0; q < d; ++q) {
    for (int qp = 0; qp < d; ++qp) {
      g(q, qp) = pair_moment(alpha_basis.amplitude(q), beta_amplitude(beta_conj_basis, qp), 0,
                             0, alpha_basis.n0(), alpha_basis.n_max());
    }
  }
  return g;
}

CMatrix pair_normalization(const CpsPFunction& pfunc) {
  std::vector<CMatrix> factors;
  for (int j = 0; j < pfunc.modes(); ++j) {
    factors.push_back(pair_normalization(pfunc.alpha_modes[static_cast<std::size_t>(j)],
                                         pfunc.beta_conj_modes[static_cast<std::size_t>(j)]));
  }
  return kron_all(factors);
}

CpsPFunction to_normalized(const CpsPFunction& pfunc) {
  if (pfunc.convention == Convention::Normalized) return pfunc;
  CpsPFunction out = pfunc;
  out.coeffs = pfunc.coeffs.cwiseProduct(pair_normalization(pfunc));
  out.convention = Convention::Normalized;
  return out;
}

CpsPFunction to_unnormalized(const CpsPFunction& pfunc) {
  if (pfunc.convention == Convention::Unnormalized) return pfunc;
  CpsPFunction out = pfunc;
  out.coeffs = pfunc.coeffs.cwiseQuotient(pair_normalization(pfunc));
  out.convention = Convention::Unnormalized;
  return out;
}

CpsPFunction pfunc_reexpand(cplx alpha_tilde, cplx beta_tilde, const CpsBasis& alpha_basis,
                            const CpsBasis& beta_conj_basis) {
  require(alpha_basis.n0() == 0 && beta_conj_basis.n0() == 0, ErrorCode::Unsupported,
          "pfunc_reexpand: target bases must have n0 = 0");
  require(alpha_basis.dim() == beta_conj_basis.dim(), ErrorCode::DimensionMismatch,
          "pfunc_reexpand: bases differ in size");
  const int d = alpha_basis.dim();
  CVector za(d);
  CVector zb(d);
  for (int q = 0; q < d; ++q) {
    za(q) = geometric_mean_sum(alpha_tilde / alpha_basis.amplitude(q), d);
    zb(q) = geometric_mean_sum(beta_tilde / beta_amplitude(beta_conj_basis, q), d);
  }
  CpsPFunction out;
  out.alpha_modes = {alpha_basis};
  out.beta_conj_modes = {beta_conj_basis};
  out.coeffs = za * zb.transpose();
  out.convention = Convention::Unnormalized;
  return out;
}

cplx pfunc_moment(const CpsPFunction& pfunc, const NormalOrderedMoment& moment) {
  const int modes = pfunc.modes();
  require(static_cast<int>(moment.creators.size()) == modes &&
              static_cast<int>(moment.annihilators.size()) == modes,
          ErrorCode::DimensionMismatch, "pfunc_moment: mode count mismatch");
  std::vector<int> extents;
  std::vector<CMatrix> factors;
  for (int j = 0; j < modes; ++j) {
    const CpsBasis& a = pfunc.alpha_modes[static_cast<std::size_t>(j)];
    const CpsBasis& b = pfunc.beta_conj_modes[static_cast<std::size_t>(j)];
    const int m = moment.creators[static_cast<std::size_t>(j)];
    const int n = moment.annihilators[static_cast<std::size_t>(j)];
    require(m >= 0 && n >= 0, ErrorCode::InvalidArgument, "pfunc_moment: negative order");
    extents.push_back(a.dim());
    CMatrix f(a.dim(), a.dim());
    CMatrix g(a.dim(), a.dim());
    for (int q = 0; q < a.dim(); ++q) {
      for (int qp = 0; qp < a.dim(); ++qp) {
        const cplx al = a.amplitude(q);
        const cplx be = beta_amplitude(b, qp);
        f(q, qp) = pair_moment(al, be, m, n, a.n0(), a.n_max());
        g(q, qp) = pair_moment(al, be, 0, 0, a.n0(), a.n_max());
      }
    }
    factors.push_back(pfunc.convention == Convention::Normalized ? CMatrix(f.cwiseQuotient(g))
                                                                 : f);
  }
  const CMatrix weight = kron_all(factors);
  require(weight.rows() == pfunc.coeffs.rows() && weight.cols() == pfunc.coeffs.cols(),
          ErrorCode::DimensionMismatch, "pfunc_moment: coefficient shape mismatch");
  std::vector<cplx> terms(static_cast<std::size_t>(weight.size()));
  for (Eigen::Index i = 0; i < weight.size(); ++i) {
    terms[static_cast<std::size_t>(i)] = pfunc.coeffs.data()[i] * weight.data()[i];
  }
  return linalg::pairwise_sum(terms);
}

cplx number_weight_a(cplx alpha, cplx beta, int n0, int n_max) {
  return pair_moment(alpha, beta, 1, 1, n0, n_max) / pair_moment(alpha, beta, 0, 0, n0, n_max);
}

cplx number_moment_normalized(const CpsPFunction& pfunc) {
  require(pfunc.modes() == 1, ErrorCode::Unsupported,
          "number_moment_normalized: single mode only");
  const CpsPFunction big_p = to_normalized(pfunc);
  const CpsBasis& a = big_p.alpha_modes[0];
  const CpsBasis& b = big_p.beta_conj_modes[0];
  cplx sum = 0.0;
  for (int q = 0; q < a.dim(); ++q) {
    for (int qp = 0; qp < a.dim(); ++qp) {
      sum += big_p.coeffs(q, qp) *
             number_weight_a(a.amplitude(q), beta_amplitude(b, qp), a.n0(), a.n_max());
    }
  }
  return sum;
}

std::string method_name(SamplingMethod method) {
  return method == SamplingMethod::Exact ? "exact" : "mc";
}

namespace {

// Per configuration s in {+1,-1}^N (bit i set means s_i = -1):
//   A(s) = prod_i s_i prod_{j in outputs} sum_i U_{j, in_i} s_i.
// The beta side uses U^* and the same signs, so B(s) = conj(A(s)).
std::vector<cplx> configuration_products(const CMatrix& u, std::span<const int> inputs,
                                         std::span<const int> outputs) {
  const auto n = inputs.size();
  const std::size_t configs = std::size_t{1} << n;
  std::vector<cplx> out(configs);
  for (std::size_t s = 0; s < configs; ++s) {
    cplx prod = 1.0;
    double sign = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((s >> i) & 1U) sign = -sign;
    }
    for (const int j : outputs) {
      cplx amp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double si = ((s >> i) & 1U) ? -1.0 : 1.0;
        amp += u(j, inputs[i]) * si;
      }
      prod *= amp;
    }
    out[s] = sign * prod;
  }
  return out;
}

}  // namespace

BosonSamplingResult boson_sampling_correlation(const CMatrix& unitary,
                                               std::span<const int> inputs,
                                               std::span<const int> outputs,
                                               const BosonSamplingOptions& options) {
  const auto m = unitary.rows();
  require(m >= 1 && unitary.cols() == m, ErrorCode::DimensionMismatch,
          "boson_sampling: unitary must be square");
  const double residual = linalg::unitary_residual(unitary);
  if (!(residual <= 1e-10)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "boson_sampling: matrix is not unitary (residual %.3g)",
                  residual);
    throw Error(ErrorCode::NotUnitary, buf);
  }
  require(!inputs.empty() && inputs.size() == outputs.size(), ErrorCode::InvalidArgument,
          "boson_sampling: need equal, non-empty input and output sets");
  const auto check_set = [m](std::span<const int> set, const char* what) {
    std::set<int> seen;
    for (const int x : set) {
      require(x >= 0 && x < m, ErrorCode::InvalidArgument,
              std::string("boson_sampling: ") + what + " mode out of range");
      require(seen.insert(x).second, ErrorCode::InvalidArgument,
              std::string("boson_sampling: duplicate ") + what + " mode");
    }
  };
  check_set(inputs, "input");
  check_set(outputs, "output");
  require(options.radius > 0.0 && std::isfinite(options.radius), ErrorCode::InvalidArgument,
          "boson_sampling: radius must be positive");
  const int photons = static_cast<int>(inputs.size());

  // Each single-photon P-function carries r^{-2}; each output moment carries
  // (r s)(r s'), i.e. r^{+2}. The exponents are tracked and must cancel, so
  // the numeric value never depends on r.
  const int r_power = -2 * photons + 2 * static_cast<int>(outputs.size());
  require(r_power == 0, ErrorCode::InvalidArgument, "boson_sampling: radius does not cancel");

  const std::vector<cplx> a = configuration_products(unitary, inputs, outputs);
  const double norm = std::ldexp(1.0, -2 * photons);  // 1/4^N

  BosonSamplingResult result;
  result.method = options.method;
  result.seed = options.seed;
  if (options.method == SamplingMethod::Exact) {
    require(photons <= kMaxExactPhotons, ErrorCode::InvalidArgument,
            "boson_sampling: exact mode limited to N <= " + std::to_string(kMaxExactPhotons));
    const std::size_t configs = a.size();
    std::vector<cplx> partial(parallel::chunk_count(configs, kConfigBlock));
    parallel::for_chunks(configs, kConfigBlock,
                         [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                           std::vector<cplx> row(configs);
                           std::vector<cplx> outer(end - begin);
                           for (std::size_t s = begin; s < end; ++s) {
                             for (std::size_t sp = 0; sp < configs; ++sp) {
                               row[sp] = a[s] * std::conj(a[sp]);
                             }
                             outer[s - begin] = linalg::pairwise_sum(row);
                           }
                           partial[chunk] = linalg::pairwise_sum(outer);
                         });
    result.value = (linalg::pairwise_sum(partial) * norm).real();
    result.samples = static_cast<std::uint64_t>(configs) * configs;
    return result;
  }

  require(options.samples >= 2, ErrorCode::InvalidArgument,
          "boson_sampling: Monte Carlo needs at least 2 samples");
  require(photons <= 32, ErrorCode::InvalidArgument,
          "boson_sampling: Monte Carlo limited to N <= 32");
  const std::uint64_t mask = (std::uint64_t{1} << photons) - 1;
  const std::size_t blocks = parallel::chunk_count(options.samples, kConfigBlock);
  std::vector<double> sums(blocks);
  std::vector<double> squares(blocks);
  parallel::for_chunks(options.samples, kConfigBlock,
                       [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                         std::vector<double> xs(end - begin);
                         std::vector<double> x2(end - begin);
                         for (std::size_t i = begin; i < end; ++i) {
                           const std::uint64_t bits = parallel::random_bits(options.seed, i, 0);
                           const std::uint64_t s = bits & mask;
                           const std::uint64_t sp = (bits >> 32) & mask;
                           const double x = (a[s] * std::conj(a[sp])).real();
                           xs[i - begin] = x;
                           x2[i - begin] = x * x;
                         }
                         sums[chunk] = linalg::pairwise_sum(xs);
                         squares[chunk] = linalg::pairwise_sum(x2);
                       });
  const double n = static_cast<double>(options.samples);
  const double mean = linalg::pairwise_sum(sums) / n;
  const double var = std::max(0.0, (linalg::pairwise_sum(squares) / n - mean * mean) * n / (n - 1.0));
  // Uniform sampling of (s, s') estimates the average over 4^N terms, which
  // already includes the 1/4^N factor.
  result.value = mean;
  result.stderr_value = std::sqrt(var / n);
  result.samples = options.samples;
  return result;
}

}  // namespace cpskit

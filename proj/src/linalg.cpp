#include "cpskit/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cpskit::linalg {

namespace {

// Pade coefficients b_0..b_m for the [m/m] approximant of exp.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {64764752532480000.0,
                                            32382376266240000.0,
                                            7771770303897600.0,
                                            1187353796428800.0,
                                            129060195264000.0,
                                            10559470521600.0,
                                            670442572800.0,
                                            33522128640.0,
                                            1323241920.0,
                                            40840800.0,
                                            960960.0,
                                            16380.0,
                                            182.0,
                                            1.0};

// Upper 1-norm bounds for which each degree reaches unit roundoff.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double norm1(const CMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <std::size_t N>
CMatrix pade_low(const CMatrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix u = b[1] * ident;
  CMatrix v = b[0] * ident;
  CMatrix power = ident;
  for (std::size_t k = 2; k + 1 < N; k += 2) {
    power = power * a2;
    v += b[k] * power;
    u += b[k + 1] * power;
  }
  u = a * u;
  return (v - u).partialPivLu().solve(v + u);
}

CMatrix pade13(const CMatrix& a) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                          b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const CMatrix u = a * u_inner;
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                    b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch,
          "expm: matrix must be square");
  if (a.rows() == 0) return a;
  const double norm = norm1(a);
  require(std::isfinite(norm), ErrorCode::InvalidArgument,
          "expm: non-finite matrix entries");
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);

  int squarings = 0;
  if (norm > kTheta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  }
  CMatrix result = pade13(a / std::ldexp(1.0, squarings));
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermitian_residual(const CMatrix& a) {
  return max_abs(a - a.adjoint());
}

double unitary_residual(const CMatrix& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

template <typename T>
T pairwise(std::span<const T> v) {
  constexpr std::size_t kLeaf = 8;
  if (v.size() <= kLeaf) {
    T acc{};
    for (const T& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise(values);
}

cplx pairwise_sum(std::span<const cplx> values) { return pairwise(values); }

double simpson(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  std::size_t intervals = n - 1;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    tail = 0.5 * h * (y[n - 2] + y[n - 1]);
    --intervals;
  }
  if (intervals == 0) return tail;
  double acc = y[0] + y[intervals];
  for (std::size_t i = 1; i < intervals; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
  }
  return acc * h / 3.0 + tail;
}

}  // namespace cpskit::linalg

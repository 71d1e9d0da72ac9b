#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cpskit {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  NotHermitian = 3,
  NotUnitary = 4,
  Unsupported = 5,
  Io = 6,
};

// All precondition failures in the core are reported through this type; the
// C API maps `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

// Expansion-coefficient convention for states and P-functions.
//   Unnormalized: coefficients multiply the unnormalized projected states.
//   Normalized:   coefficients multiply states normalized by g_Q (or G).
enum class Convention { Normalized, Unnormalized };

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace cpskit

#pragma once

// Projected operators as d x d matrices acting on CPS expansion coefficients:
// if |psi> = sum_q Psi_q |alpha^(q)>, then O|psi> = sum_q' (O Psi)_q' |alpha^(q')>.

#include <functional>
#include <string>

#include "cpskit/cps_basis.hpp"

namespace cpskit {

struct CpsOperatorMatrix {
  CpsBasis basis;
  CMatrix entries;  // O_{q'q}: row q', column q
  std::string label;

  CpsState apply(const CpsState& state) const;
};

/// Generic constructor from the number-basis matrix <n'|O|n> over n0..n_max:
///   O_{q'q} = (1/d) sum_{n,n'} S_{n'n} e^{i(qn - q'n')phi},
///   S_{n'n} = <n'|O|n> alpha^{n-n'} sqrt(n'!/n!).
CpsOperatorMatrix op_from_fock_matrix(const CpsBasis& basis, const CMatrix& o_fock,
                                      std::string label = "generic");

/// Operators diagonal in n: circulant O_{q'q} = (1/d) sum_n f(n) z^n with
/// z = e^{i(q-q')phi}.
CpsOperatorMatrix op_number_function(const CpsBasis& basis,
                                     const std::function<double(int)>& f,
                                     std::string label);

/// n^k for 0 <= k <= 8, by direct summation.
CpsOperatorMatrix op_number_power(const CpsBasis& basis, int k);

/// n^2 - n_max n (n0 = 0).
CpsOperatorMatrix op_shifted_quadratic(const CpsBasis& basis);

/// a with n0 = 0: O_{q'q} = alpha^(q) delta_{qq'} - alpha^(q')/d.
CpsOperatorMatrix op_annihilation(const CpsBasis& basis);

/// a^dag with n0 = 0: O_{q'q} = O^[1]_{q'q} / alpha^(q).
CpsOperatorMatrix op_creation(const CpsBasis& basis);

/// omega O^[1] + (kappa/2) O^[2]
CpsOperatorMatrix assemble_hamiltonian(const CpsBasis& basis, double omega,
                                       double kappa);

/// Adjoint with respect to the Gram metric: M^{-1} O^H M.
CpsOperatorMatrix metric_adjoint(const CpsOperatorMatrix& op);

/// Psi^H M O Psi / Psi^H M Psi
cplx expectation(const CpsState& state, const CpsOperatorMatrix& op);

// Closed-form geometric sums for n0 = 0, as functions of z.
// k = 1: (z - z^d [d - z(d-1)]) / (d (1-z)^2), (d-1)/2 at z = 1
// k = 2: (z + z^2 - z^d [d - z(d-1)]^2 - z^{d+1}) / (d (1-z)^3),
//        (d-1)(2d-1)/6 at z = 1
cplx number_power_closed_form(int d, int k, cplx z);
// n^2 - n_max n:
//   z (z^d (d-2) - d (z^{d-1} - z + 1) + 2) / (d (1-z)^3),
//   (d-1)(2-d)/6 at z = 1
cplx shifted_quadratic_closed_form(int d, cplx z);

/// True if O_{q'q} depends only on (q - q') mod d within tol.
bool is_circulant(const CMatrix& entries, double tol);

}  // namespace cpskit

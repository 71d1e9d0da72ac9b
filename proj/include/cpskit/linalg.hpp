#pragma once

#include <span>

#include "cpskit/types.hpp"

namespace cpskit::linalg {

/// Matrix exponential by scaling and squaring with a degree-13 (or lower)
/// Pade approximant, selected from the 1-norm of the argument.
CMatrix expm(const CMatrix& a);

double max_abs(const CMatrix& a);

/// max |A - A^H|
double hermitian_residual(const CMatrix& a);

/// max |U^H U - I|
double unitary_residual(const CMatrix& u);

/// Row-major Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Order-independent summation. The pairwise split depends only on the length,
// so results do not change with how the inputs were produced.
double pairwise_sum(std::span<const double> values);
cplx pairwise_sum(std::span<const cplx> values);

/// Composite Simpson rule on a uniform grid. An even number of intervals is
/// required; with an odd count the final interval uses the trapezoid rule.
double simpson(std::span<const double> y, double h);

}  // namespace cpskit::linalg

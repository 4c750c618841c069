#pragma once

#include "pocs/errors.hpp"
#include "pocs/types.hpp"

namespace pocs {

// Dense kernels with explicit dimension checks. Thin wrappers over Eigen;
// every caller goes through these so conformance errors surface as
// DimensionMismatch instead of undefined behaviour.

RealVector matvec(const RealMatrix& A, const RealVector& v);
ComplexVector matvec(const ComplexMatrix& A, const ComplexVector& v);
ComplexVector matvec(const ComplexMatrix& A, const RealVector& v);

/// w -> A^T w (real) or A^H w (complex).
RealVector adjoint_matvec(const RealMatrix& A, const RealVector& w);
ComplexVector adjoint_matvec(const ComplexMatrix& A, const ComplexVector& w);

double norm_l1(const RealVector& v);
/// Sum of entry moduli.
double norm_l1(const ComplexVector& v);
double norm_l2(const RealVector& v);
double norm_l2(const ComplexVector& v);

double inner_product(const RealVector& u, const RealVector& w);
/// Conjugate-linear in the first argument: <u, w> = u^H w.
Complex inner_product(const ComplexVector& u, const ComplexVector& w);

bool all_finite(const RealMatrix& A);
bool all_finite(const ComplexMatrix& A);
bool all_finite(const RealVector& v);
bool all_finite(const ComplexVector& v);

}  // namespace pocs

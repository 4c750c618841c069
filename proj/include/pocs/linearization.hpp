#pragma once

#include "pocs/sensing.hpp"
#include "pocs/types.hpp"

namespace pocs {

// Recasts the phase-only model as a linear one. For a phase vector z and the
// ensemble's scaled matrix A, the stacked operator
//
//   A_z = [ Re(alpha_z)^T ]            alpha_z = A^H z / (kappa sqrt(m))
//         [ Im(alpha_z)^T ]            H_z     = Re(D_z) A^Im - Im(D_z) A^Re
//         [     H_z       ]
//
// sends the normalized signal x* to e_1 whenever z = sign_c(A x*), so the
// direction can be recovered by basis pursuit against the constraint
// A_z u = e_1.

/// x rescaled so that ||A x*||_1 = kappa sqrt(m); the recoverable
/// representative of the signal's direction.
struct NormalizedSignal {
  RealVector xstar;
  double scale_applied = 1.0;
};

/// The (m+2) x n stacked operator, with the phase vector it was built from.
struct LinearizedOperator {
  RealMatrix matrix;
  ComplexVector z;
  Index m = 0;
  Index n = 0;
};

/// Diagnostics for the exact phase-consistency system. The positivity
/// constraint is not enforced during recovery; it is only counted here.
struct ConsistencyReport {
  bool consistent = false;
  Index positivity_violations = 0;
  double h_inf = 0.0;
  double alpha_re_err = 0.0;
  double alpha_im_err = 0.0;
};

NormalizedSignal normalize_signal(const SensingEnsemble& ens, const RealVector& x);

/// alpha_z = A^H z / (kappa sqrt(m)), a length-n complex vector.
ComplexVector build_alpha(const SensingEnsemble& ens, const ComplexVector& z);

/// H_z = Re(D_z) A^Im - Im(D_z) A^Re, an m x n real matrix.
RealMatrix build_H(const SensingEnsemble& ens, const ComplexVector& z);

LinearizedOperator build_Az(const SensingEnsemble& ens, const ComplexVector& z);

/// Checks H_z u ~ 0, <Re alpha, u> ~ 1, <Im alpha, u> ~ 0 at tolerance tol and
/// counts non-positive entries of (Re(D_z) A^Re + Im(D_z) A^Im) u.
ConsistencyReport phase_consistency_check(const SensingEnsemble& ens, const ComplexVector& z,
                                          const RealVector& u, double tol);

/// Fidelity radius sqrt(2) tau (1+delta)/(1-delta) for phase noise bounded by tau.
double epsilon_bound(double tau, double delta);

}  // namespace pocs

#include "pocs/linearization.hpp"

#include <cmath>
#include <string>

#include "pocs/linalg.hpp"

namespace pocs {

namespace {

void check_phase_length(const SensingEnsemble& ens, const ComplexVector& z, const char* op) {
  if (z.size() != ens.m()) {
    throw DimensionMismatch(std::string(op) + ": phase vector length " + std::to_string(z.size()) +
                            " != m = " + std::to_string(ens.m()));
  }
}

}  // namespace

NormalizedSignal normalize_signal(const SensingEnsemble& ens, const RealVector& x) {
  if (x.size() != ens.n()) {
    throw DimensionMismatch("normalize_signal: signal length " + std::to_string(x.size()) +
                            " != n = " + std::to_string(ens.n()));
  }
  if (x.isZero(0.0)) throw DegenerateInput("normalize_signal: zero signal");
  const double l1 = norm_l1(matvec(ens.matrix(), x));
  if (!(l1 > 0.0)) throw DegenerateInput("normalize_signal: ||A x||_1 = 0");
  const double scale = kKappa * std::sqrt(static_cast<double>(ens.m())) / l1;
  return NormalizedSignal{scale * x, scale};
}

ComplexVector build_alpha(const SensingEnsemble& ens, const ComplexVector& z) {
  check_phase_length(ens, z, "build_alpha");
  const double denom = kKappa * std::sqrt(static_cast<double>(ens.m()));
  return adjoint_matvec(ens.matrix(), z) / denom;
}

RealMatrix build_H(const SensingEnsemble& ens, const ComplexVector& z) {
  check_phase_length(ens, z, "build_H");
  const ComplexMatrix& A = ens.matrix();
  return z.real().asDiagonal() * A.imag() - z.imag().asDiagonal() * A.real();
}

LinearizedOperator build_Az(const SensingEnsemble& ens, const ComplexVector& z) {
  check_phase_length(ens, z, "build_Az");
  const Index m = ens.m();
  const Index n = ens.n();
  const ComplexVector alpha = build_alpha(ens, z);
  LinearizedOperator op;
  op.matrix.resize(m + 2, n);
  op.matrix.row(0) = alpha.real().transpose();
  op.matrix.row(1) = alpha.imag().transpose();
  op.matrix.bottomRows(m) = build_H(ens, z);
  op.z = z;
  op.m = m;
  op.n = n;
  return op;
}

ConsistencyReport phase_consistency_check(const SensingEnsemble& ens, const ComplexVector& z,
                                          const RealVector& u, double tol) {
  check_phase_length(ens, z, "phase_consistency_check");
  if (u.size() != ens.n()) {
    throw DimensionMismatch("phase_consistency_check: estimate length " +
                            std::to_string(u.size()) + " != n = " + std::to_string(ens.n()));
  }
  if (!(tol > 0.0)) throw InvalidParameter("phase_consistency_check: tol must be > 0");

  const ComplexVector alpha = build_alpha(ens, z);
  const RealVector hu = matvec(build_H(ens, z), u);

  ConsistencyReport report;
  report.h_inf = hu.size() > 0 ? hu.cwiseAbs().maxCoeff() : 0.0;
  report.alpha_re_err = std::abs(inner_product(RealVector(alpha.real()), u) - 1.0);
  report.alpha_im_err = std::abs(inner_product(RealVector(alpha.imag()), u));
  report.consistent =
      report.h_inf <= tol && report.alpha_re_err <= tol && report.alpha_im_err <= tol;

  // Positivity rows: Re(conj(z_k) (A u)_k) must be strictly positive.
  const ComplexMatrix& A = ens.matrix();
  const RealVector positivity =
      z.real().asDiagonal() * (A.real() * u) + z.imag().asDiagonal() * (A.imag() * u);
  report.positivity_violations = (positivity.array() <= 0.0).count();
  return report;
}

double epsilon_bound(double tau, double delta) {
  if (tau < 0.0) throw InvalidParameter("epsilon_bound: tau must be >= 0");
  if (delta < 0.0 || delta >= 1.0) {
    throw InvalidParameter("epsilon_bound: delta must lie in [0, 1)");
  }
  return std::sqrt(2.0) * tau * (1.0 + delta) / (1.0 - delta);
}

}  // namespace pocs

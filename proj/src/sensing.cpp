#include "pocs/sensing.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace pocs {

SensingEnsemble::SensingEnsemble(ComplexMatrix raw, Scaling scaling, std::uint64_t master_seed,
                                 std::uint64_t stream_id)
    : raw_(std::move(raw)), scaling_(scaling), master_seed_(master_seed), stream_id_(stream_id) {
  if (raw_.rows() < 1 || raw_.cols() < 1) {
    throw InvalidParameter("SensingEnsemble: empty matrix");
  }
  if (!all_finite(raw_)) {
    throw InvalidParameter("SensingEnsemble: raw matrix has non-finite entries");
  }
  scaled_ = raw_ * scale_factor(scaling_, raw_.rows());
}

SensingEnsemble SensingEnsemble::sample(RngStream& rng, Index m, Index n, Scaling scaling) {
  ComplexMatrix phi = sample_complex_gaussian(rng, m, n);
  return SensingEnsemble(std::move(phi), scaling, rng.master_seed(), rng.stream_id());
}

ComplexMatrix SensingEnsemble::matrix_as(Scaling scaling) const {
  if (scaling == scaling_) return scaled_;
  return raw_ * scale_factor(scaling, raw_.rows());
}

double SensingEnsemble::scale_factor(Scaling scaling, Index m) {
  const double denom = (scaling == Scaling::OverSqrtM) ? static_cast<double>(m)
                                                       : 2.0 * static_cast<double>(m);
  return 1.0 / std::sqrt(denom);
}

Complex sign_c(Complex value) {
  const double modulus = std::abs(value);
  if (modulus == 0.0) return Complex(0.0, 0.0);
  return value / modulus;
}

ComplexVector sign_c(const ComplexVector& v) {
  ComplexVector out(v.size());
  for (Index k = 0; k < v.size(); ++k) out[k] = sign_c(v[k]);
  return out;
}

ComplexVector measure_linear(const SensingEnsemble& ens, const RealVector& x,
                             const ComplexVector& noise) {
  if (noise.size() != ens.m()) {
    throw DimensionMismatch("measure_linear: noise length " + std::to_string(noise.size()) +
                            " != m = " + std::to_string(ens.m()));
  }
  return matvec(ens.matrix(), x) + noise;
}

ComplexVector measure_phase_only(const SensingEnsemble& ens, const RealVector& x,
                                 const ComplexVector& noise) {
  if (noise.size() != ens.m()) {
    throw DimensionMismatch("measure_phase_only: noise length " + std::to_string(noise.size()) +
                            " != m = " + std::to_string(ens.m()));
  }
  return sign_c(matvec(ens.matrix(), x)) + noise;
}

ComplexVector sample_disk_noise(RngStream& rng, Index m, double tau) {
  if (tau < 0.0) throw InvalidParameter("sample_disk_noise: tau must be >= 0");
  ComplexVector out(m);
  for (Index k = 0; k < m; ++k) {
    const double radius = tau * std::sqrt(rng.uniform());
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    out[k] = Complex(radius * std::cos(angle), radius * std::sin(angle));
    const double modulus = std::abs(out[k]);
    if (modulus > tau) out[k] *= tau / modulus;  // rounding can spill past the rim by an ulp
  }
  return out;
}

ComplexVector measure_phase_only(const SensingEnsemble& ens, const RealVector& x,
                                 const ComplexVector& noise, const NoiseSpec& spec) {
  const double sup = noise.size() > 0 ? noise.cwiseAbs().maxCoeff() : 0.0;
  if (sup > spec.tau * (1.0 + 1e-12)) {
    throw InvalidParameter("measure_phase_only: noise sup-norm " + std::to_string(sup) +
                           " exceeds tau = " + std::to_string(spec.tau));
  }
  return measure_phase_only(ens, x, noise);
}

}  // namespace pocs

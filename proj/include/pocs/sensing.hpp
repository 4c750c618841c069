#pragma once

#include <cstdint>

#include "pocs/linalg.hpp"
#include "pocs/rng.hpp"
#include "pocs/types.hpp"

namespace pocs {

/// Scaling applied to the raw Gaussian draw Phi.
///
/// OverSqrt2M (A = Phi/sqrt(2m)) normalizes columns for the linear-CS
/// near-isometry; OverSqrtM (A = Phi/sqrt(m)) is the convention under which
/// E||Ax||_1 = kappa sqrt(m) ||x|| and is what the phase-only pipeline uses.
enum class Scaling { OverSqrtM, OverSqrt2M };

/// A raw complex Gaussian draw together with its scaling convention and the
/// stream that produced it.
class SensingEnsemble {
 public:
  SensingEnsemble(ComplexMatrix raw, Scaling scaling, std::uint64_t master_seed = 0,
                  std::uint64_t stream_id = 0);

  /// Draws Phi (entries N(0,1) + i N(0,1)) from rng and wraps it.
  static SensingEnsemble sample(RngStream& rng, Index m, Index n, Scaling scaling);

  Index m() const { return raw_.rows(); }
  Index n() const { return raw_.cols(); }
  Scaling scaling() const { return scaling_; }
  const ComplexMatrix& raw() const { return raw_; }
  /// The scaled matrix A under this ensemble's convention.
  const ComplexMatrix& matrix() const { return scaled_; }
  /// The same raw draw under another convention.
  ComplexMatrix matrix_as(Scaling scaling) const;

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  static double scale_factor(Scaling scaling, Index m);

 private:
  ComplexMatrix raw_;
  ComplexMatrix scaled_;
  Scaling scaling_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

/// Bounded noise on the observed phases: entries live in the closed complex
/// disk of radius tau.
struct NoiseSpec {
  double tau = 0.0;
};

/// Complex sign, entrywise: lambda/|lambda|, with sign_c(0) = 0.
Complex sign_c(Complex value);
ComplexVector sign_c(const ComplexVector& v);

/// y = A x + noise under the ensemble's scaled matrix.
ComplexVector measure_linear(const SensingEnsemble& ens, const RealVector& x,
                             const ComplexVector& noise);

/// z = sign_c(A x) + noise; only the measurement phases survive.
ComplexVector measure_phase_only(const SensingEnsemble& ens, const RealVector& x,
                                 const ComplexVector& noise);

/// Same, but rejects noise whose sup-norm exceeds spec.tau.
ComplexVector measure_phase_only(const SensingEnsemble& ens, const RealVector& x,
                                 const ComplexVector& noise, const NoiseSpec& spec);

/// Entries i.i.d. uniform on the disk {|lambda| <= tau}.
ComplexVector sample_disk_noise(RngStream& rng, Index m, double tau);

}  // namespace pocs

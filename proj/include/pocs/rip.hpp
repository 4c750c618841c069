#pragma once

#include <cstdint>
#include <vector>

#include "pocs/rng.hpp"
#include "pocs/sensing.hpp"
#include "pocs/types.hpp"

namespace pocs {

/// How supports are enumerated when measuring restricted isometry.
struct RipOptions {
  enum class Mode { Exhaustive, Sampled };

  Mode mode = Mode::Exhaustive;
  long sample_count = 0;  ///< supports drawn in Sampled mode
  std::uint64_t seed = 0;
  long exhaustive_cap = 1000000;  ///< refuse exhaustive runs past this many supports
};

struct RipEstimate {
  Index order = 0;
  double delta = 0.0;  ///< max(1 - sigma_min^2, sigma_max^2 - 1)
  double sigma_min = 1.0;
  double sigma_max = 1.0;
  long supports_checked = 0;
  std::vector<Index> sigma_min_support;  ///< columns attaining sigma_min
  std::vector<Index> sigma_max_support;  ///< columns attaining sigma_max
};

/// Measures how far s-column submatrices of A stray from isometry. Exhaustive
/// mode visits every support of size s and refuses to start when the count
/// exceeds opts.exhaustive_cap; Sampled mode draws opts.sample_count supports
/// uniformly, so its estimate can only undershoot the exhaustive one.
RipEstimate estimate_rip(const RealMatrix& A, Index s, const RipOptions& opts = {});

/// RIP of the linearized operator built from the noiseless phases of
/// x_source, i.e. the stacked real matrix that recovery actually inverts.
RipEstimate rip_of_linearized(const SensingEnsemble& ensemble, const RealVector& x_source,
                              Index s, const RipOptions& opts = {});

struct FidelityCheck {
  double max_ratio = 0.0;      ///< worst ||A_z x* - e1|| / tau over the noise draws (0 when tau = 0)
  double bound = 0.0;          ///< sqrt(2) (1 + delta_hat) / (1 - delta_hat)
  double delta_hat = 0.0;      ///< exhaustive RIP constant of the noiseless linearization
  double max_deviation = 0.0;  ///< worst raw ||A_z x* - e1||
  int trials = 0;
  bool passed = false;
};

/// Draws `trials` disk-noise corruptions of the phase vector of x at level tau
/// and checks that the linearized system's per-tau deviation from its noiseless
/// target stays within the ratio predicted by the measured RIP constant.
FidelityCheck validate_fidelity_bound(RngStream& rng, const SensingEnsemble& ensemble,
                                      const RealVector& x, Index s, double tau, int trials);

}  // namespace pocs

#include "pocs/rip.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "pocs/errors.hpp"
#include "pocs/linalg.hpp"
#include "pocs/linearization.hpp"

namespace pocs {

namespace {

double binomial_approx(Index n, Index s) {
  double count = 1.0;
  for (Index i = 1; i <= s; ++i) {
    count *= static_cast<double>(n - s + i);
    count /= static_cast<double>(i);
    if (count > 1e18) return count;  // far past any sane cap already
  }
  return count;
}

std::string format_count(double count) {
  char buf[64];
  if (count < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", count);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3g", count);
  }
  return buf;
}

struct SpectrumTracker {
  double sigma_min = std::numeric_limits<double>::infinity();
  double sigma_max = 0.0;
  std::vector<Index> min_support;
  std::vector<Index> max_support;
  long checked = 0;

  void absorb(const RealMatrix& A, const std::vector<Index>& support, RealMatrix& scratch) {
    const Index s = static_cast<Index>(support.size());
    scratch.resize(A.rows(), s);
    for (Index j = 0; j < s; ++j) scratch.col(j) = A.col(support[static_cast<std::size_t>(j)]);
    Eigen::JacobiSVD<RealMatrix> svd(scratch);
    const auto& sv = svd.singularValues();
    const double lo = sv(sv.size() - 1);
    const double hi = sv(0);
    if (lo < sigma_min) {
      sigma_min = lo;
      min_support = support;
    }
    if (hi > sigma_max) {
      sigma_max = hi;
      max_support = support;
    }
    ++checked;
  }

  RipEstimate finish(Index s) const {
    RipEstimate est;
    est.order = s;
    est.sigma_min = sigma_min;
    est.sigma_max = sigma_max;
    est.delta = std::max(1.0 - sigma_min * sigma_min, sigma_max * sigma_max - 1.0);
    est.supports_checked = checked;
    est.sigma_min_support = min_support;
    est.sigma_max_support = max_support;
    return est;
  }
};

bool next_combination(std::vector<Index>& idx, Index n) {
  const Index s = static_cast<Index>(idx.size());
  for (Index j = s - 1; j >= 0; --j) {
    if (idx[static_cast<std::size_t>(j)] < n - s + j) {
      ++idx[static_cast<std::size_t>(j)];
      for (Index k = j + 1; k < s; ++k) {
        idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

std::vector<Index> draw_support(RngStream& rng, Index n, Index s) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index j = 0; j < s; ++j) {
    const auto pick = j + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n - j)));
    std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
  }
  std::vector<Index> support(pool.begin(), pool.begin() + s);
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace

RipEstimate estimate_rip(const RealMatrix& A, Index s, const RipOptions& opts) {
  if (A.rows() < 1 || A.cols() < 1) throw InvalidParameter("estimate_rip: matrix must be nonempty");
  if (s < 1 || s > A.cols()) {
    throw InvalidParameter("estimate_rip: order " + std::to_string(s) +
                           " outside [1, " + std::to_string(A.cols()) + "]");
  }

  const Index n = A.cols();
  SpectrumTracker tracker;
  RealMatrix scratch;

  if (opts.mode == RipOptions::Mode::Exhaustive) {
    const double total = binomial_approx(n, s);
    if (total > static_cast<double>(opts.exhaustive_cap)) {
      throw ResourceRefusal("estimate_rip: exhaustive enumeration needs " + format_count(total) +
                            " supports, above the cap of " +
                            std::to_string(opts.exhaustive_cap) + "; use Sampled mode");
    }
    std::vector<Index> support(static_cast<std::size_t>(s));
    std::iota(support.begin(), support.end(), Index{0});
    do {
      tracker.absorb(A, support, scratch);
    } while (next_combination(support, n));
  } else {
    if (opts.sample_count < 1) {
      throw InvalidParameter("estimate_rip: Sampled mode needs sample_count >= 1");
    }
    RngStream rng(opts.seed, mix_stream_id(static_cast<std::uint64_t>(s)));
    for (long t = 0; t < opts.sample_count; ++t) {
      tracker.absorb(A, draw_support(rng, n, s), scratch);
    }
  }
  return tracker.finish(s);
}

RipEstimate rip_of_linearized(const SensingEnsemble& ensemble, const RealVector& x_source,
                              Index s, const RipOptions& opts) {
  if (x_source.size() != ensemble.n()) {
    throw DimensionMismatch("rip_of_linearized: signal length " +
                            std::to_string(x_source.size()) +
                            " != columns = " + std::to_string(ensemble.n()));
  }
  if (x_source.isZero(0.0)) throw DegenerateInput("rip_of_linearized: x_source must be nonzero");
  const ComplexVector z = sign_c(matvec(ensemble.matrix(), x_source));
  const LinearizedOperator op = build_Az(ensemble, z);
  return estimate_rip(op.matrix, s, opts);
}

FidelityCheck validate_fidelity_bound(RngStream& rng, const SensingEnsemble& ensemble,
                                      const RealVector& x, Index s, double tau, int trials) {
  if (trials < 1) throw InvalidParameter("validate_fidelity_bound: trials must be >= 1");
  if (tau < 0.0) throw InvalidParameter("validate_fidelity_bound: tau must be >= 0");

  const RipEstimate rip = rip_of_linearized(ensemble, x, s);
  if (rip.delta >= 1.0) {
    throw DegenerateInput("validate_fidelity_bound: linearization has delta >= 1, bound is vacuous");
  }
  const ComplexVector z0 = sign_c(matvec(ensemble.matrix(), x));
  const NormalizedSignal normalized = normalize_signal(ensemble, x);

  RealVector e1 = RealVector::Zero(ensemble.m() + 2);
  e1[0] = 1.0;

  FidelityCheck check;
  check.delta_hat = rip.delta;
  check.bound = std::sqrt(2.0) * (1.0 + rip.delta) / (1.0 - rip.delta);
  check.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const ComplexVector z = z0 + sample_disk_noise(rng, ensemble.m(), tau);
    const LinearizedOperator op = build_Az(ensemble, z);
    const double deviation = (op.matrix * normalized.xstar - e1).norm();
    check.max_deviation = std::max(check.max_deviation, deviation);
    if (tau > 0.0) check.max_ratio = std::max(check.max_ratio, deviation / tau);
  }
  check.passed = check.max_ratio <= check.bound;
  return check;
}

}  // namespace pocs

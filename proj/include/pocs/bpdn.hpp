#pragma once

#include <utility>
#include <vector>

#include "pocs/types.hpp"

namespace pocs {

struct SolverConfig {
  /// Relative duality/residual tolerance.
  double opt_tol = 1e-6;
  /// Newton iterations on the Pareto curve.
  int max_outer_iters = 300;
  /// Total spectral-projected-gradient iterations across all subproblems.
  int max_lasso_iters = 10000;
  /// Fidelity radius; 0 solves basis pursuit with equality.
  double epsilon = 0.0;
};

enum class SolverStatus { Converged, IterationCap, InfeasibleRadius };

const char* to_string(SolverStatus status);

/// One Newton iterate on the Pareto curve: l1 budget and the residual norm
/// reached under it.
struct ParetoPoint {
  double tau1 = 0.0;
  double phi = 0.0;
};

struct SolverReport {
  RealVector estimate;
  double residual_norm = 0.0;
  double l1_norm = 0.0;
  int outer_iters = 0;
  long total_matvecs = 0;
  SolverStatus status = SolverStatus::IterationCap;
  std::vector<ParetoPoint> pareto;
};

/// Solves min ||u||_1 s.t. ||B u - y|| <= epsilon by root-finding on the
/// Pareto curve phi(tau1) = min{||B u - y|| : ||u||_1 <= tau1}: an l1-ball
/// LASSO subproblem per Newton step, solved by spectral projected gradient.
SolverReport bpdn(const RealMatrix& B, const RealVector& y, const SolverConfig& cfg = {});

/// Euclidean projection onto {u : ||u||_1 <= radius}; O(n log n).
RealVector project_l1_ball(const RealVector& v, double radius);

/// Stacks real and imaginary parts so a complex system with a real unknown
/// becomes a real one with the same residual norm.
std::pair<RealMatrix, RealVector> lift_complex(const ComplexMatrix& Bc, const ComplexVector& yc);

}  // namespace pocs

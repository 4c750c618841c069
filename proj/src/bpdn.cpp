#include "pocs/bpdn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pocs/errors.hpp"

namespace pocs {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kStepMin = 1e-10;
constexpr double kStepMax = 1e10;
constexpr double kSufficientDecrease = 1e-4;
constexpr int kMaxBacktracks = 30;
constexpr int kHistoryWindow = 3;
// Newton increments on the l1 budget below this relative size cannot move the
// subproblem: the root search has hit the numerical floor of tau itself.
constexpr double kTauStallRel = 1e-13;

double clamp_step(double alpha) { return std::clamp(alpha, kStepMin, kStepMax); }

}  // namespace

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::Converged: return "Converged";
    case SolverStatus::IterationCap: return "IterationCap";
    case SolverStatus::InfeasibleRadius: return "InfeasibleRadius";
  }
  return "unknown";
}

RealVector project_l1_ball(const RealVector& v, double radius) {
  if (radius < 0.0) throw InvalidParameter("project_l1_ball: radius must be >= 0");
  if (radius == 0.0) return RealVector::Zero(v.size());
  if (v.lpNorm<1>() <= radius) return v;

  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  // Largest prefix whose soft-threshold pivot stays below the next magnitude.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    cumsum += mags[i];
    const double candidate = (cumsum - radius) / static_cast<double>(i + 1);
    if (i + 1 == mags.size() || mags[i + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  theta = std::max(theta, 0.0);

  RealVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double shrunk = std::abs(v[i]) - theta;
    out[i] = shrunk > 0.0 ? (v[i] > 0.0 ? shrunk : -shrunk) : 0.0;
  }
  const double l1 = out.lpNorm<1>();
  if (l1 > radius) out *= radius / l1;  // summation rounding guard
  return out;
}

std::pair<RealMatrix, RealVector> lift_complex(const ComplexMatrix& Bc, const ComplexVector& yc) {
  if (yc.size() != Bc.rows()) {
    throw DimensionMismatch("lift_complex: vector length " + std::to_string(yc.size()) +
                            " != rows = " + std::to_string(Bc.rows()));
  }
  const Index m = Bc.rows();
  RealMatrix B(2 * m, Bc.cols());
  B.topRows(m) = Bc.real();
  B.bottomRows(m) = Bc.imag();
  RealVector y(2 * m);
  y.head(m) = yc.real();
  y.tail(m) = yc.imag();
  return {std::move(B), std::move(y)};
}

namespace {

struct LassoOutcome {
  double phi = 0.0;     // ||r|| at exit
  double lambda = 0.0;  // ||B^T r||_inf at exit
  double gap = 0.0;     // duality gap at exit
  bool gap_optimal = false;
  bool bailed_feasible = false;
  bool budget_exhausted = false;
};

// State shared across LASSO subproblems so each Newton step warm-starts.
struct SpgState {
  RealVector u;   // current iterate
  RealVector r;   // y - B u
  RealVector gt;  // B^T r = -grad(0.5 ||B u - y||^2)
  double f = 0.0;
};

class BpdnDriver {
 public:
  BpdnDriver(const RealMatrix& B, const RealVector& y, const SolverConfig& cfg)
      : B_(B), y_(y), cfg_(cfg) {}

  SolverReport run();

 private:
  LassoOutcome solve_lasso(double tau1, double gap_tol_rel, double bail_phi);
  void refresh_state(double tau1);

  const RealMatrix& B_;
  const RealVector& y_;
  const SolverConfig& cfg_;
  SpgState s_;
  long matvecs_ = 0;
  int inner_used_ = 0;
};

void BpdnDriver::refresh_state(double tau1) {
  if (s_.u.lpNorm<1>() > tau1) s_.u = project_l1_ball(s_.u, tau1);
  s_.r.noalias() = y_ - B_ * s_.u;
  ++matvecs_;
  s_.gt.noalias() = B_.transpose() * s_.r;
  ++matvecs_;
  s_.f = 0.5 * s_.r.squaredNorm();
}

LassoOutcome BpdnDriver::solve_lasso(double tau1, double gap_tol_rel, double bail_phi) {
  LassoOutcome out;
  refresh_state(tau1);

  std::array<double, kHistoryWindow> history;
  history.fill(-std::numeric_limits<double>::infinity());
  history[0] = s_.f;
  int hist_pos = 0;

  double lambda = s_.gt.size() > 0 ? s_.gt.cwiseAbs().maxCoeff() : 0.0;
  double alpha = clamp_step(1.0 / std::max(lambda, kTiny));

  RealVector u_trial(s_.u.size());
  RealVector r_trial(s_.r.size());
  RealVector gt_new(s_.gt.size());

  for (;;) {
    lambda = s_.gt.size() > 0 ? s_.gt.cwiseAbs().maxCoeff() : 0.0;
    out.phi = std::sqrt(2.0 * s_.f);
    out.lambda = lambda;
    out.gap = tau1 * lambda - s_.u.dot(s_.gt);

    if (bail_phi > 0.0 && out.phi <= bail_phi) {
      out.bailed_feasible = true;
      return out;
    }
    if (out.gap <= gap_tol_rel * std::max(s_.f, kTiny)) {
      out.gap_optimal = true;
      return out;
    }
    if (inner_used_ >= cfg_.max_lasso_iters) {
      out.budget_exhausted = true;
      return out;
    }

    // Projected-arc backtracking with a nonmonotone acceptance window.
    const double fmax = *std::max_element(history.begin(), history.end());
    double step = alpha;
    bool accepted = false;
    double f_trial = 0.0;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      u_trial = project_l1_ball(s_.u + step * s_.gt, tau1);
      const RealVector d = u_trial - s_.u;
      const double dir_deriv = -s_.gt.dot(d);
      if (d.cwiseAbs().maxCoeff() <= 1e-16 * std::max(1.0, s_.u.cwiseAbs().maxCoeff())) {
        break;  // projected gradient step vanished: stationary
      }
      r_trial.noalias() = y_ - B_ * u_trial;
      ++matvecs_;
      f_trial = 0.5 * r_trial.squaredNorm();
      if (dir_deriv <= 0.0 && f_trial <= fmax + kSufficientDecrease * dir_deriv) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.gap_optimal = out.gap <= gap_tol_rel * std::max(s_.f, kTiny) * 100.0;
      return out;  // no descent available at this precision
    }

    gt_new.noalias() = B_.transpose() * r_trial;
    ++matvecs_;
    ++inner_used_;

    // Barzilai-Borwein spectral step from the accepted move.
    const RealVector du = u_trial - s_.u;
    const double sts = du.squaredNorm();
    const double std_curv = du.dot(s_.gt - gt_new);  // <du, grad_new - grad_old>
    alpha = std_curv > 0.0 ? clamp_step(sts / std_curv) : kStepMax;

    s_.u.swap(u_trial);
    s_.r.swap(r_trial);
    s_.gt.swap(gt_new);
    s_.f = f_trial;
    hist_pos = (hist_pos + 1) % kHistoryWindow;
    history[static_cast<std::size_t>(hist_pos)] = s_.f;
  }
}

SolverReport BpdnDriver::run() {
  const Index n = B_.cols();
  const double ynorm = y_.norm();
  const double floor_res = 1e-8 * ynorm;
  const double target = std::max(cfg_.epsilon, floor_res);
  const double gap_tol_final = std::min(1e-8, 0.05 * cfg_.opt_tol);
  const bool bp_mode = cfg_.epsilon < floor_res;

  SolverReport report;
  report.estimate = RealVector::Zero(n);

  if (ynorm <= cfg_.epsilon) {
    report.residual_norm = ynorm;
    report.l1_norm = 0.0;
    report.status = SolverStatus::Converged;
    return report;
  }

  s_.u = RealVector::Zero(n);
  s_.r = y_;
  s_.gt.resize(n);

  double tau = 0.0;
  double tau_lo = 0.0;
  double tau_hi = std::numeric_limits<double>::infinity();
  double phi = ynorm;
  bool force_tight = false;

  double best_phi = std::numeric_limits<double>::infinity();
  RealVector best_u = s_.u;

  report.status = SolverStatus::IterationCap;
  while (report.outer_iters < cfg_.max_outer_iters) {
    const double rel_mis = std::abs(phi - target) / std::max({phi, target, kTiny});
    double gap_tol_rel =
        force_tight ? gap_tol_final : std::clamp(0.1 * rel_mis, gap_tol_final, 1e-2);
    const double bail_phi = bp_mode ? target : 0.0;

    const bool tight_solve = gap_tol_rel <= gap_tol_final * (1.0 + 1e-12);
    const LassoOutcome lasso = solve_lasso(tau, gap_tol_rel, bail_phi);
    phi = lasso.phi;
    ++report.outer_iters;
    report.pareto.push_back({tau, phi});
    if (phi < best_phi) {
      best_phi = phi;
      best_u = s_.u;
    }

    // Accept only inside a band around the target radius: undershooting the
    // band means tau overshot the root and l1 optimality would be given away.
    // The basis-pursuit floor is an arbitrary numerical zero, so anything
    // within a factor two of it counts as hitting it.
    const bool feasible_now =
        phi <= (bp_mode ? 2.0 * target : target * (1.0 + cfg_.opt_tol) + kTiny);
    const bool within_band =
        bp_mode ? feasible_now
                : (feasible_now && phi >= target * (1.0 - 5.0 * cfg_.opt_tol));
    if (within_band) {
      if (bp_mode || (tight_solve && !lasso.budget_exhausted)) {
        report.status = SolverStatus::Converged;
        break;
      }
      if (!lasso.budget_exhausted) {
        force_tight = true;  // polish the subproblem at this tau before accepting
        continue;
      }
    }
    if (lasso.budget_exhausted) {
      report.status = SolverStatus::IterationCap;
      break;
    }

    // Newton step on phi(tau) = target with phi'(tau) = -lambda/phi.
    const double dtau = (phi - target) * phi / std::max(lasso.lambda, kTiny);
    if (dtau > 1e12 * std::max(1.0, tau)) {
      // Derivative vanished: at the least-squares floor yet still outside the
      // ball. Confirm with a tight solve before declaring the radius infeasible.
      if (force_tight || lasso.gap_optimal) {
        report.status = SolverStatus::InfeasibleRadius;
        break;
      }
      force_tight = true;
      continue;
    }
    force_tight = false;

    if (phi > target) {
      tau_lo = std::max(tau_lo, tau);
    } else {
      tau_hi = std::min(tau_hi, tau);
    }
    double tau_new = tau + dtau;
    if (!(tau_new > tau_lo) || !(tau_new < tau_hi)) {
      tau_new = std::isfinite(tau_hi) ? 0.5 * (tau_lo + tau_hi) : tau + dtau;
    }
    if (std::abs(tau_new - tau) <= kTauStallRel * std::max(1.0, tau)) {
      if (!tight_solve) {
        force_tight = true;  // polish at this tau before concluding
        continue;
      }
      report.status = feasible_now ? SolverStatus::Converged : SolverStatus::IterationCap;
      break;
    }
    tau = tau_new;
  }

  if (report.status == SolverStatus::Converged || phi <= best_phi) {
    report.estimate = s_.u;
    report.residual_norm = s_.r.norm();
  } else {
    report.estimate = best_u;
    report.residual_norm = (y_ - B_ * best_u).norm();
    ++matvecs_;
  }
  report.l1_norm = report.estimate.lpNorm<1>();
  report.total_matvecs = matvecs_;
  return report;
}

}  // namespace

SolverReport bpdn(const RealMatrix& B, const RealVector& y, const SolverConfig& cfg) {
  if (y.size() != B.rows()) {
    throw DimensionMismatch("bpdn: rhs length " + std::to_string(y.size()) +
                            " != rows = " + std::to_string(B.rows()));
  }
  if (cfg.epsilon < 0.0) throw InvalidParameter("bpdn: epsilon must be >= 0");
  if (!(cfg.opt_tol > 0.0)) throw InvalidParameter("bpdn: opt_tol must be > 0");
  if (cfg.max_outer_iters < 1 || cfg.max_lasso_iters < 1) {
    throw InvalidParameter("bpdn: iteration caps must be >= 1");
  }
  BpdnDriver driver(B, y, cfg);
  return driver.run();
}

}  // namespace pocs

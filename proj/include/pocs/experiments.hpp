#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pocs/bpdn.hpp"
#include "pocs/types.hpp"

namespace pocs {

/// Which reconstruction pipeline a trial exercises: recovery from measurement
/// phases alone, or the classical linear baseline on the same instance.
enum class Arm { PhaseOnly, Linear };

const char* to_string(Arm arm);  // "po-cs" / "cs"

/// How the fidelity radius handed to the solver is chosen.
struct EpsilonPolicy {
  enum class Kind { Theoretical, Oracle, Fixed };

  Kind kind = Kind::Theoretical;
  double delta = 0.2;  ///< distortion assumed by the Theoretical radius
  double value = 0.0;  ///< radius used by Fixed
};

struct ExperimentConfig {
  Index n = 100;
  Index s = 10;
  std::vector<Index> m_grid;
  std::vector<double> tau_grid;  ///< empty = noiseless protocol
  int trials = 100;
  std::uint64_t master_seed = 0;
  double success_threshold = 1e-3;  ///< relative error counted as success
  EpsilonPolicy epsilon_policy;
  // Solver settings are held per arm so tuning one pipeline cannot perturb
  // the other's results.
  SolverConfig po_solver;
  SolverConfig cs_solver;
  int jobs = 1;
  bool keep_trials = false;  ///< also record per-trial outcomes
};

struct TrialOutcome {
  Arm arm = Arm::PhaseOnly;
  Index m = 0;
  double tau = 0.0;
  int trial = 0;
  double rel_error = 0.0;
  double snr_db = 0.0;
  bool success = false;
  bool capped = false;  ///< solver ended on a cap; always counted as failure
  double solve_seconds = 0.0;
};

struct ExperimentRow {
  Index m = 0;
  double tau = 0.0;
  Arm arm = Arm::PhaseOnly;
  double success_rate = 0.0;
  double mean_snr_db = 0.0;
  double std_snr_db = 0.0;
  int trials = 0;
  int capped = 0;
  double mean_solve_time = 0.0;  ///< wall clock; never serialized
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<TrialOutcome> trial_log;  ///< populated when keep_trials is set
  std::uint64_t master_seed = 0;
  std::string config_digest;  ///< hash of the resolved config for provenance
};

/// Runs one independent trial. The instance (matrix, signal, noise) is derived
/// solely from (master_seed, m, tau, trial), so both arms see identical data
/// and outcomes do not depend on scheduling or on how many trials surround
/// this one.
TrialOutcome run_single_trial(const ExperimentConfig& cfg, Arm arm, Index m, double tau,
                              int trial);

/// Noiseless success-rate comparison of both arms over cfg.m_grid. Signals are
/// rescaled to their recoverable representative before measurement, so both
/// arms share one ground truth. Requires an empty tau_grid.
ExperimentResult run_phase_transition(const ExperimentConfig& cfg);

/// Phase-only recovery under disk noise over cfg.m_grid x cfg.tau_grid,
/// reporting mean/std reconstruction SNR per cell. Requires a nonempty
/// tau_grid with every tau in [0, pi).
ExperimentResult run_noise_sweep(const ExperimentConfig& cfg);

enum class EmitFormat { Csv, SvgPlot };

/// Serializes a result table. CSV columns:
///   m, m_over_s, tau, arm, success_rate, mean_snr_db, std_snr_db, trials, seed
/// preceded by comment lines carrying the resolved config and its digest;
/// rows where the solver hit a cap are flagged in trailing comment lines. The
/// SVG is a self-contained chart: success rate vs m/s for noiseless results,
/// mean SNR vs m/s (one series per noise level) otherwise.
std::string render_csv(const ExperimentResult& result, const ExperimentConfig& cfg);
std::string render_svg(const ExperimentResult& result, const ExperimentConfig& cfg);
void emit_results(const ExperimentResult& result, const ExperimentConfig& cfg, EmitFormat format,
                  const std::string& path);

/// Parses the data rows of a CSV produced by render_csv; comment lines are
/// skipped. Round-trips exactly: floats are written in shortest form that
/// reparses to the identical double.
std::vector<ExperimentRow> parse_result_csv(const std::string& text);

}  // namespace pocs

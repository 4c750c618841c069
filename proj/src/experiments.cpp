#include "pocs/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include "pocs/errors.hpp"
#include "pocs/io.hpp"
#include "pocs/linearization.hpp"
#include "pocs/rng.hpp"
#include "pocs/sensing.hpp"
#include "pocs/svg.hpp"

namespace pocs {

const char* to_string(Arm arm) { return arm == Arm::PhaseOnly ? "po-cs" : "cs"; }

namespace {

constexpr double kSnrRelFloor = 1e-15;  // caps reported SNR at 300 dB

std::string policy_string(const EpsilonPolicy& policy) {
  switch (policy.kind) {
    case EpsilonPolicy::Kind::Theoretical: return "theoretical:" + format_double(policy.delta);
    case EpsilonPolicy::Kind::Oracle: return "oracle";
    case EpsilonPolicy::Kind::Fixed: return "fixed:" + format_double(policy.value);
  }
  return "?";
}

std::string solver_string(const SolverConfig& cfg) {
  return format_double(cfg.opt_tol) + "/" + std::to_string(cfg.max_outer_iters) + "/" +
         std::to_string(cfg.max_lasso_iters);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Everything that can change the numbers goes in; scheduling knobs stay out so
// reruns with a different --jobs hash (and serialize) identically.
std::string resolved_config_line(const ExperimentConfig& cfg, const char* op_name) {
  std::string text = std::string(op_name) + " n=" + std::to_string(cfg.n) +
                     " s=" + std::to_string(cfg.s) + " m_grid=";
  for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
    if (i > 0) text += ',';
    text += std::to_string(cfg.m_grid[i]);
  }
  text += " tau_grid=";
  for (std::size_t i = 0; i < cfg.tau_grid.size(); ++i) {
    if (i > 0) text += ',';
    text += format_double(cfg.tau_grid[i]);
  }
  text += " trials=" + std::to_string(cfg.trials) +
          " master_seed=" + std::to_string(cfg.master_seed) +
          " success_threshold=" + format_double(cfg.success_threshold) +
          " epsilon_policy=" + policy_string(cfg.epsilon_policy) +
          " po_solver=" + solver_string(cfg.po_solver) +
          " cs_solver=" + solver_string(cfg.cs_solver);
  return text;
}

void validate_common(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.s < 1 || cfg.s > cfg.n) {
    throw InvalidParameter("experiment: need 1 <= s <= n");
  }
  if (cfg.m_grid.empty()) throw InvalidParameter("experiment: m_grid must be nonempty");
  for (const Index m : cfg.m_grid) {
    if (m < 1) throw InvalidParameter("experiment: every m in m_grid must be >= 1");
  }
  if (cfg.trials < 1) throw InvalidParameter("experiment: trials must be >= 1");
  if (!(cfg.success_threshold > 0.0)) {
    throw InvalidParameter("experiment: success_threshold must be > 0");
  }
  if (cfg.jobs < 1) throw InvalidParameter("experiment: jobs must be >= 1");
}

template <typename Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
  const int workers = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Cell {
  Index m = 0;
  double tau = 0.0;
  Arm arm = Arm::PhaseOnly;
};

ExperimentResult run_cells(const ExperimentConfig& cfg, const std::vector<Cell>& cells,
                           const char* op_name) {
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(cells.size() * trials);

  parallel_for(outcomes.size(), cfg.jobs, [&](std::size_t task) {
    const Cell& cell = cells[task / trials];
    const int trial = static_cast<int>(task % trials);
    outcomes[task] = run_single_trial(cfg, cell.arm, cell.m, cell.tau, trial);
  });

  ExperimentResult result;
  result.master_seed = cfg.master_seed;
  result.config_digest = hex16(fnv1a(resolved_config_line(cfg, op_name)));
  result.rows.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    ExperimentRow row;
    row.m = cells[c].m;
    row.tau = cells[c].tau;
    row.arm = cells[c].arm;
    row.trials = cfg.trials;

    double snr_sum = 0.0;
    double time_sum = 0.0;
    int successes = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialOutcome& out = outcomes[c * trials + t];
      snr_sum += out.snr_db;
      time_sum += out.solve_seconds;
      successes += out.success ? 1 : 0;
      row.capped += out.capped ? 1 : 0;
    }
    row.success_rate = static_cast<double>(successes) / static_cast<double>(cfg.trials);
    row.mean_snr_db = snr_sum / static_cast<double>(cfg.trials);
    row.mean_solve_time = time_sum / static_cast<double>(cfg.trials);

    double var_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double d = outcomes[c * trials + t].snr_db - row.mean_snr_db;
      var_sum += d * d;
    }
    row.std_snr_db =
        cfg.trials > 1 ? std::sqrt(var_sum / static_cast<double>(cfg.trials - 1)) : 0.0;
    result.rows.push_back(row);
  }
  if (cfg.keep_trials) result.trial_log = std::move(outcomes);
  return result;
}

std::string lerp_color(double t) {
  const auto mix = [t](int a, int b) {
    return static_cast<int>(std::lround(a + (b - a) * std::clamp(t, 0.0, 1.0)));
  };
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(33, 178), mix(102, 24), mix(172, 43));
  return buf;
}

}  // namespace

TrialOutcome run_single_trial(const ExperimentConfig& cfg, Arm arm, Index m, double tau,
                              int trial) {
  if (m < 1) throw InvalidParameter("run_single_trial: m must be >= 1");
  if (trial < 0) throw InvalidParameter("run_single_trial: trial must be >= 0");

  const std::uint64_t stream_id =
      mix_stream_id(static_cast<std::uint64_t>(m), std::bit_cast<std::uint64_t>(tau),
                    static_cast<std::uint64_t>(trial));
  RngStream rng(cfg.master_seed, stream_id);

  ComplexMatrix raw = sample_complex_gaussian(rng, m, cfg.n);
  const RealVector x0 = sample_sparse_signal(rng, cfg.n, cfg.s);
  const SensingEnsemble ens(std::move(raw), Scaling::OverSqrtM, cfg.master_seed, stream_id);
  // The trial's ground truth is the recoverable representative itself.
  const RealVector xstar = normalize_signal(ens, x0).xstar;
  const ComplexVector noise = sample_disk_noise(rng, m, tau);

  TrialOutcome out;
  out.arm = arm;
  out.m = m;
  out.tau = tau;
  out.trial = trial;

  SolverReport report;
  const auto t0 = std::chrono::steady_clock::now();
  if (arm == Arm::PhaseOnly) {
    const ComplexVector z = measure_phase_only(ens, xstar, noise);
    const LinearizedOperator op = build_Az(ens, z);
    RealVector e1 = RealVector::Zero(op.matrix.rows());
    e1[0] = 1.0;

    SolverConfig solver = cfg.po_solver;
    switch (cfg.epsilon_policy.kind) {
      case EpsilonPolicy::Kind::Theoretical:
        solver.epsilon = epsilon_bound(tau, cfg.epsilon_policy.delta);
        break;
      case EpsilonPolicy::Kind::Oracle:
        solver.epsilon = (op.matrix * xstar - e1).norm();
        break;
      case EpsilonPolicy::Kind::Fixed:
        solver.epsilon = cfg.epsilon_policy.value;
        break;
    }
    report = bpdn(op.matrix, e1, solver);
  } else {
    const SensingEnsemble cs_ens(ens.raw(), Scaling::OverSqrt2M, cfg.master_seed, stream_id);
    const ComplexVector y = measure_linear(cs_ens, xstar, noise);
    const auto [B, yr] = lift_complex(cs_ens.matrix(), y);

    SolverConfig solver = cfg.cs_solver;
    switch (cfg.epsilon_policy.kind) {
      case EpsilonPolicy::Kind::Theoretical:
        // Worst-case energy of disk-bounded noise across m measurements.
        solver.epsilon = tau * std::sqrt(static_cast<double>(m));
        break;
      case EpsilonPolicy::Kind::Oracle:
        solver.epsilon = (B * xstar - yr).norm();
        break;
      case EpsilonPolicy::Kind::Fixed:
        solver.epsilon = cfg.epsilon_policy.value;
        break;
    }
    report = bpdn(B, yr, solver);
  }
  const auto t1 = std::chrono::steady_clock::now();

  out.solve_seconds = std::chrono::duration<double>(t1 - t0).count();
  out.rel_error = (report.estimate - xstar).norm() / xstar.norm();
  out.snr_db = -20.0 * std::log10(std::max(out.rel_error, kSnrRelFloor));
  out.capped = report.status != SolverStatus::Converged;
  out.success = out.rel_error <= cfg.success_threshold;
  return out;
}

ExperimentResult run_phase_transition(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (!cfg.tau_grid.empty()) {
    throw InvalidParameter("run_phase_transition: noiseless protocol, tau_grid must be empty");
  }
  std::vector<Cell> cells;
  cells.reserve(cfg.m_grid.size() * 2);
  for (const Index m : cfg.m_grid) {
    cells.push_back({m, 0.0, Arm::PhaseOnly});
    cells.push_back({m, 0.0, Arm::Linear});
  }
  return run_cells(cfg, cells, "phase-transition");
}

ExperimentResult run_noise_sweep(const ExperimentConfig& cfg) {
  validate_common(cfg);
  if (cfg.tau_grid.empty()) {
    throw InvalidParameter("run_noise_sweep: tau_grid must be nonempty");
  }
  for (const double tau : cfg.tau_grid) {
    if (tau < 0.0 || tau >= std::numbers::pi) {
      throw InvalidParameter("run_noise_sweep: every tau must lie in [0, pi), got " +
                             format_double(tau));
    }
  }
  std::vector<Cell> cells;
  cells.reserve(cfg.tau_grid.size() * cfg.m_grid.size());
  for (const double tau : cfg.tau_grid) {
    for (const Index m : cfg.m_grid) cells.push_back({m, tau, Arm::PhaseOnly});
  }
  return run_cells(cfg, cells, "noise-sweep");
}

std::string render_csv(const ExperimentResult& result, const ExperimentConfig& cfg) {
  const bool noiseless = !result.rows.empty() && result.rows.front().tau == 0.0 &&
                         result.rows.back().tau == 0.0 && cfg.tau_grid.empty();
  std::string text =
      "# config: " +
      resolved_config_line(cfg, noiseless ? "phase-transition" : "noise-sweep") + "\n";
  text += "# digest: " + result.config_digest + "\n";
  text += "m,m_over_s,tau,arm,success_rate,mean_snr_db,std_snr_db,trials,seed\n";
  for (const ExperimentRow& row : result.rows) {
    const double m_over_s = static_cast<double>(row.m) / static_cast<double>(cfg.s);
    text += std::to_string(row.m) + "," + format_double(m_over_s) + "," +
            format_double(row.tau) + "," + to_string(row.arm) + "," +
            format_double(row.success_rate) + "," + format_double(row.mean_snr_db) + "," +
            format_double(row.std_snr_db) + "," + std::to_string(row.trials) + "," +
            std::to_string(result.master_seed) + "\n";
  }
  for (const ExperimentRow& row : result.rows) {
    if (row.capped > 0) {
      text += "# capped: m=" + std::to_string(row.m) + " tau=" + format_double(row.tau) +
              " arm=" + std::string(to_string(row.arm)) +
              " count=" + std::to_string(row.capped) + "\n";
    }
  }
  return text;
}

std::vector<ExperimentRow> parse_result_csv(const std::string& text) {
  std::vector<ExperimentRow> rows;
  std::size_t start = 0;
  long line_number = 0;
  bool header_seen = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_number;

    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header_seen) {
      if (line.rfind("m,m_over_s,tau,arm,", 0) != 0) {
        throw ParseError("unexpected header '" + line + "'", line_number);
      }
      header_seen = true;
      continue;
    }

    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (fields.size() != 9) {
      throw ParseError("expected 9 columns, got " + std::to_string(fields.size()), line_number);
    }

    ExperimentRow row;
    row.m = static_cast<Index>(parse_double_token(fields[0], line_number));
    row.tau = parse_double_token(fields[2], line_number);
    if (fields[3] == "po-cs") {
      row.arm = Arm::PhaseOnly;
    } else if (fields[3] == "cs") {
      row.arm = Arm::Linear;
    } else {
      throw ParseError("unknown arm '" + fields[3] + "'", line_number);
    }
    row.success_rate = parse_double_token(fields[4], line_number);
    row.mean_snr_db = parse_double_token(fields[5], line_number);
    row.std_snr_db = parse_double_token(fields[6], line_number);
    row.trials = static_cast<int>(parse_double_token(fields[7], line_number));
    rows.push_back(row);
  }
  if (!header_seen) throw ParseError("no header row found", line_number);
  return rows;
}

std::string render_svg(const ExperimentResult& result, const ExperimentConfig& cfg) {
  const bool noiseless = std::all_of(result.rows.begin(), result.rows.end(),
                                     [](const ExperimentRow& r) { return r.tau == 0.0; });
  std::vector<SvgSeries> series;

  if (noiseless) {
    SvgSeries po{"po-cs", "#b2182b", false, {}};
    SvgSeries cs{"cs", "#2166ac", true, {}};
    for (const ExperimentRow& row : result.rows) {
      const double x = static_cast<double>(row.m) / static_cast<double>(cfg.s);
      (row.arm == Arm::PhaseOnly ? po : cs).points.push_back({x, row.success_rate});
    }
    if (!po.points.empty()) series.push_back(std::move(po));
    if (!cs.points.empty()) series.push_back(std::move(cs));
    return render_line_chart("Recovery success rate", "m/s", "success rate", series);
  }

  std::vector<double> taus;
  for (const ExperimentRow& row : result.rows) {
    if (std::find(taus.begin(), taus.end(), row.tau) == taus.end()) taus.push_back(row.tau);
  }
  const auto level = [](double tau) {
    return std::clamp(-std::log10(std::max(tau, 1e-300) / std::numbers::pi), 0.0, 15.0);
  };
  double lo = level(taus.front());
  double hi = lo;
  for (const double tau : taus) {
    lo = std::min(lo, level(tau));
    hi = std::max(hi, level(tau));
  }
  for (const double tau : taus) {
    const double t = hi > lo ? (level(tau) - lo) / (hi - lo) : 1.0;
    SvgSeries s;
    s.label = "-log10(tau/pi) = " + format_double(level(tau));
    s.color = lerp_color(t);
    for (const ExperimentRow& row : result.rows) {
      if (row.tau == tau && row.arm == Arm::PhaseOnly) {
        s.points.push_back(
            {static_cast<double>(row.m) / static_cast<double>(cfg.s), row.mean_snr_db});
      }
    }
    series.push_back(std::move(s));
  }
  return render_line_chart("Reconstruction SNR under phase noise", "m/s", "mean SNR (dB)",
                           series);
}

void emit_results(const ExperimentResult& result, const ExperimentConfig& cfg, EmitFormat format,
                  const std::string& path) {
  if (result.rows.empty()) throw InvalidParameter("emit_results: empty result");
  switch (format) {
    case EmitFormat::Csv: write_text_file(path, render_csv(result, cfg)); break;
    case EmitFormat::SvgPlot: write_text_file(path, render_svg(result, cfg)); break;
  }
}

}  // namespace pocs

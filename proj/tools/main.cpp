#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pocs/errors.hpp"
#include "pocs/experiments.hpp"
#include "pocs/io.hpp"
#include "pocs/linearization.hpp"
#include "pocs/rip.hpp"
#include "pocs/rng.hpp"
#include "pocs/sensing.hpp"
#include "pocs/types.hpp"

namespace {

using pocs::Index;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRefusal = 3;

std::vector<Index> parse_m_grid(const std::string& text) {
  std::vector<Index> grid;
  const auto parse_count = [&](const std::string& token) {
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(token, &used);
    } catch (const std::exception&) {
      throw pocs::InvalidParameter("bad m-grid entry '" + token + "'");
    }
    if (used != token.size() || value < 1) {
      throw pocs::InvalidParameter("bad m-grid entry '" + token + "'");
    }
    return static_cast<Index>(value);
  };

  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = text.find(':', start);
      if (pos == std::string::npos) {
        parts.push_back(text.substr(start));
        break;
      }
      parts.push_back(text.substr(start, pos - start));
      start = pos + 1;
    }
    if (parts.size() != 3) {
      throw pocs::InvalidParameter("m-grid range must be start:stop:step, got '" + text + "'");
    }
    const Index lo = parse_count(parts[0]);
    const Index hi = parse_count(parts[1]);
    const Index step = parse_count(parts[2]);
    if (hi < lo) throw pocs::InvalidParameter("m-grid range has stop < start");
    for (Index m = lo; m <= hi; m += step) grid.push_back(m);
    return grid;
  }

  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(',', start);
    grid.push_back(parse_count(text.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return grid;
}

double parse_tau(const std::string& token) {
  std::string body = token;
  double factor = 1.0;
  if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
    factor = std::numbers::pi;
    body = body.substr(0, body.size() - 2);
  }
  return factor * pocs::parse_double_token(body, 0);
}

std::vector<double> parse_tau_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(',', start);
    grid.push_back(parse_tau(text.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return grid;
}

pocs::EpsilonPolicy parse_policy(const std::string& text) {
  pocs::EpsilonPolicy policy;
  if (text == "oracle") {
    policy.kind = pocs::EpsilonPolicy::Kind::Oracle;
    return policy;
  }
  if (text == "theoretical" || text.rfind("theoretical:", 0) == 0) {
    policy.kind = pocs::EpsilonPolicy::Kind::Theoretical;
    if (text.size() > 12) policy.delta = pocs::parse_double_token(text.substr(12), 0);
    if (policy.delta < 0.0 || policy.delta >= 1.0) {
      throw pocs::InvalidParameter("theoretical policy needs delta in [0, 1)");
    }
    return policy;
  }
  if (text.rfind("fixed:", 0) == 0) {
    policy.kind = pocs::EpsilonPolicy::Kind::Fixed;
    policy.value = pocs::parse_double_token(text.substr(6), 0);
    if (policy.value < 0.0) throw pocs::InvalidParameter("fixed policy needs a radius >= 0");
    return policy;
  }
  throw pocs::InvalidParameter("unknown epsilon policy '" + text +
                               "' (theoretical[:delta] | oracle | fixed:v)");
}

struct RipMode {
  pocs::RipOptions::Mode mode = pocs::RipOptions::Mode::Exhaustive;
  long samples = 0;
};

RipMode parse_rip_mode(const std::string& text) {
  RipMode mode;
  if (text == "exhaustive") return mode;
  if (text.rfind("sampled:", 0) == 0) {
    mode.mode = pocs::RipOptions::Mode::Sampled;
    try {
      mode.samples = std::stol(text.substr(8));
    } catch (const std::exception&) {
      throw pocs::InvalidParameter("bad sample count in '" + text + "'");
    }
    if (mode.samples < 1) throw pocs::InvalidParameter("sampled mode needs a count >= 1");
    return mode;
  }
  throw pocs::InvalidParameter("unknown mode '" + text + "' (exhaustive | sampled:K)");
}

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  const char* env = std::getenv("PO_CS_SEED");
  if (env == nullptr || *env == '\0') return flag_seed;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    throw pocs::InvalidParameter("PO_CS_SEED must be an unsigned integer, got '" +
                                 std::string(env) + "'");
  }
  return static_cast<std::uint64_t>(value);
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

void log_rows(const pocs::ExperimentResult& result, const pocs::ExperimentConfig& cfg) {
  for (const auto& row : result.rows) {
    std::cout << "m=" << row.m << " m/s=" << static_cast<double>(row.m) / cfg.s
              << " tau=" << pocs::format_double(row.tau) << " arm=" << pocs::to_string(row.arm)
              << " success_rate=" << pocs::format_double(row.success_rate)
              << " mean_snr_db=" << pocs::format_double(row.mean_snr_db)
              << " capped=" << row.capped << "\n";
  }
}

struct ExperimentFlags {
  Index n = 100;
  Index s = 10;
  std::string m_grid = "5:70:5";
  std::string tau_grid;
  int trials = 100;
  std::uint64_t seed = 1;
  double success_threshold = 1e-3;
  std::string policy = "theoretical:0.2";
  std::string out = ".";
  int jobs = 0;
  double opt_tol = 1e-6;
};

pocs::ExperimentConfig build_config(const ExperimentFlags& flags) {
  pocs::ExperimentConfig cfg;
  cfg.n = flags.n;
  cfg.s = flags.s;
  cfg.m_grid = parse_m_grid(flags.m_grid);
  if (!flags.tau_grid.empty()) cfg.tau_grid = parse_tau_grid(flags.tau_grid);
  cfg.trials = flags.trials;
  cfg.master_seed = resolve_seed(flags.seed);
  cfg.success_threshold = flags.success_threshold;
  cfg.epsilon_policy = parse_policy(flags.policy);
  cfg.po_solver.opt_tol = flags.opt_tol;
  cfg.cs_solver.opt_tol = flags.opt_tol;
  cfg.jobs = flags.jobs > 0 ? flags.jobs
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return cfg;
}

int cmd_experiment(const ExperimentFlags& flags, bool noise_sweep) {
  const pocs::ExperimentConfig cfg = build_config(flags);
  const pocs::ExperimentResult result =
      noise_sweep ? pocs::run_noise_sweep(cfg) : pocs::run_phase_transition(cfg);

  const std::string stem = noise_sweep ? "noise_sweep" : "phase_transition";
  const std::string csv_path = out_path(flags.out, stem + ".csv");
  const std::string svg_path = out_path(flags.out, stem + ".svg");
  pocs::emit_results(result, cfg, pocs::EmitFormat::Csv, csv_path);
  pocs::emit_results(result, cfg, pocs::EmitFormat::SvgPlot, svg_path);

  std::cout << "# master_seed=" << cfg.master_seed << " digest=" << result.config_digest
            << " jobs=" << cfg.jobs << "\n";
  log_rows(result, cfg);
  std::cout << "wrote " << csv_path << "\n" << "wrote " << svg_path << "\n";
  return kExitOk;
}

struct RecoverFlags {
  std::string matrix;
  std::string phases;
  double tau = 0.0;
  std::string policy = "theoretical:0.2";
  std::string out = ".";
  double opt_tol = 1e-6;
  double consistency_tol = 1e-6;
  std::uint64_t seed = 0;
};

int cmd_recover(const RecoverFlags& flags) {
  const pocs::ComplexMatrix raw = pocs::read_complex_matrix(flags.matrix);
  const pocs::ComplexVector z = pocs::read_complex_vector(flags.phases);
  const std::uint64_t seed = resolve_seed(flags.seed);

  const pocs::SensingEnsemble ens(raw, pocs::Scaling::OverSqrtM, seed, 0);
  if (z.size() != ens.m()) {
    throw pocs::DimensionMismatch("phase vector has " + std::to_string(z.size()) +
                                  " entries but the matrix has " + std::to_string(ens.m()) +
                                  " rows");
  }
  if (flags.tau < 0.0) throw pocs::InvalidParameter("--tau must be >= 0");

  const pocs::EpsilonPolicy policy = parse_policy(flags.policy);
  if (policy.kind == pocs::EpsilonPolicy::Kind::Oracle) {
    throw pocs::InvalidParameter(
        "epsilon policy 'oracle' needs the true signal and is unavailable here");
  }

  const pocs::LinearizedOperator op = pocs::build_Az(ens, z);
  pocs::RealVector e1 = pocs::RealVector::Zero(op.matrix.rows());
  e1[0] = 1.0;

  pocs::SolverConfig solver;
  solver.opt_tol = flags.opt_tol;
  solver.epsilon = policy.kind == pocs::EpsilonPolicy::Kind::Fixed
                       ? policy.value
                       : pocs::epsilon_bound(flags.tau, policy.delta);
  const pocs::SolverReport report = pocs::bpdn(op.matrix, e1, solver);
  const pocs::ConsistencyReport consistency =
      pocs::phase_consistency_check(ens, z, report.estimate, flags.consistency_tol);

  const std::string config_line =
      "recover matrix=" + flags.matrix + " phases=" + flags.phases +
      " tau=" + pocs::format_double(flags.tau) + " epsilon_policy=" + flags.policy +
      " epsilon=" + pocs::format_double(solver.epsilon) +
      " opt_tol=" + pocs::format_double(flags.opt_tol) + " master_seed=" + std::to_string(seed);

  const std::string xhat_path = out_path(flags.out, "xhat.csv");
  pocs::write_real_vector(xhat_path, report.estimate, config_line);

  nlohmann::json doc;
  doc["config"] = config_line;
  doc["m"] = ens.m();
  doc["n"] = ens.n();
  doc["epsilon"] = solver.epsilon;
  doc["solver"] = {{"status", pocs::to_string(report.status)},
                   {"residual_norm", report.residual_norm},
                   {"l1_norm", report.l1_norm},
                   {"outer_iters", report.outer_iters},
                   {"total_matvecs", report.total_matvecs}};
  doc["consistency"] = {{"consistent", consistency.consistent},
                        {"positivity_violations", consistency.positivity_violations},
                        {"h_inf", consistency.h_inf},
                        {"alpha_re_err", consistency.alpha_re_err},
                        {"alpha_im_err", consistency.alpha_im_err}};
  const std::string report_path = out_path(flags.out, "report.json");
  pocs::write_text_file(report_path, doc.dump(2) + "\n");

  std::cout << "# " << config_line << "\n";
  std::cout << "status=" << pocs::to_string(report.status)
            << " residual=" << pocs::format_double(report.residual_norm)
            << " l1=" << pocs::format_double(report.l1_norm)
            << " consistent=" << (consistency.consistent ? "yes" : "no") << "\n";
  std::cout << "wrote " << xhat_path << "\n" << "wrote " << report_path << "\n";
  return kExitOk;
}

struct RipFlags {
  Index n = 16;
  Index s = 2;
  Index m = 96;
  std::string mode = "exhaustive";
  int repeat = 1;
  std::uint64_t seed = 1;
  bool identity = false;
  bool linearized = false;
};

int cmd_rip_estimate(const RipFlags& flags) {
  if (flags.repeat < 1) throw pocs::InvalidParameter("--repeat must be >= 1");
  if (flags.identity && flags.linearized) {
    throw pocs::InvalidParameter("--identity and --linearized are mutually exclusive");
  }
  const RipMode mode = parse_rip_mode(flags.mode);
  const std::uint64_t seed = resolve_seed(flags.seed);

  pocs::RipOptions opts;
  opts.mode = mode.mode;
  opts.sample_count = mode.samples;
  opts.seed = seed;

  std::cout << "# config: rip-estimate n=" << flags.n << " s=" << flags.s << " m=" << flags.m
            << " mode=" << flags.mode << " repeat=" << flags.repeat
            << " matrix=" << (flags.identity ? "identity" : flags.linearized ? "linearized" : "gaussian")
            << " master_seed=" << seed << "\n";

  std::vector<double> deltas;
  for (int rep = 0; rep < flags.repeat; ++rep) {
    pocs::RipEstimate estimate;
    if (flags.identity) {
      estimate = pocs::estimate_rip(pocs::RealMatrix::Identity(flags.n, flags.n), flags.s, opts);
    } else {
      pocs::RngStream rng(seed, pocs::mix_stream_id(static_cast<std::uint64_t>(flags.m),
                                                    static_cast<std::uint64_t>(rep)));
      if (flags.linearized) {
        const pocs::SensingEnsemble ens =
            pocs::SensingEnsemble::sample(rng, flags.m, flags.n, pocs::Scaling::OverSqrtM);
        const pocs::RealVector x = pocs::sample_sparse_signal(rng, flags.n, flags.s);
        estimate = pocs::rip_of_linearized(ens, x, flags.s, opts);
      } else {
        const pocs::SensingEnsemble ens =
            pocs::SensingEnsemble::sample(rng, flags.m, flags.n, pocs::Scaling::OverSqrt2M);
        const auto& A = ens.matrix();
        pocs::RealMatrix lifted(2 * flags.m, flags.n);
        lifted.topRows(flags.m) = A.real();
        lifted.bottomRows(flags.m) = A.imag();
        estimate = pocs::estimate_rip(lifted, flags.s, opts);
      }
    }
    deltas.push_back(estimate.delta);
    std::cout << "repeat=" << rep << " delta=" << pocs::format_double(estimate.delta)
              << " sigma_min=" << pocs::format_double(estimate.sigma_min)
              << " sigma_max=" << pocs::format_double(estimate.sigma_max)
              << " supports_checked=" << estimate.supports_checked << "\n";
  }

  std::sort(deltas.begin(), deltas.end());
  const std::size_t mid = deltas.size() / 2;
  const double median = deltas.size() % 2 == 1
                            ? deltas[mid]
                            : 0.5 * (deltas[mid - 1] + deltas[mid]);
  std::cout << "median_delta=" << pocs::format_double(median) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-only compressive sensing toolkit"};
  app.require_subcommand(1);

  ExperimentFlags pt_flags;
  CLI::App* pt = app.add_subcommand(
      "phase-transition", "Noiseless success-rate comparison of phase-only vs linear recovery");
  pt->add_option("--n", pt_flags.n, "signal dimension");
  pt->add_option("--s", pt_flags.s, "sparsity level");
  pt->add_option("--m-grid", pt_flags.m_grid, "measurement counts: start:stop:step or comma list");
  pt->add_option("--trials", pt_flags.trials, "trials per cell");
  pt->add_option("--seed", pt_flags.seed, "master seed (env PO_CS_SEED overrides)");
  pt->add_option("--success-threshold", pt_flags.success_threshold, "relative error for success");
  pt->add_option("--out", pt_flags.out, "output directory");
  pt->add_option("--jobs", pt_flags.jobs, "worker threads (default: all cores)");
  pt->add_option("--opt-tol", pt_flags.opt_tol, "solver tolerance");

  ExperimentFlags ns_flags;
  ns_flags.m_grid = "30:60:10";
  ns_flags.tau_grid = "0.1pi,0.01pi,0.001pi";
  ns_flags.trials = 50;
  CLI::App* ns = app.add_subcommand("noise-sweep",
                                    "Phase-only reconstruction SNR under disk-bounded noise");
  ns->add_option("--n", ns_flags.n, "signal dimension");
  ns->add_option("--s", ns_flags.s, "sparsity level");
  ns->add_option("--m-grid", ns_flags.m_grid, "measurement counts: start:stop:step or comma list");
  ns->add_option("--tau-grid", ns_flags.tau_grid,
                 "noise levels, comma list; suffix 'pi' scales by pi (e.g. 0.01pi)");
  ns->add_option("--trials", ns_flags.trials, "trials per cell");
  ns->add_option("--seed", ns_flags.seed, "master seed (env PO_CS_SEED overrides)");
  ns->add_option("--success-threshold", ns_flags.success_threshold, "relative error for success");
  ns->add_option("--epsilon-policy", ns_flags.policy,
                 "solver radius policy: theoretical[:delta] | oracle | fixed:v");
  ns->add_option("--out", ns_flags.out, "output directory");
  ns->add_option("--jobs", ns_flags.jobs, "worker threads (default: all cores)");
  ns->add_option("--opt-tol", ns_flags.opt_tol, "solver tolerance");

  RecoverFlags rec_flags;
  CLI::App* rec = app.add_subcommand("recover", "Recover one signal from a matrix and its phases");
  rec->add_option("--matrix", rec_flags.matrix,
                  "unscaled measurement matrix; rows are lines, cells 're,im' split by ';'")
      ->required();
  rec->add_option("--phases", rec_flags.phases, "observed phase vector, one 're,im' per line")
      ->required();
  rec->add_option("--tau", rec_flags.tau, "assumed noise level on the phases");
  rec->add_option("--epsilon-policy", rec_flags.policy,
                  "theoretical[:delta] | fixed:v (oracle unavailable)");
  rec->add_option("--out", rec_flags.out, "output directory");
  rec->add_option("--opt-tol", rec_flags.opt_tol, "solver tolerance");
  rec->add_option("--consistency-tol", rec_flags.consistency_tol, "phase-consistency tolerance");
  rec->add_option("--seed", rec_flags.seed, "recorded in provenance only");

  RipFlags rip_flags;
  CLI::App* rip = app.add_subcommand("rip-estimate", "Estimate restricted isometry constants");
  rip->add_option("--n", rip_flags.n, "columns of the test matrix");
  rip->add_option("--s", rip_flags.s, "support size");
  rip->add_option("--m", rip_flags.m, "measurements (ignored with --identity)");
  rip->add_option("--mode", rip_flags.mode, "exhaustive | sampled:K");
  rip->add_option("--repeat", rip_flags.repeat, "independent matrix draws");
  rip->add_option("--seed", rip_flags.seed, "master seed (env PO_CS_SEED overrides)");
  rip->add_flag("--identity", rip_flags.identity, "use the identity matrix");
  rip->add_flag("--linearized", rip_flags.linearized,
                "measure the linearized phase-only operator of a random sparse signal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (pt->parsed()) return cmd_experiment(pt_flags, false);
    if (ns->parsed()) return cmd_experiment(ns_flags, true);
    if (rec->parsed()) return cmd_recover(rec_flags);
    if (rip->parsed()) return cmd_rip_estimate(rip_flags);
  } catch (const pocs::ResourceRefusal& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRefusal;
  } catch (const pocs::ParseError& e) {
    std::cerr << "error: line " << e.line_number << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const pocs::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const pocs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

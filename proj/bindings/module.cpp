#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <pocs/bpdn.hpp>
#include <pocs/linalg.hpp>
#include <pocs/linearization.hpp>
#include <pocs/rip.hpp>
#include <pocs/rng.hpp>
#include <pocs/sensing.hpp>
#include <pocs/types.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace py = pybind11;
using namespace pocs;

namespace {

SensingEnsemble make_ensemble(const ComplexMatrix& raw) {
    return SensingEnsemble(raw, Scaling::OverSqrtM);
}

py::dict solver_dict(const SolverReport& rep) {
    py::dict d;
    d["estimate"] = rep.estimate;
    d["residual_norm"] = rep.residual_norm;
    d["l1_norm"] = rep.l1_norm;
    d["outer_iters"] = rep.outer_iters;
    d["total_matvecs"] = rep.total_matvecs;
    d["status"] = std::string(to_string(rep.status));
    return d;
}

py::dict consistency_dict(const ConsistencyReport& rep) {
    py::dict d;
    d["consistent"] = rep.consistent;
    d["positivity_violations"] = rep.positivity_violations;
    d["h_inf"] = rep.h_inf;
    d["alpha_re_err"] = rep.alpha_re_err;
    d["alpha_im_err"] = rep.alpha_im_err;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Recovering sparse signals from the phases of complex Gaussian measurements.\n"
              "Raw matrices passed here are unscaled draws; the phase-only pipeline divides\n"
              "by sqrt(m) internally, matching the command-line tool's file convention.";

    m.attr("KAPPA") = kKappa;

    py::register_exception<Error>(m, "ToolkitError", PyExc_ValueError);

    m.def(
        "sample_gaussian",
        [](std::uint64_t master_seed, std::uint64_t stream_id, Index rows, Index cols) {
            RngStream rng(master_seed, stream_id);
            return sample_complex_gaussian(rng, rows, cols);
        },
        py::arg("master_seed"), py::arg("stream_id"), py::arg("rows"), py::arg("cols"),
        "Complex matrix with independent N(0,1) + i N(0,1) entries, reproducible from the seed "
        "pair.");

    m.def(
        "sample_sparse_signal",
        [](std::uint64_t master_seed, std::uint64_t stream_id, Index n, Index s) {
            RngStream rng(master_seed, stream_id);
            return sample_sparse_signal(rng, n, s);
        },
        py::arg("master_seed"), py::arg("stream_id"), py::arg("n"), py::arg("s"),
        "Real vector with exactly s Gaussian nonzeros on a uniform support.");

    m.def(
        "sample_disk_noise",
        [](std::uint64_t master_seed, std::uint64_t stream_id, Index m, double tau) {
            RngStream rng(master_seed, stream_id);
            return sample_disk_noise(rng, m, tau);
        },
        py::arg("master_seed"), py::arg("stream_id"), py::arg("m"), py::arg("tau"),
        "Entries drawn uniformly from the complex disk of radius tau.");

    m.def(
        "sign_c", [](const ComplexVector& v) { return sign_c(v); }, py::arg("v"),
        "Entrywise complex sign; zero stays zero.");

    m.def(
        "normalize_signal",
        [](const ComplexMatrix& raw, const RealVector& x) {
            NormalizedSignal out = normalize_signal(make_ensemble(raw), x);
            return py::make_tuple(out.xstar, out.scale_applied);
        },
        py::arg("raw"), py::arg("x"),
        "Rescales x to the representative whose measurements carry unit l1 mass per kappa "
        "sqrt(m); returns (xstar, scale_applied).");

    m.def(
        "measure_phase_only",
        [](const ComplexMatrix& raw, const RealVector& x, std::optional<ComplexVector> noise) {
            SensingEnsemble ens = make_ensemble(raw);
            ComplexVector eps = noise ? *noise : ComplexVector::Zero(ens.m());
            return measure_phase_only(ens, x, eps);
        },
        py::arg("raw"), py::arg("x"), py::arg("noise") = std::nullopt,
        "Observed phases sign_c(A x) + noise under the phase-only scaling.");

    m.def(
        "measure_linear",
        [](const ComplexMatrix& raw, const RealVector& x, std::optional<ComplexVector> noise) {
            SensingEnsemble ens(raw, Scaling::OverSqrt2M);
            ComplexVector eps = noise ? *noise : ComplexVector::Zero(ens.m());
            return measure_linear(ens, x, eps);
        },
        py::arg("raw"), py::arg("x"), py::arg("noise") = std::nullopt,
        "Linear measurements A x + noise under the baseline scaling A = raw / sqrt(2m).");

    m.def(
        "build_az",
        [](const ComplexMatrix& raw, const ComplexVector& z) {
            return build_Az(make_ensemble(raw), z).matrix;
        },
        py::arg("raw"), py::arg("z"),
        "The (m+2) x n real operator that sends the normalized signal to e1 when z holds its "
        "noiseless phases.");

    m.def("epsilon_bound", &epsilon_bound, py::arg("tau"), py::arg("delta"),
          "Fidelity radius sqrt(2) tau (1 + delta) / (1 - delta).");

    m.def("project_l1_ball", &project_l1_ball, py::arg("v"), py::arg("radius"),
          "Euclidean projection onto the l1 ball of the given radius.");

    m.def(
        "bpdn",
        [](const RealMatrix& B, const RealVector& y, double epsilon, double opt_tol,
           int max_outer_iters, int max_lasso_iters) {
            SolverConfig cfg;
            cfg.epsilon = epsilon;
            cfg.opt_tol = opt_tol;
            cfg.max_outer_iters = max_outer_iters;
            cfg.max_lasso_iters = max_lasso_iters;
            SolverReport rep = bpdn(B, y, cfg);
            return py::make_tuple(rep.estimate, solver_dict(rep));
        },
        py::arg("B"), py::arg("y"), py::arg("epsilon") = 0.0, py::arg("opt_tol") = 1e-6,
        py::arg("max_outer_iters") = 300, py::arg("max_lasso_iters") = 10000,
        "min ||u||_1 subject to ||B u - y|| <= epsilon; returns (estimate, report).");

    m.def(
        "recover",
        [](const ComplexMatrix& raw, const ComplexVector& z, double epsilon, double opt_tol,
           double consistency_tol) {
            SensingEnsemble ens = make_ensemble(raw);
            LinearizedOperator op = build_Az(ens, z);
            RealVector e1 = RealVector::Zero(op.matrix.rows());
            e1(0) = 1.0;
            SolverConfig cfg;
            cfg.epsilon = epsilon;
            cfg.opt_tol = opt_tol;
            SolverReport rep = bpdn(op.matrix, e1, cfg);
            py::dict report = solver_dict(rep);
            report["consistency"] =
                consistency_dict(phase_consistency_check(ens, z, rep.estimate, consistency_tol));
            return py::make_tuple(rep.estimate, report);
        },
        py::arg("raw"), py::arg("z"), py::arg("epsilon") = 0.0, py::arg("opt_tol") = 1e-6,
        py::arg("consistency_tol") = 1e-6,
        "End-to-end phase-only recovery: linearize the phases, then solve basis pursuit "
        "against e1.");

    m.def(
        "estimate_rip",
        [](const RealMatrix& A, Index s, const std::string& mode, long sample_count,
           std::uint64_t seed) {
            RipOptions opts;
            if (mode == "exhaustive") {
                opts.mode = RipOptions::Mode::Exhaustive;
            } else if (mode == "sampled") {
                opts.mode = RipOptions::Mode::Sampled;
                opts.sample_count = sample_count;
            } else {
                throw InvalidParameter("mode must be 'exhaustive' or 'sampled', got '" + mode +
                                       "'");
            }
            opts.seed = seed;
            RipEstimate est = estimate_rip(A, s, opts);
            py::dict d;
            d["order"] = est.order;
            d["delta"] = est.delta;
            d["sigma_min"] = est.sigma_min;
            d["sigma_max"] = est.sigma_max;
            d["supports_checked"] = est.supports_checked;
            d["sigma_min_support"] = est.sigma_min_support;
            d["sigma_max_support"] = est.sigma_max_support;
            return d;
        },
        py::arg("A"), py::arg("s"), py::arg("mode") = "exhaustive", py::arg("sample_count") = 0,
        py::arg("seed") = 0,
        "Restricted-isometry defect of s-column submatrices, exhaustively or by sampling.");

    m.def(
        "phase_consistency",
        [](const ComplexMatrix& raw, const ComplexVector& z, const RealVector& u, double tol) {
            return consistency_dict(phase_consistency_check(make_ensemble(raw), z, u, tol));
        },
        py::arg("raw"), py::arg("z"), py::arg("u"), py::arg("tol") = 1e-6,
        "Diagnostics for whether u explains the observed phases.");
}

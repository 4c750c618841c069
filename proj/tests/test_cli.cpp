#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <pocs/io.hpp>
#include <pocs/linalg.hpp>
#include <pocs/linearization.hpp>
#include <pocs/rng.hpp>
#include <pocs/sensing.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path make_temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("pocs_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Runs the installed binary through the shell; `prefix` can carry environment
// assignments (e.g. "PO_CS_SEED=9").
RunResult run_cli(const std::string& args, const std::string& prefix = "") {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / "pocs_cli_streams";
    fs::create_directories(dir);
    fs::path out_file = dir / ("out" + std::to_string(counter));
    fs::path err_file = dir / ("err" + std::to_string(counter));
    ++counter;

    std::string cmd = prefix;
    if (!cmd.empty()) cmd += " ";
    cmd += std::string(POCS_CLI_PATH) + " " + args + " > " + out_file.string() + " 2> " +
           err_file.string();
    int status = std::system(cmd.c_str());

    RunResult res;
    if (status != -1 && WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    res.out = slurp(out_file);
    res.err = slurp(err_file);
    return res;
}

}  // namespace

TEST_CASE("phase transition writes a table and a chart") {
    fs::path dir = make_temp_dir("pt_basic");
    RunResult res = run_cli("phase-transition --n 24 --s 2 --m-grid 8:24:8 --trials 5 --seed 7 --out " +
                            dir.string());
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(dir / "phase_transition.csv"));
    CHECK(fs::exists(dir / "phase_transition.svg"));
    CHECK(res.out.find("master_seed=7") != std::string::npos);

    std::string csv = slurp(dir / "phase_transition.csv");
    CHECK(csv.find("m,m_over_s,tau,arm,success_rate,mean_snr_db,std_snr_db,trials,seed") !=
          std::string::npos);
    int data_rows = 0;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'm') ++data_rows;
    CHECK(data_rows == 6);  // 3 measurement counts x 2 arms
}

TEST_CASE("identical invocations produce identical bytes") {
    fs::path a = make_temp_dir("pt_rerun_a");
    fs::path b = make_temp_dir("pt_rerun_b");
    std::string args = "phase-transition --n 20 --s 2 --m-grid 10,16 --trials 4 --seed 11 --out ";
    REQUIRE(run_cli(args + a.string()).exit_code == 0);
    REQUIRE(run_cli(args + b.string()).exit_code == 0);
    CHECK(slurp(a / "phase_transition.csv") == slurp(b / "phase_transition.csv"));
    CHECK(slurp(a / "phase_transition.svg") == slurp(b / "phase_transition.svg"));
}

TEST_CASE("the worker count changes nothing but the wall clock") {
    fs::path a = make_temp_dir("pt_jobs_a");
    fs::path b = make_temp_dir("pt_jobs_b");
    std::string base = "phase-transition --n 20 --s 2 --m-grid 10,16 --trials 4 --seed 3 ";
    REQUIRE(run_cli(base + "--jobs 1 --out " + a.string()).exit_code == 0);
    REQUIRE(run_cli(base + "--jobs 3 --out " + b.string()).exit_code == 0);
    CHECK(slurp(a / "phase_transition.csv") == slurp(b / "phase_transition.csv"));
}

TEST_CASE("the seed environment variable overrides the flag") {
    fs::path a = make_temp_dir("pt_env_a");
    fs::path b = make_temp_dir("pt_env_b");
    std::string base = "phase-transition --n 16 --s 2 --m-grid 12 --trials 3 ";
    REQUIRE(run_cli(base + "--seed 7 --out " + a.string(), "PO_CS_SEED=9").exit_code == 0);
    REQUIRE(run_cli(base + "--seed 9 --out " + b.string()).exit_code == 0);
    std::string csv_a = slurp(a / "phase_transition.csv");
    CHECK(csv_a.find("master_seed=9") != std::string::npos);
    CHECK(csv_a == slurp(b / "phase_transition.csv"));
}

TEST_CASE("zero trials is a validation error") {
    RunResult res = run_cli("phase-transition --n 16 --s 2 --m-grid 8 --trials 0");
    CHECK(res.exit_code == 2);
    CHECK_FALSE(res.err.empty());
}

TEST_CASE("a malformed measurement grid is a validation error") {
    RunResult res = run_cli("phase-transition --m-grid 5:x:2 --trials 2");
    CHECK(res.exit_code == 2);
}

TEST_CASE("noise sweep runs and labels its noise levels") {
    fs::path dir = make_temp_dir("ns_basic");
    RunResult res = run_cli(
        "noise-sweep --n 16 --s 2 --m-grid 12 --tau-grid 0.01pi --trials 3 --seed 5 --out " +
        dir.string());
    CHECK(res.exit_code == 0);
    std::string csv = slurp(dir / "noise_sweep.csv");
    CHECK(csv.find("po-cs") != std::string::npos);
    CHECK(csv.find("noise-sweep") != std::string::npos);
}

TEST_CASE("noise levels at or past pi are rejected") {
    CHECK(run_cli("noise-sweep --n 16 --s 2 --m-grid 12 --tau-grid 3.2 --trials 2").exit_code == 2);
    CHECK(run_cli("noise-sweep --n 16 --s 2 --m-grid 12 --tau-grid 1pi --trials 2").exit_code == 2);
}

TEST_CASE("recover round-trips a generated instance") {
    using namespace pocs;
    fs::path dir = make_temp_dir("recover_ok");

    const Index n = 14, s = 2, m = 14;  // m/s = 7, comfortably past the transition
    RngStream rng(2024, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, m, n, Scaling::OverSqrtM);
    RealVector x = sample_sparse_signal(rng, n, s);
    RealVector xstar = normalize_signal(ens, x).xstar;
    ComplexVector z = measure_phase_only(ens, xstar, ComplexVector::Zero(m));

    fs::path matrix_path = dir / "matrix.csv";
    fs::path phases_path = dir / "phases.csv";
    write_complex_matrix(matrix_path.string(), ens.raw());
    write_complex_vector(phases_path.string(), z);

    RunResult res = run_cli("recover --matrix " + matrix_path.string() + " --phases " +
                            phases_path.string() + " --epsilon-policy fixed:0 --out " + dir.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(dir / "xhat.csv"));
    REQUIRE(fs::exists(dir / "report.json"));

    RealVector xhat = read_real_vector((dir / "xhat.csv").string());
    REQUIRE(xhat.size() == n);
    double rel = norm_l2(RealVector(xhat - xstar)) / norm_l2(xstar);
    CHECK(rel <= 1e-3);

    std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"consistent\": true") != std::string::npos);
    CHECK(report.find("\"status\": \"Converged\"") != std::string::npos);
    CHECK(res.out.find("consistent=yes") != std::string::npos);
}

TEST_CASE("recover rejects a phase vector of the wrong length") {
    using namespace pocs;
    fs::path dir = make_temp_dir("recover_len");
    RngStream rng(7, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, 6, 4, Scaling::OverSqrtM);
    write_complex_matrix((dir / "matrix.csv").string(), ens.raw());
    write_complex_vector((dir / "phases.csv").string(), ComplexVector::Ones(7));

    RunResult res = run_cli("recover --matrix " + (dir / "matrix.csv").string() + " --phases " +
                            (dir / "phases.csv").string() + " --out " + dir.string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("recover reports the offending line of a corrupt input") {
    fs::path dir = make_temp_dir("recover_corrupt");
    std::ofstream((dir / "matrix.csv").string()) << "1,0;2,0\n1,0;not-a-number,0\n";
    std::ofstream((dir / "phases.csv").string()) << "1,0\n0,1\n";
    RunResult res = run_cli("recover --matrix " + (dir / "matrix.csv").string() + " --phases " +
                            (dir / "phases.csv").string() + " --out " + dir.string());
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("line") != std::string::npos);
}

TEST_CASE("recover cannot use the oracle radius") {
    fs::path dir = make_temp_dir("recover_oracle");
    std::ofstream((dir / "matrix.csv").string()) << "1,0\n0,1\n";
    std::ofstream((dir / "phases.csv").string()) << "1,0\n1,0\n";
    RunResult res = run_cli("recover --matrix " + (dir / "matrix.csv").string() + " --phases " +
                            (dir / "phases.csv").string() + " --epsilon-policy oracle --out " +
                            dir.string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("a missing input file is an io error") {
    RunResult res = run_cli("recover --matrix /nonexistent/matrix.csv --phases /nonexistent/z.csv");
    CHECK(res.exit_code == 1);
}

TEST_CASE("rip-estimate on the identity reports a vanishing defect") {
    RunResult res = run_cli("rip-estimate --identity --n 8 --s 2");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("delta=0") != std::string::npos);
    CHECK(res.out.find("median_delta=0") != std::string::npos);
}

TEST_CASE("exhaustive enumeration past the cap is refused, not attempted") {
    RunResult res = run_cli("rip-estimate --n 30 --s 8 --m 10 --mode exhaustive");
    CHECK(res.exit_code == 3);
    CHECK(res.err.find("5852925") != std::string::npos);
}

TEST_CASE("sampled mode handles support counts the cap would refuse") {
    RunResult res = run_cli("rip-estimate --n 20 --s 2 --m 10 --mode sampled:20");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("supports_checked=20") != std::string::npos);
}

TEST_CASE("linearized rip estimates stay below the recovery threshold") {
    RunResult res = run_cli("rip-estimate --n 12 --s 2 --m 72 --mode exhaustive --linearized --repeat 5");
    REQUIRE(res.exit_code == 0);
    auto pos = res.out.find("median_delta=");
    REQUIRE(pos != std::string::npos);
    double median = std::strtod(res.out.c_str() + pos + 13, nullptr);
    CHECK(median < 1.0 / std::sqrt(2.0));
}

TEST_CASE("bad command lines exit with the validation code") {
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);  // a subcommand is required
    CHECK(run_cli("rip-estimate --mode nonsense").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("recover --help").exit_code == 0);
}

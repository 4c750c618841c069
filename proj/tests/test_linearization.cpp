#include "doctest.h"

#include <pocs/linalg.hpp>
#include <pocs/linearization.hpp>
#include <pocs/rip.hpp>
#include <pocs/rng.hpp>
#include <pocs/sensing.hpp>

#include <algorithm>
#include <cmath>
#include <complex>

using namespace pocs;

namespace {

struct Instance {
    SensingEnsemble ens;
    RealVector xstar;
    ComplexVector z;
};

Instance noiseless_instance(std::uint64_t seed, Index m, Index n, Index s) {
    RngStream rng(seed, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, m, n, Scaling::OverSqrtM);
    RealVector x = sample_sparse_signal(rng, n, s);
    RealVector xstar = normalize_signal(ens, x).xstar;
    ComplexVector z = measure_phase_only(ens, xstar, ComplexVector::Zero(m));
    return Instance{std::move(ens), std::move(xstar), std::move(z)};
}

}  // namespace

TEST_CASE("normalization pins the l1 mass of the measurements") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Instance inst = noiseless_instance(seed, 48, 10, 4);
        const double target = kKappa * std::sqrt(48.0);
        double got = norm_l1(matvec(inst.ens.matrix(), inst.xstar));
        CHECK(std::abs(got - target) / target <= 1e-12);
    }
}

TEST_CASE("normalization is idempotent") {
    Instance inst = noiseless_instance(11, 32, 8, 3);
    NormalizedSignal again = normalize_signal(inst.ens, inst.xstar);
    CHECK(again.scale_applied == doctest::Approx(1.0).epsilon(1e-12));
    for (Index i = 0; i < inst.xstar.size(); ++i)
        CHECK(again.xstar(i) == doctest::Approx(inst.xstar(i)).epsilon(1e-12));
}

TEST_CASE("normalized representatives of unit signals have near-unit norm on average") {
    RngStream rng(12, 0);
    const Index m = 64, n = 8;
    double acc = 0.0;
    const int reps = 10000;
    for (int rep = 0; rep < reps; ++rep) {
        SensingEnsemble ens = SensingEnsemble::sample(rng, m, n, Scaling::OverSqrtM);
        RealVector x = sample_sparse_signal(rng, n, 3);
        x /= norm_l2(x);
        acc += norm_l2(normalize_signal(ens, x).xstar);
    }
    CHECK(std::abs(acc / reps - 1.0) <= 0.02);
}

TEST_CASE("signals the ensemble annihilates cannot be normalized") {
    ComplexMatrix raw = ComplexMatrix::Zero(4, 3);
    SensingEnsemble ens(raw, Scaling::OverSqrtM);
    RealVector x = RealVector::Ones(3);
    CHECK_THROWS_AS(normalize_signal(ens, x), DegenerateInput);
    CHECK_THROWS_AS(normalize_signal(ens, RealVector::Zero(3)), DegenerateInput);
}

TEST_CASE("alpha of the zero phase vector is zero") {
    RngStream rng(13, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, 6, 4, Scaling::OverSqrtM);
    ComplexVector alpha = build_alpha(ens, ComplexVector::Zero(6));
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(alpha(i)) == 0.0);
}

TEST_CASE("alpha matches its definition entry by entry") {
    RngStream rng(14, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, 5, 3, Scaling::OverSqrtM);
    ComplexVector z(5);
    for (Index k = 0; k < 5; ++k) z(k) = Complex(rng.normal(), rng.normal());

    ComplexVector alpha = build_alpha(ens, z);
    REQUIRE(alpha.size() == 3);
    const double denom = kKappa * std::sqrt(5.0);
    for (Index l = 0; l < 3; ++l) {
        Complex want(0.0, 0.0);
        for (Index k = 0; k < 5; ++k) want += std::conj(ens.matrix()(k, l)) * z(k);
        want /= denom;
        CHECK(std::abs(alpha(l) - want) <= 1e-13);
    }
}

TEST_CASE("noiseless alpha is aligned with the normalized signal") {
    Instance inst = noiseless_instance(15, 40, 9, 3);
    ComplexVector alpha = build_alpha(inst.ens, inst.z);
    double re_dot = 0.0, im_dot = 0.0;
    for (Index l = 0; l < alpha.size(); ++l) {
        re_dot += alpha(l).real() * inst.xstar(l);
        im_dot += alpha(l).imag() * inst.xstar(l);
    }
    CHECK(std::abs(re_dot - 1.0) <= 1e-10);
    CHECK(std::abs(im_dot) <= 1e-10);
}

TEST_CASE("H matches the scalar formula Im(conj(z_k) A_kl)") {
    RngStream rng(16, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, 6, 4, Scaling::OverSqrtM);
    ComplexVector z(6);
    for (Index k = 0; k < 6; ++k) z(k) = Complex(rng.normal(), rng.normal());

    RealMatrix h = build_H(ens, z);
    REQUIRE(h.rows() == 6);
    REQUIRE(h.cols() == 4);
    for (Index k = 0; k < 6; ++k)
        for (Index l = 0; l < 4; ++l) {
            double want = std::imag(std::conj(z(k)) * ens.matrix()(k, l));
            CHECK(std::abs(h(k, l) - want) <= 1e-14);
        }
}

TEST_CASE("an all-ones phase vector reduces H to the imaginary part of A") {
    RngStream rng(17, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, 5, 3, Scaling::OverSqrtM);
    RealMatrix h = build_H(ens, ComplexVector::Ones(5));
    for (Index k = 0; k < 5; ++k)
        for (Index l = 0; l < 3; ++l)
            CHECK(h(k, l) == doctest::Approx(ens.matrix()(k, l).imag()).epsilon(1e-15));
}

TEST_CASE("noiseless phases annihilate the signal through H") {
    Instance inst = noiseless_instance(18, 56, 12, 4);
    RealMatrix h = build_H(inst.ens, inst.z);
    RealVector hx = matvec(h, inst.xstar);
    for (Index k = 0; k < hx.size(); ++k)
        CHECK(std::abs(hx(k)) <= 1e-10 * (1.0 + norm_l2(inst.xstar)));
}

TEST_CASE("the stacked operator has shape (m+2) x n and the documented rows") {
    RngStream rng(19, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, 3, 2, Scaling::OverSqrtM);
    ComplexVector z(3);
    for (Index k = 0; k < 3; ++k) z(k) = sign_c(Complex(rng.normal(), rng.normal()));

    LinearizedOperator op = build_Az(ens, z);
    REQUIRE(op.matrix.rows() == 5);
    REQUIRE(op.matrix.cols() == 2);
    CHECK(op.m == 3);
    CHECK(op.n == 2);

    ComplexVector alpha = build_alpha(ens, z);
    RealMatrix h = build_H(ens, z);
    for (Index l = 0; l < 2; ++l) {
        CHECK(op.matrix(0, l) == doctest::Approx(alpha(l).real()).epsilon(1e-15));
        CHECK(op.matrix(1, l) == doctest::Approx(alpha(l).imag()).epsilon(1e-15));
        for (Index k = 0; k < 3; ++k)
            CHECK(op.matrix(2 + k, l) == doctest::Approx(h(k, l)).epsilon(1e-15));
    }
    for (Index k = 0; k < 3; ++k) {
        CHECK(op.z(k).real() == z(k).real());
        CHECK(op.z(k).imag() == z(k).imag());
    }
}

TEST_CASE("noiseless linearization maps the normalized signal to e1") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        RngStream rng(seed, 0);
        Index n = 4 + static_cast<Index>(rng.uniform_below(20));
        Index s = 1 + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(std::min<Index>(n, 5))));
        Index m = n + static_cast<Index>(rng.uniform_below(40));

        SensingEnsemble ens = SensingEnsemble::sample(rng, m, n, Scaling::OverSqrtM);
        RealVector x = sample_sparse_signal(rng, n, s);
        RealVector xstar = normalize_signal(ens, x).xstar;
        ComplexVector z = measure_phase_only(ens, xstar, ComplexVector::Zero(m));

        LinearizedOperator op = build_Az(ens, z);
        RealVector lhs = matvec(op.matrix, xstar);
        lhs(0) -= 1.0;
        CHECK(norm_l2(lhs) <= 1e-10 * (1.0 + norm_l2(xstar)));
    }
}

TEST_CASE("the stacked operator depends on the phases alone") {
    RngStream rng(20, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, 24, 6, Scaling::OverSqrtM);
    RealVector x = sample_sparse_signal(rng, 6, 2);
    ComplexVector z1 = measure_phase_only(ens, x, ComplexVector::Zero(24));

    // same phases in, bit-identical operator out
    RealMatrix m1 = build_Az(ens, z1).matrix;
    RealMatrix m1_again = build_Az(ens, z1).matrix;
    for (Index i = 0; i < m1.rows(); ++i)
        for (Index j = 0; j < m1.cols(); ++j) CHECK(m1(i, j) == m1_again(i, j));

    // a rescaled signal reproduces the operator up to the rounding of A(3x)
    ComplexVector z2 = measure_phase_only(ens, RealVector(3.0 * x), ComplexVector::Zero(24));
    RealMatrix m2 = build_Az(ens, z2).matrix;
    for (Index i = 0; i < m1.rows(); ++i)
        for (Index j = 0; j < m1.cols(); ++j) CHECK(std::abs(m1(i, j) - m2(i, j)) <= 1e-13);
}

TEST_CASE("consistency check accepts the true signal and counts sign flips") {
    Instance inst = noiseless_instance(21, 36, 8, 3);

    ConsistencyReport ok = phase_consistency_check(inst.ens, inst.z, inst.xstar, 1e-8);
    CHECK(ok.consistent);
    CHECK(ok.positivity_violations == 0);
    CHECK(ok.h_inf <= 1e-8);
    CHECK(ok.alpha_re_err <= 1e-8);
    CHECK(ok.alpha_im_err <= 1e-8);

    ConsistencyReport flipped =
        phase_consistency_check(inst.ens, inst.z, RealVector(-inst.xstar), 1e-8);
    CHECK_FALSE(flipped.consistent);
    CHECK(flipped.positivity_violations == inst.ens.m());
}

TEST_CASE("random vectors are inconsistent with observed phases") {
    Instance inst = noiseless_instance(22, 48, 10, 3);
    RngStream rng(23, 0);
    int consistent = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        RealVector u(10);
        for (Index i = 0; i < 10; ++i) u(i) = rng.normal();
        ConsistencyReport rep_out = phase_consistency_check(inst.ens, inst.z, u, 1e-8);
        consistent += rep_out.consistent;
    }
    CHECK(consistent == 0);
}

TEST_CASE("fidelity radius formula") {
    CHECK(epsilon_bound(0.0, 0.2) == 0.0);
    CHECK(epsilon_bound(0.1, 0.0) == doctest::Approx(std::sqrt(2.0) * 0.1).epsilon(1e-9));
    // sqrt(2) * 0.05 * 1.2 / 0.8
    CHECK(epsilon_bound(0.05, 0.2) == doctest::Approx(0.1060660172).epsilon(1e-8));
    CHECK_THROWS_AS(epsilon_bound(0.1, 1.0), InvalidParameter);
    CHECK_THROWS_AS(epsilon_bound(0.1, 1.5), InvalidParameter);
    CHECK_THROWS_AS(epsilon_bound(-0.1, 0.2), InvalidParameter);
}

TEST_CASE("noisy deviations stay within the fidelity radius scaled by the measured isometry") {
    const Index n = 8, s = 2, m = 48;
    const double tau = 0.05;
    RngStream rng(24, 0);
    SensingEnsemble ens = SensingEnsemble::sample(rng, m, n, Scaling::OverSqrtM);
    RealVector x = sample_sparse_signal(rng, n, s);
    RealVector xstar = normalize_signal(ens, x).xstar;
    ComplexVector z0 = measure_phase_only(ens, xstar, ComplexVector::Zero(m));

    RipEstimate rip = rip_of_linearized(ens, x, s);
    REQUIRE(rip.delta < 1.0);
    const double radius = epsilon_bound(tau, rip.delta);

    for (int rep = 0; rep < 100; ++rep) {
        ComplexVector z = z0 + sample_disk_noise(rng, m, tau);
        RealVector dev = matvec(build_Az(ens, z).matrix, xstar);
        dev(0) -= 1.0;
        CHECK(norm_l2(dev) <= radius);
    }
}

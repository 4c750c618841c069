import math

import numpy as np
import pytest

import pocs


def test_kappa_value():
    assert pocs.KAPPA == pytest.approx(math.sqrt(math.pi / 2), rel=1e-15)


def test_sampling_is_deterministic():
    a = pocs.sample_gaussian(7, 3, 5, 4)
    b = pocs.sample_gaussian(7, 3, 5, 4)
    np.testing.assert_array_equal(a, b)
    c = pocs.sample_gaussian(7, 4, 5, 4)
    assert not np.array_equal(a, c)


def test_sparse_signal_support():
    x = pocs.sample_sparse_signal(1, 0, 50, 6)
    assert x.shape == (50,)
    assert np.count_nonzero(x) == 6


def test_sign_c_handles_zero():
    z = pocs.sign_c(np.array([3 + 4j, 0.0 + 0.0j]))
    assert z[0] == pytest.approx(0.6 + 0.8j, abs=1e-14)
    assert z[1] == 0


def test_epsilon_bound():
    assert pocs.epsilon_bound(0.0, 0.2) == 0.0
    assert pocs.epsilon_bound(0.1, 0.0) == pytest.approx(math.sqrt(2) * 0.1, rel=1e-12)
    with pytest.raises(pocs.ToolkitError):
        pocs.epsilon_bound(0.1, 1.0)


def test_project_l1_ball():
    p = pocs.project_l1_ball(np.array([3.0, 1.0]), 2.0)
    np.testing.assert_allclose(p, [2.0, 0.0], atol=1e-12)


def test_build_az_shape():
    raw = pocs.sample_gaussian(11, 0, 20, 6)
    x = pocs.sample_sparse_signal(11, 1, 6, 2)
    xstar, scale = pocs.normalize_signal(raw, x)
    assert scale > 0
    z = pocs.measure_phase_only(raw, xstar)
    az = pocs.build_az(raw, z)
    assert az.shape == (22, 6)
    # the normalized signal is the preimage of e1
    e1 = np.zeros(22)
    e1[0] = 1.0
    assert np.linalg.norm(az @ xstar - e1) <= 1e-10 * (1 + np.linalg.norm(xstar))


def test_bpdn_identity():
    y = np.array([0.5, -1.5, 2.0])
    estimate, report = pocs.bpdn(np.eye(3), y)
    assert report["status"] == "Converged"
    np.testing.assert_allclose(estimate, y, atol=1e-6)


def test_end_to_end_recovery():
    raw = pocs.sample_gaussian(21, 0, 64, 12)
    x = pocs.sample_sparse_signal(21, 1, 12, 2)
    xstar, _ = pocs.normalize_signal(raw, x)
    z = pocs.measure_phase_only(raw, xstar)

    xhat, report = pocs.recover(raw, z)
    assert report["status"] == "Converged"
    assert report["consistency"]["consistent"]
    rel = np.linalg.norm(xhat - xstar) / np.linalg.norm(xstar)
    assert rel <= 1e-4


def test_estimate_rip_identity():
    est = pocs.estimate_rip(np.eye(8), 2)
    assert est["delta"] <= 1e-12
    assert est["supports_checked"] == 28

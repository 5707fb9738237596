import time

import numpy as np
import pytest

from biortho.exceptions import ComplexSpectrum, NoPositiveSigning, ZeroDenominator
from biortho.observables import Observable, expectation_pure
from biortho.pt import (
    c_operator,
    metric_expectation,
    metric_from_c,
    metric_from_eigs,
    parity_operator,
    phase_scan,
    pt_check,
    pt_eigenstate_check,
)
from biortho.system import build_system, components

from conftest import SX, random_complex, real_spectrum_matrix, sx_igz


def test_metric_properties():
    s = build_system(sx_igz(0.6))
    m = metric_from_eigs(s)
    assert np.allclose(m.g, m.g.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(m.g).min() > 0
    assert m.conjugation_defect <= 1e-10
    # (U U^H)^-1 closed form for this family: (1 - i gamma sigma_y) / (1 - gamma^2)
    assert np.allclose(m.g, np.array([[1, 0.6j], [-0.6j, 1]]) / 0.8)
    h = build_system(np.diag([1.0, 2.0, 3.0]))
    assert np.allclose(metric_from_eigs(h).g, np.eye(3))
    with pytest.raises(ComplexSpectrum):
        metric_from_eigs(build_system(sx_igz(1.5)))


def test_metric_condition_diverges_towards_ep():
    conds = [metric_from_eigs(build_system(sx_igz(g))).condition_number for g in (0.5, 0.9, 0.99, 0.999)]
    assert all(a < b for a, b in zip(conds, conds[1:]))


def test_dual_path_expectations(rng):
    for _ in range(30):
        n = rng.integers(2, 6)
        s = build_system(real_spectrum_matrix(rng, n))
        m = metric_from_eigs(s)
        obs = Observable(s, random_complex(rng, n))
        psi = rng.normal(size=n) + 1j * rng.normal(size=n)
        a = expectation_pure(obs, components(s, psi))
        b = metric_expectation(m, obs.ambient, psi)
        assert abs(a - b) <= 1e-9 * max(1, abs(a))
    s = build_system(sx_igz(0.6))
    assert np.isclose(metric_expectation(metric_from_eigs(s), s.hamiltonian, s.phi[:, 1]), -0.8)
    with pytest.raises(ZeroDenominator):
        metric_expectation(np.zeros((2, 2)), np.eye(2), np.ones(2))


def test_parity():
    assert np.array_equal(parity_operator(2), SX)
    for n in range(1, 17):
        p = parity_operator(n)
        assert np.array_equal(p @ p, np.eye(n))
    assert parity_operator(3)[1, 1] == 1


def test_pt_checks():
    ok, d = pt_check(sx_igz(0.6), SX)
    assert ok and d <= 1e-15
    ok, d = pt_check(np.diag([1 + 1j, 2]), SX)
    assert not ok and d > 0.1
    assert pt_eigenstate_check(build_system(sx_igz(0.6)), SX) == [True, True]
    assert pt_eigenstate_check(build_system(sx_igz(1.5)), SX) == [False, False]
    assert all(pt_eigenstate_check(build_system(np.array([[1.0, 0.5], [0.5, -1.0]])), np.eye(2)))


def test_c_operator():
    s = build_system(sx_igz(0.6))
    C, signs = c_operator(s, SX)
    assert signs in ([1, -1], [-1, 1])
    assert np.linalg.norm(C @ C - np.eye(2)) <= 1e-10
    assert np.linalg.norm(C @ s.hamiltonian - s.hamiltonian @ C) <= 1e-10
    # the CPT metric coincides with the eigenvector metric here
    mc = metric_from_c(C, SX)
    assert np.allclose(mc.g, metric_from_eigs(s).g, atol=1e-10)
    psi = np.array([0.3 + 0.1j, -0.7j])
    F = np.array([[0.2, 1j], [0.5, -1.0]])
    assert abs(metric_expectation(mc, F, psi) - expectation_pure(Observable(s, s.chi.conj().T @ F @ s.phi), components(s, psi))) <= 1e-9
    h = build_system(np.diag([3.0, 2.0, 1.0]))
    C, signs = c_operator(h, np.eye(3))
    assert signs == [1, 1, 1] and np.allclose(C, np.eye(3))


def test_c_operator_no_signing():
    # with P = sigma_z only C = +-1 makes C P Hermitian, and +-sigma_z is indefinite
    s = build_system(sx_igz(0.6))
    with pytest.raises(NoPositiveSigning) as exc:
        c_operator(s, np.diag([1.0, -1.0]))
    assert exc.value.best_signs == [1, 1]
    assert np.isclose(exc.value.best_min_eig, -1.0)


def test_phase_scan():
    rep = phase_scan("sx-igz", [0, 0.2, 0.4, 0.6, 0.8])
    assert rep.classification == ("unbroken",) * 5
    rep = phase_scan("sx-igz", [1.2, 1.5, 2.0])
    assert rep.classification == ("broken",) * 3
    rep = phase_scan("sx-igz", [1 - 1e-6, 1.0, 1 + 1e-6])
    assert rep.classification == ("exceptional",) * 3
    t0 = time.perf_counter()
    grid = np.linspace(0, 2, 41)
    a = phase_scan("sx-igz", grid)
    b = phase_scan(sx_igz, grid, max_workers=4)
    assert a.classification == b.classification
    assert time.perf_counter() - t0 < 2.0
    assert [a.classification[i] for i in a.transitions()] == ["exceptional", "broken"]
    with pytest.raises(ValueError):
        phase_scan("nope", grid)


def test_antilinear_reality(rng):
    P = parity_operator(4)
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        K = 0.5 * (a + P @ a.conj() @ P)
        assert pt_check(K, P)[0]
        try:
            s = build_system(K)
        except Exception:
            continue
        if all(pt_eigenstate_check(s, P)):
            assert np.abs(np.asarray(s.kappa).imag).max() <= 1e-9
        else:
            assert np.abs(np.asarray(s.kappa).imag).max() > 1e-9

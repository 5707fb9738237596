"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines are printed live) or directly with
``python3 tests/test_acceptance.py``.
"""

import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from biortho import (  # noqa: E402
    Observable,
    build_system,
    check_unitarity,
    components,
    deformed_pauli,
    displacement_operator,
    eig_general,
    evolution_operator,
    expectation_pure,
    first_order,
    first_order_residual,
    fs_line_element,
    geometric_identity_defect,
    metric_expectation,
    metric_from_eigs,
    norm_trajectory,
    overlap_distance,
    phase_scan,
    probabilities,
    projectors,
    reconstruct_hamiltonian,
    richardson_validate,
    state_from_coeffs,
    tensor_observable,
    tensor_systems,
    thermal_state,
    von_neumann_entropy,
    young_truncation,
)
from biortho.exceptions import ComplexSpectrum  # noqa: E402
from biortho.probability import bloch_state  # noqa: E402

from conftest import SZ, random_complex, real_spectrum_matrix, sx_igz  # noqa: E402


def _line(num, ok, title, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {title} | {detail}"


def _fmt(x):
    return f"{x:.3e}"


@lru_cache(maxsize=1)
def _random_suite():
    rng = np.random.default_rng(2024)
    out = []
    while len(out) < 500:
        n = int(rng.integers(2, 13))
        out.append(build_system(random_complex(rng, n)))
    return out


def criterion_1():
    worst = 0.0
    for g in (0.2, 0.6, 0.9):
        kap = build_system(sx_igz(g)).kappa
        r = np.sqrt(1 - g * g)
        worst = max(worst, abs(kap[0] - r), abs(kap[1] + r))
    return worst <= 1e-12, "eigenvalues of sx - i g sz", f"max error {_fmt(worst)} (tol 1e-12)"


def criterion_2():
    bi = comp = 0.0
    for s in _random_suite():
        bi = max(bi, np.abs(np.asarray(s.chi).conj().T @ s.phi - np.eye(s.dim)).max())
        comp = max(comp, np.linalg.norm(sum(projectors(s)) - np.eye(s.dim)))
    ok = bi <= 1e-9 and comp <= 1e-9
    return ok, "biorthonormality + completeness (500 matrices)", f"max biortho {_fmt(bi)}, completeness {_fmt(comp)} (tol 1e-9)"


def criterion_3():
    rec = alg = 0.0
    for s in _random_suite():
        rec = max(rec, reconstruct_hamiltonian(s)[1])
        ps = projectors(s)
        for n in range(s.dim):
            for m in range(s.dim):
                ref = ps[n] if n == m else 0.0
                alg = max(alg, np.abs(ps[n] @ ps[m] - ref).max())
    ok = rec <= 1e-10 and alg <= 1e-10
    return ok, "spectral reconstruction + projector algebra", f"rel recon {_fmt(rec)}, algebra {_fmt(alg)} (tol 1e-10)"


def criterion_4():
    rng = np.random.default_rng(4)
    angles = np.column_stack([rng.uniform(0, np.pi, 100), rng.uniform(0, 2 * np.pi, 100)])
    exp_err = gdep = comm = 0.0
    base = None
    for g in (0.0, 0.3, 0.6, 0.9):
        s = build_system(sx_igz(g))
        sx, sy, sz = deformed_pauli(s)
        for a, b, c in ((sx, sy, sz), (sy, sz, sx), (sz, sx, sy)):
            comm = max(comm, np.abs(a.ambient @ b.ambient - b.ambient @ a.ambient - 2j * c.ambient).max())
        vals = np.array(
            [[expectation_pure(o, bloch_state(s, th, ph)) for o in (sx, sy, sz)] for th, ph in angles]
        )
        ref = np.column_stack(
            [np.sin(angles[:, 0]) * np.cos(angles[:, 1]), np.sin(angles[:, 0]) * np.sin(angles[:, 1]), np.cos(angles[:, 0])]
        )
        exp_err = max(exp_err, np.abs(vals - ref).max())
        if base is None:
            base = vals
        gdep = max(gdep, np.abs(vals - base).max())
    ok = exp_err <= 1e-10 and gdep <= 1e-10 and comm <= 1e-10
    detail = f"expectation {_fmt(exp_err)}, gamma dependence {_fmt(gdep)}, su(2) {_fmt(comm)} (tol 1e-10)"
    return ok, "deformed Pauli expectations", detail


def criterion_5():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(20):
        g1, g2 = rng.uniform(-0.9, 0.9, 2)
        A, B = build_system(sx_igz(g1)), build_system(sx_igz(g2))
        AB = tensor_systems(A, B)
        for ia, ib in ((2, 2), (0, 0)):
            op = tensor_observable(deformed_pauli(A)[ia], deformed_pauli(B)[ib], AB)
            ev = np.sort(eig_general(op.ambient).eigenvalues.real)
            worst = max(worst, np.abs(ev - [-1, -1, 1, 1]).max())
    return worst <= 1e-10, "Ising sz (x) sz eigenvalues", f"max error {_fmt(worst)} (tol 1e-10)"


def criterion_6():
    rng = np.random.default_rng(6)
    sums = neg = dist = homog = 0.0
    for k in range(10):
        n = int(rng.integers(2, 9))
        s = build_system(random_complex(rng, n))
        for a in range(n):
            for b in range(n):
                if a != b:
                    ea = state_from_coeffs(s, np.eye(n)[a])
                    eb = state_from_coeffs(s, np.eye(n)[b])
                    dist = max(dist, abs(overlap_distance(s, ea, eb).s - np.pi))
        for _ in range(1000):
            psi = rng.normal(size=n) + 1j * rng.normal(size=n)
            st = components(s, psi)
            p = probabilities(s, st)
            sums = max(sums, abs(p.sum() - 1))
            neg = min(neg, p.min())
            lam = rng.normal() + 1j * rng.normal()
            homog = max(homog, np.abs(probabilities(s, components(s, lam * psi)) - p).max())
    ok = sums <= 1e-10 and neg >= 0 and dist <= 1e-10 and homog <= 1e-12
    detail = f"|sum-1| {_fmt(sums)}, min p {neg:.1e}, |s-pi| {_fmt(dist)}, rescaling {_fmt(homog)}"
    return ok, "probability rules (1e4 states)", detail


def criterion_7():
    rng = np.random.default_rng(7)
    h = 1e-4
    worst = 0.0
    for g in (0.0, 0.4, 0.8):
        s = build_system(sx_igz(g))
        for _ in range(50):
            th, ph = rng.uniform(0.2, np.pi - 0.2), rng.uniform(0, 2 * np.pi)
            dth, dph = h * rng.normal(size=2)

            def c(t, p):
                return np.asarray(bloch_state(s, t, p).coeffs)

            # central-difference differential of the state along (dth, dph)
            dxi = c(th + dth / 2, ph + dph / 2) - c(th - dth / 2, ph - dph / 2)
            ds2 = fs_line_element(s, bloch_state(s, th, ph), dxi)
            ref = 0.25 * (dth**2 + np.sin(th) ** 2 * dph**2)
            worst = max(worst, abs(ds2 / ref - 1))
    return worst <= 1e-4, "Fubini-Study = (1/4)(dth^2 + sin^2 th dph^2)", f"max rel error {_fmt(worst)} (tol 1e-4)"


def criterion_8():
    rng = np.random.default_rng(8)
    worst = 0.0
    for n in (2, 3, 5, 8):
        s = build_system(real_spectrum_matrix(rng, n))
        rep = check_unitarity(s, trials=200, seed=n)
        worst = max(worst, rep.max_deviation)
        # ambient path: U(t)^H G U(t) = G with G the biorthogonal pairing
        G = np.asarray(s.chi) @ np.asarray(s.chi).conj().T
        for t in rng.uniform(0, rep.t_max, 5):
            U = evolution_operator(s, t)
            a, b = rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n))
            a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
            d = abs(np.vdot(U @ a, G @ (U @ b)) - np.vdot(a, G @ b)) / (np.linalg.norm(G, 2))
            worst = max(worst, d)
    K = sx_igz(0.5) - 0.3j * np.eye(2) + np.diag([0, -0.4j])
    s = build_system(K)
    tr = norm_trajectory(s, state_from_coeffs(s, [1.0, 1.0]), np.linspace(0, 80, 400))
    gmin = -np.asarray(s.kappa).imag[tr.dominant_mode]
    slope_err = abs(tr.asymptotic_rate / (2 * gmin) - 1)
    ok = worst <= 1e-9 and slope_err <= 1e-2
    return ok, "unitarity + decay control", f"max inner-product drift {_fmt(worst)} (tol 1e-9), slope error {slope_err:.2%} (tol 1%)"


def criterion_9():
    rng = np.random.default_rng(9)
    orders, resid = [], 0.0
    while len(orders) < 50:
        n = int(rng.integers(2, 7))
        K, Kp = random_complex(rng, n), random_complex(rng, n)
        s = build_system(K)
        m = int(rng.integers(n))
        r = first_order(s, Kp, m)
        resid = max(resid, first_order_residual(s, Kp, r) / np.linalg.norm(Kp))
        orders.append(richardson_validate(K, Kp, m, min(1e-3, r.epsilon_validity)))
    orders = np.array(orders)
    s = build_system(sx_igz(0.6))
    d = displacement_operator(s, build_system(sx_igz(0.6) + 1e-2 * SZ))
    pres = max(abs(np.vdot(s.chi[:, k], d.V @ s.phi[:, k]) - 1) for k in range(2))
    ok = orders.min() >= 1.5 and orders.max() <= 2.5 and resid <= 1e-9 and pres <= 1e-10 and d.unitarity_defect > 1e-4
    detail = (
        f"order in [{orders.min():.3f}, {orders.max():.3f}], residual {_fmt(resid)}/||K'||, "
        f"V norm preservation {_fmt(pres)}, ||V^H V - 1|| {_fmt(d.unitarity_defect)}"
    )
    return ok, "perturbation order", detail


def criterion_10():
    rng = np.random.default_rng(10)
    dual = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        s = build_system(real_spectrum_matrix(rng, n))
        obs = Observable(s, random_complex(rng, n))
        psi = rng.normal(size=n) + 1j * rng.normal(size=n)
        a = expectation_pure(obs, components(s, psi))
        b = metric_expectation(metric_from_eigs(s), obs.ambient, psi)
        dual = max(dual, abs(a - b) / max(1.0, abs(a)))
    inv = geo = conj = 0.0
    for g in (0.2, 0.6, 0.9):
        s = build_system(sx_igz(g))
        m = metric_from_eigs(s)
        inv = max(inv, m.involution_defect)
        conj = max(conj, m.conjugation_defect)
        geo = max(geo, geometric_identity_defect(s))
    ok = dual <= 1e-9 and inv <= 1e-8 and geo <= 1e-8
    detail = (
        f"dual-path {_fmt(dual)} (tol 1e-9), ||g^2-1|| {_fmt(inv)} (tol 1e-8), "
        f"geometric identity {_fmt(geo)} (tol 1e-8); ||g conj(g)-1|| {_fmt(conj)} reported"
    )
    return ok, "metric consistency", detail


def criterion_11():
    grid = np.linspace(0, 2, 41)
    t0 = time.perf_counter()
    rep = phase_scan("sx-igz", grid)
    dt = time.perf_counter() - t0
    bad = []
    for g, c in zip(grid, rep.classification):
        want = "unbroken" if g < 1 - 1e-3 else "broken" if g > 1 + 1e-3 else "exceptional"
        if c != want:
            bad.append((round(g, 3), c))
    ok = not bad and dt < 1.0
    return ok, "PT phase diagram (41 points)", f"misclassified {bad}, runtime {dt:.3f}s (limit 1s)"


def criterion_12():
    worst = max(abs(young_truncation(n).norm - 1 / (n - 1)) for n in (3, 11, 101, 1001))
    return worst <= 1e-12, "Young truncation norm 1/(N-1)", f"max error {_fmt(worst)} (tol 1e-12)"


def criterion_13():
    rng = np.random.default_rng(13)
    tr = 0.0
    ent_ok = True
    for _ in range(50):
        n = int(rng.integers(2, 9))
        s = build_system(real_spectrum_matrix(rng, n, spread=3.0))
        rho = thermal_state(s, rng.uniform(0, 5))
        tr = max(tr, abs(np.trace(rho.rho) - 1))
        e = von_neumann_entropy(rho)
        ent_ok &= -1e-12 <= e <= np.log(n) + 1e-12
    w = np.diag(thermal_state(build_system(sx_igz(0.6)), 1.0).rho).real
    werr = np.abs(w - [0.167982, 0.832018]).max()
    try:
        thermal_state(build_system(sx_igz(1.5)), 1.0)
        raised = False
    except ComplexSpectrum:
        raised = True
    ok = tr <= 1e-10 and ent_ok and werr <= 1e-6 and raised
    detail = f"trace {_fmt(tr)}, entropy in range {ent_ok}, weights error {_fmt(werr)} (tol 1e-6), ComplexSpectrum raised {raised}"
    return ok, "thermal state", detail


CRITERIA = [globals()[f"criterion_{i}"] for i in range(1, 14)]


@pytest.mark.parametrize("num", range(1, 14))
def test_criterion(num, capsys):
    ok, title, detail = CRITERIA[num - 1]()
    with capsys.disabled():
        print("\n" + _line(num, ok, title, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for i, fn in enumerate(CRITERIA, 1):
        ok, title, detail = fn()
        failures += not ok
        print(_line(i, ok, title, detail))
    sys.exit(1 if failures else 0)

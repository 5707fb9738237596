"""Metric operator, parity, PT symmetry, the C operator and phase scans."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from ._validation import check_square, check_vector, frozen
from .exceptions import (
    ComplexSpectrum,
    DegenerateSpectrum,
    ExceptionalPoint,
    NoPositiveSigning,
    NumericalError,
    ShapeMismatch,
    ZeroDenominator,
)
from .system import build_system, prenormalized_overlaps

__all__ = [
    "MetricOperator",
    "PhaseScanReport",
    "FAMILIES",
    "metric_from_eigs",
    "metric_expectation",
    "parity_operator",
    "pt_check",
    "pt_eigenstate_check",
    "c_operator",
    "metric_from_c",
    "phase_scan",
]

PT_TOL = 1e-10
COLLINEAR_TOL = 1e-8
MAX_SIGN_SEARCH = 20


@dataclass(frozen=True)
class MetricOperator:
    """Hermitian positive-definite metric ``g = (U U^H)^-1``.

    ``involution_defect`` is ``||g^2 - 1||_F``; ``conjugation_defect`` is
    ``||g conj(g) - 1||_F``, which vanishes for complex symmetric ``K`` in the
    c-norm gauge.
    """

    g: np.ndarray
    condition_number: float
    involution_defect: float
    conjugation_defect: float

    @property
    def dim(self):
        return self.g.shape[0]


def _metric(g):
    g = 0.5 * (g + g.conj().T)
    lam = np.linalg.eigvalsh(g)
    if lam.min() <= 0:
        raise ExceptionalPoint("metric is not positive definite")
    eye = np.eye(g.shape[0])
    return MetricOperator(
        frozen(g),
        float(lam.max() / lam.min()),
        float(np.linalg.norm(g @ g - eye)),
        float(np.linalg.norm(g @ g.conj() - eye)),
    )


def metric_from_eigs(sys):
    """Metric ``g = (sum_n |phi_n><phi_n|)^-1`` in the stored gauge."""
    if not sys.spectrum_real:
        raise ComplexSpectrum("metric from eigenvectors requires a real spectrum")
    u = np.asarray(sys.phi)
    ginv = u @ u.conj().T
    sv = np.linalg.svd(ginv, compute_uv=False)
    if sv[-1] <= sys.tolerances["inv_tol"] * sv[0]:
        raise ExceptionalPoint("eigenvector frame is singular; the metric ceases to exist")
    return _metric(np.linalg.inv(ginv))


def metric_expectation(metric, F, psi):
    """``<psi|g F|psi> / <psi|g|psi>`` under the Hermitian pairing."""
    g = metric.g if isinstance(metric, MetricOperator) else np.asarray(metric)
    F = check_square(F, "F")
    if F.shape != g.shape:
        raise ShapeMismatch("operator and metric dimensions differ")
    v = check_vector(psi, g.shape[0], "psi")
    gv = g.conj().T @ v
    den = np.vdot(v, g @ v)
    if abs(den) <= np.finfo(float).eps * np.linalg.norm(g) * np.vdot(v, v).real:
        raise ZeroDenominator("<psi|g|psi> vanishes")
    return complex(np.vdot(gv, F @ v) / den)


def parity_operator(N):
    """Counter-identity ``P[n, N-1-n] = 1``."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    return np.fliplr(np.eye(N, dtype=complex))


def pt_check(K, P, tol=PT_TOL):
    """Relative defect ``||P conj(K) P - K||_F / ||K||_F`` and whether it is below ``tol``."""
    K = check_square(K, "K")
    P = check_square(P, "P")
    if P.shape != K.shape:
        raise ShapeMismatch("parity and Hamiltonian dimensions differ")
    knorm = np.linalg.norm(K)
    defect = float(np.linalg.norm(P @ K.conj() @ P - K) / knorm) if knorm > 0 else 0.0
    return defect <= tol, defect


def pt_eigenstate_check(sys, P, tol=COLLINEAR_TOL):
    """Per mode: is ``P conj(phi_n)`` a phase multiple of ``phi_n``?"""
    P = check_square(P, "P")
    if P.shape[0] != sys.dim:
        raise ShapeMismatch("parity dimension does not match the system")
    out = []
    for n in range(sys.dim):
        p = np.asarray(sys.phi)[:, n]
        q = P @ p.conj()
        nq = np.linalg.norm(q)
        if nq == 0:
            out.append(False)
            continue
        cosang = abs(np.vdot(p, q)) / (np.linalg.norm(p) * nq)
        ratio = nq / np.linalg.norm(p)
        out.append(bool(1.0 - cosang <= tol and abs(ratio - 1.0) <= np.sqrt(tol)))
    return out


def c_operator(sys, P=None):
    """Signed spectral sum ``C = sum_n s_n |phi_n><chi_n|`` with ``C P`` positive definite.

    Sign vectors are searched exhaustively (``N <= 20``, ``2^(N-1)`` up to a
    global flip) and the first one making ``C P`` Hermitian positive definite
    is returned.

    Returns
    -------
    C : ndarray
    signs : list of int
    """
    if not sys.spectrum_real:
        raise ComplexSpectrum("C operator requires a real spectrum")
    n = sys.dim
    if n > MAX_SIGN_SEARCH:
        raise ValueError(f"exhaustive sign search limited to N <= {MAX_SIGN_SEARCH}")
    P = parity_operator(n) if P is None else check_square(P, "P")
    if P.shape[0] != n:
        raise ShapeMismatch("parity dimension does not match the system")
    kappa = np.asarray(sys.kappa)
    gap = np.abs(kappa[:, None] - kappa[None, :]) + np.diag(np.full(n, np.inf))
    if n > 1 and gap.min() <= sys.tolerances["deg_tol"] * max(sys.norm, 1.0):
        raise DegenerateSpectrum("C operator requires a nondegenerate spectrum")

    u = np.asarray(sys.phi)
    right = np.asarray(sys.chi).conj().T @ P
    scale = np.linalg.norm(u) * np.linalg.norm(right)
    herm_tol = 1e-10 * max(scale, 1.0)
    best_signs, best_min = None, -np.inf
    for tail in product((1, -1), repeat=n - 1):
        s = np.array((1,) + tail)
        cp = (u * s) @ right
        if np.abs(cp - cp.conj().T).max() > herm_tol:
            continue
        lam = np.linalg.eigvalsh(0.5 * (cp + cp.conj().T))
        # -s flips the spectrum of C P, so test both orientations at once
        flip = 1 if lam.min() >= -lam.max() else -1
        m = lam.min() if flip == 1 else -lam.max()
        if m > best_min:
            best_min, best_signs = m, (flip * s).tolist()
        if m > 0:
            break
    if best_signs is None or best_min <= 0:
        raise NoPositiveSigning(
            "no sign vector makes C P Hermitian positive definite",
            best_signs=best_signs,
            best_min_eig=None if best_signs is None else float(best_min),
        )
    s = np.array(best_signs, dtype=float)
    C = (u * s) @ np.asarray(sys.chi).conj().T
    return frozen(C), best_signs


def metric_from_c(C, P):
    """Hermitian-pairing metric ``conj(C P)`` carried by the CPT inner product."""
    C = check_square(C, "C")
    P = check_square(P, "P")
    return _metric((C @ P).conj())


def _sx_igz(gamma):
    return np.array([[-1j * gamma, 1.0], [1.0, 1j * gamma]])


FAMILIES = {"sx-igz": _sx_igz}


@dataclass(frozen=True)
class PhaseScanReport:
    """Per-point phase classification of a one-parameter family.

    ``classification`` entries are ``"unbroken"``, ``"broken"`` or
    ``"exceptional"``; ``max_imag``, ``biortho_defect`` and ``min_overlap``
    are ``nan`` where the system could not be built, in which case ``errors``
    holds the exception class name.
    """

    grid: np.ndarray
    classification: tuple
    max_imag: np.ndarray
    biortho_defect: np.ndarray
    min_overlap: np.ndarray
    errors: tuple

    def transitions(self):
        """Grid indices where the classification changes."""
        c = self.classification
        return [i for i in range(1, len(c)) if c[i] != c[i - 1]]


def _classify(K, ep_band, tolerances):
    try:
        sys = build_system(K, **tolerances)
    except NumericalError as exc:
        return "exceptional", np.nan, np.nan, np.nan, type(exc).__name__
    ov = float(prenormalized_overlaps(sys.phi, sys.chi).min())
    mi = float(np.abs(np.asarray(sys.kappa).imag).max())
    cond = np.linalg.cond(np.asarray(sys.phi))
    if ov < ep_band or cond > 1.0 / sys.tolerances["ep_tol"]:
        label = "exceptional"
    else:
        label = "unbroken" if sys.spectrum_real else "broken"
    return label, mi, sys.biortho_defect, ov, None


def phase_scan(family, grid, ep_band=0.05, max_workers=None, **tolerances):
    """Classify each grid point of ``family`` as unbroken, broken or exceptional.

    Parameters
    ----------
    family : callable or str
        ``family(x) -> K``, or the name of a built-in family (see
        :data:`FAMILIES`).
    grid : sequence of float
    ep_band : float
        A point is flagged exceptional when some unit-norm overlap
        ``|<chi_n|phi_n>|`` falls below this value. For ``sx-igz`` the
        overlap is ``sqrt|1 - gamma^2| / max(1, gamma)``, so the default
        flags roughly ``|gamma - 1| < 1.25e-3``.
    max_workers : int, optional
        Evaluate points on a thread pool; results keep grid order.
    """
    if isinstance(family, str):
        try:
            family = FAMILIES[family]
        except KeyError:
            raise ValueError(f"unknown family {family!r}; known: {sorted(FAMILIES)}") from None
    grid = np.asarray(grid, dtype=float)

    def point(x):
        return _classify(family(x), ep_band, tolerances)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(point, grid))
    else:
        rows = [point(x) for x in grid]
    labels, mi, bd, ov, err = zip(*rows) if rows else ((), (), (), (), ())
    return PhaseScanReport(
        frozen(grid),
        tuple(labels),
        frozen(np.array(mi, dtype=float)),
        frozen(np.array(bd, dtype=float)),
        frozen(np.array(ov, dtype=float)),
        tuple(err),
    )

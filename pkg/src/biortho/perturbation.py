"""First-order Rayleigh-Schroedinger theory for complex Hamiltonians.

Perturbed eigenvectors are normalised by ``<chi_n|psi_n> = 1``, so the
first-order correction has no component along ``phi_n``. Only the first
order is implemented; :func:`richardson_validate` measures how fast the
first-order truncation error vanishes to certify it.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_square, frozen
from .exceptions import DegenerateGap, MatchingAmbiguous, ShapeMismatch
from .linalg import eig_general
from .system import build_system

__all__ = [
    "FirstOrderResult",
    "DisplacementResult",
    "first_order",
    "first_order_residual",
    "match_modes",
    "displacement_operator",
    "richardson_validate",
]


@dataclass(frozen=True)
class FirstOrderResult:
    n: int
    mu1: complex
    psi1_coeffs: np.ndarray
    epsilon_validity: float

    def psi1(self, sys):
        """Ambient first-order eigenvector correction."""
        return np.asarray(sys.phi) @ self.psi1_coeffs


@dataclass(frozen=True)
class DisplacementResult:
    V: np.ndarray
    unitarity_defect: float
    matching: np.ndarray


def _check_perturbation(sys, Kprime):
    kp = check_square(Kprime, "Kprime")
    if kp.shape[0] != sys.dim:
        raise ShapeMismatch("perturbation dimension does not match the system")
    return kp


def _min_gap(kappa, n):
    d = np.abs(kappa - kappa[n])
    d[n] = np.inf
    return float(d.min()) if d.size > 1 else np.inf


def first_order(sys, Kprime, n, deg_tol=None):
    """First-order eigenvalue shift and eigenvector correction of mode ``n``.

    ``mu1 = <chi_n|K'|phi_n>`` and
    ``<chi_m|psi1> = <chi_m|K'|phi_n> / (kappa_n - kappa_m)`` for ``m != n``.
    Gaps below ``deg_tol * max(||K||_F, 1)`` (default: the system's
    ``deg_tol``) raise :class:`DegenerateGap`.
    """
    kp = _check_perturbation(sys, Kprime)
    if not 0 <= n < sys.dim:
        raise IndexError(f"mode index {n} out of range")
    kappa = np.asarray(sys.kappa)
    gap = _min_gap(kappa, n)
    if deg_tol is None:
        deg_tol = sys.tolerances["deg_tol"]
    if gap < deg_tol * max(sys.norm, 1.0):
        raise DegenerateGap(f"mode {n} is degenerate within {gap:.3e}; Rayleigh-Schroedinger fails")
    col = np.asarray(sys.chi).conj().T @ (kp @ np.asarray(sys.phi)[:, n])
    mu1 = complex(col[n])
    den = kappa[n] - kappa
    den[n] = 1.0
    psi1 = col / den
    psi1[n] = 0.0
    kp_norm = np.linalg.norm(kp)
    validity = gap / (10.0 * kp_norm) if kp_norm > 0 else np.inf
    return FirstOrderResult(n, mu1, frozen(psi1), float(validity))


def first_order_residual(sys, Kprime, res):
    """``||(kappa_n - K) psi1 + mu1 phi_n - K' phi_n||``."""
    kp = _check_perturbation(sys, Kprime)
    n = res.n
    phin = np.asarray(sys.phi)[:, n]
    psi1 = res.psi1(sys)
    K = np.asarray(sys.hamiltonian)
    r = sys.kappa[n] * psi1 - K @ psi1 + res.mu1 * phin - kp @ phin
    return float(np.linalg.norm(r))


def match_modes(kappa, mu, ratio=0.5):
    """Greedy eigenvalue matching ``kappa[n] <-> mu[perm[n]]``.

    Pairs are taken in order of increasing distance. A pair is rejected as
    ambiguous when its distance exceeds ``ratio`` times the distance to the
    second-closest candidate.
    """
    kappa = np.asarray(kappa)
    mu = np.asarray(mu)
    if kappa.shape != mu.shape:
        raise ShapeMismatch("spectra have different sizes")
    n = kappa.size
    d = np.abs(kappa[:, None] - mu[None, :])
    if n > 1:
        srt = np.sort(d, axis=1)
        bad = srt[:, 0] > ratio * srt[:, 1]
        if np.any(bad):
            raise MatchingAmbiguous(f"mode(s) {np.flatnonzero(bad).tolist()} have no unique partner")
    perm = -np.ones(n, dtype=int)
    taken = np.zeros(n, dtype=bool)
    for flat in np.argsort(d, axis=None, kind="stable"):
        i, j = divmod(int(flat), n)
        if perm[i] < 0 and not taken[j]:
            perm[i] = j
            taken[j] = True
    return perm


def displacement_operator(sys, sys_eps):
    """``V = sum_n |psi_n(eps)><chi_n|`` with ``<chi_n|psi_n> = 1``.

    Maps each unperturbed eigenvector onto its continued perturbed partner.
    ``unitarity_defect`` reports ``||V^H V - I||_F``, which is nonzero for
    genuinely non-Hermitian families.
    """
    if sys.dim != sys_eps.dim:
        raise ShapeMismatch("systems have different dimensions")
    perm = match_modes(sys.kappa, sys_eps.kappa)
    chi = np.asarray(sys.chi)
    psi = np.asarray(sys_eps.phi)[:, perm].copy()
    psi /= np.einsum("in,in->n", chi.conj(), psi)
    V = psi @ chi.conj().T
    defect = float(np.linalg.norm(V.conj().T @ V - np.eye(sys.dim)))
    return DisplacementResult(frozen(V), defect, frozen(perm))


def _perturbed_eigenvalue(K, Kprime, eps, target, eig_tol):
    vals = np.asarray(eig_general(K + eps * Kprime, eig_tol).eigenvalues)
    return vals[np.argmin(np.abs(vals - target))]


def richardson_validate(K, Kprime, n, eps, **tolerances):
    """Observed order of the first-order truncation error for mode ``n``.

    With ``r(e) = |mu_n(e) - kappa_n - e mu1|`` from exact diagonalisation,
    returns ``log2(r(eps) / r(eps / 2))``, close to 2 when the first-order
    coefficient is right. Returns ``nan`` when the residual vanishes
    identically (e.g. ``K' = 0``).
    """
    sys = build_system(K, **tolerances)
    kp = _check_perturbation(sys, Kprime)
    res = first_order(sys, kp, n)
    if not 0 < eps <= res.epsilon_validity:
        raise ValueError(f"eps={eps} outside (0, epsilon_validity={res.epsilon_validity:.3e}]")
    K = np.asarray(sys.hamiltonian)
    kap = sys.kappa[n]
    eig_tol = sys.tolerances["eig_tol"]
    r = []
    for e in (eps, eps / 2):
        mu = _perturbed_eigenvalue(K, kp, e, kap + e * res.mu1, eig_tol)
        r.append(abs(mu - kap - e * res.mu1))
    floor = 64 * np.finfo(float).eps * max(sys.norm, 1.0)
    if r[0] <= floor and r[1] <= floor:
        return float("nan")
    return float(np.log2(r[0] / max(r[1], np.finfo(float).tiny)))

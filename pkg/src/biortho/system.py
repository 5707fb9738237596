"""Biorthonormal eigensystems of complex Hamiltonians.

A :class:`BiorthogonalSystem` stores the eigenvalues ``kappa`` of ``K``, the
right eigenvectors ``phi`` (columns) and their left-conjugate partners ``chi``
(columns, eigenvectors of ``K^H``) normalised so that ``chi^H phi = I``.

Two gauges are used:

``c_norm``
    for complex symmetric ``K``: ``phi_n^T phi_n = 1`` and ``chi = conj(phi)``.
``balanced``
    otherwise: ``||phi_n|| = ||chi_n||``.

In both, the overall sign/phase is pinned on the first largest-magnitude
component of ``phi_n`` (real positive in ``balanced``, positive real part in
``c_norm`` where only a sign is free).
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ._validation import check_nonzero, check_square, check_vector, frozen
from .exceptions import (
    DegenerateSpectrum,
    DenominatorSingular,
    ExceptionalPoint,
    SingularBasis,
    SplitInvalid,
    SystemMismatch,
    ZeroState,
)
from .linalg import eig_general, left_from_right

__all__ = [
    "DEFAULT_TOLERANCES",
    "BiorthogonalSystem",
    "StateVector",
    "build_system",
    "projector",
    "projectors",
    "resolution_defect",
    "reconstruct_hamiltonian",
    "components",
    "state_from_coeffs",
    "associated_state",
    "biortho_inner",
    "petermann_factor",
    "prenormalized_overlaps",
    "hermitian_split",
    "nonorthogonality_check",
]

DEFAULT_TOLERANCES = {
    "eig_tol": 1e-10,
    "inv_tol": 1e-12,
    "deg_tol": 1e-8,
    "ep_tol": 1e-8,
    "sym_tol": 1e-10,
    "system_tol": 1e-9,
    "reality_tol": 1e-9,
}

_PIN_TIE = 1e-8


@dataclass(frozen=True, eq=False)
class BiorthogonalSystem:
    """Gauged biorthonormal eigensystem ``(kappa_n, phi_n, chi_n)``."""

    hamiltonian: np.ndarray
    kappa: np.ndarray
    phi: np.ndarray
    chi: np.ndarray
    gauge: str
    biortho_defect: float
    spectrum_real: bool
    tolerances: dict

    @property
    def dim(self):
        return self.kappa.shape[0]

    @property
    def norm(self):
        return float(np.linalg.norm(self.hamiltonian))

    def __repr__(self):
        kap = np.array2string(np.asarray(self.kappa), precision=6)
        return f"BiorthogonalSystem(dim={self.dim}, gauge={self.gauge!r}, kappa={kap})"


@dataclass(frozen=True, eq=False)
class StateVector:
    """State ``sum_n coeffs[n] |phi_n>`` on a given system."""

    system: object
    coeffs: np.ndarray
    normalized: bool = False

    @property
    def dim(self):
        return self.coeffs.shape[0]

    def norm2(self):
        """Biorthogonal norm ``<psi~|psi> = sum |c_n|^2``."""
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def normalize(self):
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroState("cannot normalise the zero state")
        return StateVector(self.system, frozen(self.coeffs / np.sqrt(n2)), True)

    def ambient(self):
        """The state as an ordinary vector, ``sum_n c_n phi_n``."""
        return np.asarray(self.system.phi) @ self.coeffs

    def scaled(self, lam):
        return StateVector(self.system, frozen(lam * self.coeffs), False)


def _is_complex_symmetric(k, tol):
    return np.linalg.norm(k - k.T) <= tol


def _pin_index(v):
    mags = np.abs(v)
    return int(np.flatnonzero(mags >= (1.0 - _PIN_TIE) * mags.max())[0])


def _cnorm_gauge(u):
    phi = np.empty_like(u)
    for n in range(u.shape[1]):
        v = u[:, n]
        v = v / np.sqrt(v @ v)
        z = v[_pin_index(v)]
        if z.real < 0 or (z.real == 0 and z.imag < 0):
            v = -v
        phi[:, n] = v
    return phi, phi.conj()


def _balanced_gauge(u, v):
    phi = np.empty_like(u)
    chi = np.empty_like(v)
    for n in range(u.shape[1]):
        p, c = u[:, n], v[:, n]
        scale = np.sqrt(np.linalg.norm(c) / np.linalg.norm(p))
        z = p[_pin_index(p)]
        a = scale * np.conj(z) / abs(z)
        phi[:, n] = a * p
        chi[:, n] = c / np.conj(a)
    return phi, chi


def prenormalized_overlaps(phi, chi):
    """``|<chi_n|phi_n>|`` with both vectors scaled to unit Hermitian norm.

    Equal to ``petermann_factor ** -0.5``; tends to zero where eigenvectors
    coalesce.
    """
    phi = np.asarray(phi)
    chi = np.asarray(chi)
    num = np.abs(np.einsum("in,in->n", chi.conj(), phi))
    return num / (np.linalg.norm(phi, axis=0) * np.linalg.norm(chi, axis=0))


def build_system(K, **tolerances):
    """Diagonalise ``K`` and return its gauged biorthonormal system.

    Keyword arguments override entries of :data:`DEFAULT_TOLERANCES`.

    Raises
    ------
    ExceptionalPoint
        When eigenvectors coalesce: colliding eigenvalues with parallel
        eigenvectors, a numerically singular eigenvector matrix, or a
        unit-norm overlap ``|<chi_n|phi_n>|`` below ``ep_tol``.
    DegenerateSpectrum
        When eigenvalues collide within ``deg_tol * ||K||_F`` but the
        eigenvectors stay independent.
    """
    unknown = set(tolerances) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise TypeError(f"unknown tolerance(s): {sorted(unknown)}")
    tol = {**DEFAULT_TOLERANCES, **{k: float(v) for k, v in tolerances.items()}}

    k = check_square(K, "K")
    n = k.shape[0]
    knorm = float(np.linalg.norm(k))
    spec = eig_general(k, tol["eig_tol"])
    kappa = np.asarray(spec.eigenvalues)
    u = np.asarray(spec.right_vectors)

    scale = max(knorm, np.finfo(float).tiny)
    dist = np.abs(kappa[:, None] - kappa[None, :]) + np.diag(np.full(n, np.inf))
    if n > 1 and dist.min() <= tol["deg_tol"] * scale:
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        cosang = abs(np.vdot(u[:, i], u[:, j]))
        if cosang >= 1.0 - np.sqrt(tol["deg_tol"]):
            raise ExceptionalPoint(
                f"eigenvalues {kappa[i]:.6g} and {kappa[j]:.6g} coalesce with parallel "
                "eigenvectors (exceptional point)"
            )
        raise DegenerateSpectrum(
            f"eigenvalues {kappa[i]:.6g} and {kappa[j]:.6g} collide within "
            f"{tol['deg_tol'] * scale:.3e}"
        )

    try:
        v = left_from_right(u, tol["inv_tol"])
    except SingularBasis as exc:
        raise ExceptionalPoint(f"eigenvector matrix is singular: {exc}") from exc
    ov = prenormalized_overlaps(u, v)
    if ov.min() < tol["ep_tol"]:
        raise ExceptionalPoint(
            f"|<chi|phi>| = {ov.min():.3e} below ep_tol: eigenstates coalesce (exceptional point)"
        )

    if _is_complex_symmetric(k, tol["sym_tol"] * scale):
        gauge = "c_norm"
        phi, chi = _cnorm_gauge(u)
    else:
        gauge = "balanced"
        phi, chi = _balanced_gauge(u, v)

    defect = float(np.abs(chi.conj().T @ phi - np.eye(n)).max())
    if defect > tol["system_tol"]:
        raise SingularBasis(
            f"biorthonormality defect {defect:.3e} exceeds system_tol; eigenbasis too ill-conditioned"
        )
    spectrum_real = bool(np.all(np.abs(kappa.imag) <= tol["reality_tol"] * max(knorm, 1.0)))
    return BiorthogonalSystem(
        hamiltonian=frozen(k),
        kappa=frozen(kappa),
        phi=frozen(phi),
        chi=frozen(chi),
        gauge=gauge,
        biortho_defect=defect,
        spectrum_real=spectrum_real,
        tolerances=dict(tol),
    )


def _check_index(sys, n):
    if not 0 <= n < sys.dim:
        raise IndexError(f"mode index {n} out of range for dim {sys.dim}")


def projector(sys, n):
    """``Pi_n = |phi_n><chi_n| / <chi_n|phi_n>``."""
    _check_index(sys, n)
    p, c = sys.phi[:, n], sys.chi[:, n]
    return np.outer(p, c.conj()) / np.vdot(c, p)


def projectors(sys):
    return [projector(sys, n) for n in range(sys.dim)]


def resolution_defect(sys):
    """``||sum_n Pi_n - I||_F``."""
    total = sum(projectors(sys))
    return float(np.linalg.norm(total - np.eye(sys.dim)))


def reconstruct_hamiltonian(sys):
    """Return ``sum_n kappa_n Pi_n`` and its relative Frobenius error against ``K``."""
    rebuilt = sum(kap * p for kap, p in zip(sys.kappa, projectors(sys)))
    denom = max(sys.norm, np.finfo(float).tiny)
    return rebuilt, float(np.linalg.norm(rebuilt - sys.hamiltonian) / denom)


def components(sys, psi, normalize=False):
    """Expand an ambient vector in the ``phi`` basis: ``c_n = <chi_n|psi>``."""
    v = check_nonzero(check_vector(psi, sys.dim, "psi"), "psi")
    state = StateVector(sys, frozen(np.asarray(sys.chi).conj().T @ v), False)
    return state.normalize() if normalize else state


def state_from_coeffs(sys, coeffs, normalize=False):
    c = check_vector(coeffs, sys.dim, "coeffs")
    state = StateVector(sys, frozen(c), False)
    return state.normalize() if normalize else state


def _same_system(a, b):
    if a.system is not b.system:
        raise SystemMismatch("states live on different systems")


def associated_state(sys, state):
    """Ambient vector of the associated state ``sum_n c_n chi_n``."""
    if state.system is not sys:
        raise SystemMismatch("state does not belong to this system")
    return np.asarray(sys.chi) @ state.coeffs


def biortho_inner(sys, a, b):
    """Biorthogonal inner product ``<a~|b> = sum_n conj(d_n) c_n``."""
    if a.system is not sys:
        raise SystemMismatch("first state does not belong to this system")
    _same_system(a, b)
    return complex(np.vdot(a.coeffs, b.coeffs))


def petermann_factor(sys, n):
    """``[<chi|phi><phi|chi> / (<chi|chi><phi|phi>)]^-1`` for mode ``n``."""
    _check_index(sys, n)
    p, c = sys.phi[:, n], sys.chi[:, n]
    num = abs(np.vdot(c, p)) ** 2
    return float(np.vdot(c, c).real * np.vdot(p, p).real / num)


def hermitian_split(K):
    """Unique split ``K = H - i Gamma`` with ``H``, ``Gamma`` Hermitian."""
    k = check_square(K, "K")
    kh = k.conj().T
    return 0.5 * (k + kh), 0.5j * (k - kh)


class NonorthogonalityCheck(NamedTuple):
    lhs: complex
    rhs_gamma: Optional[complex]
    rhs_h: Optional[complex]

    def max_discrepancy(self):
        vals = [v for v in (self.lhs, self.rhs_gamma, self.rhs_h) if v is not None]
        return max(abs(x - y) for x in vals for y in vals)


def nonorthogonality_check(sys, m, n, H=None, Gamma=None, check_tol=1e-10):
    """Evaluate ``<phi_m|phi_n>`` directly and through both split formulas.

    Returns ``(lhs, 2i<phi_m|Gamma|phi_n>/(conj(k_m)-k_n),
    2<phi_m|H|phi_n>/(conj(k_m)+k_n))``. A right-hand side whose denominator
    vanishes (within ``check_tol * ||K||_F``) is returned as ``None``; when
    both vanish :class:`DenominatorSingular` is raised.
    """
    if m == n:
        raise ValueError("m and n must differ")
    _check_index(sys, m)
    _check_index(sys, n)
    K = np.asarray(sys.hamiltonian)
    scale = max(sys.norm, 1.0)
    if H is None or Gamma is None:
        H, Gamma = hermitian_split(K)
    else:
        H = check_square(H, "H")
        Gamma = check_square(Gamma, "Gamma")
        for name, x in (("H", H), ("Gamma", Gamma)):
            if np.linalg.norm(x - x.conj().T) > check_tol * scale:
                raise SplitInvalid(f"{name} is not Hermitian")
        if np.linalg.norm(H - 1j * Gamma - K) > check_tol * scale:
            raise SplitInvalid("H - i Gamma does not reproduce K")

    pm, pn = sys.phi[:, m], sys.phi[:, n]
    km, kn = sys.kappa[m], sys.kappa[n]
    lhs = complex(np.vdot(pm, pn))
    d_gamma = np.conj(km) - kn
    d_h = np.conj(km) + kn
    rhs_gamma = rhs_h = None
    if abs(d_gamma) > check_tol * scale:
        rhs_gamma = complex(2j * np.vdot(pm, Gamma @ pn) / d_gamma)
    if abs(d_h) > check_tol * scale:
        rhs_h = complex(2.0 * np.vdot(pm, H @ pn) / d_h)
    if rhs_gamma is None and rhs_h is None:
        raise DenominatorSingular("both conj(k_m) - k_n and conj(k_m) + k_n vanish")
    return NonorthogonalityCheck(lhs, rhs_gamma, rhs_h)

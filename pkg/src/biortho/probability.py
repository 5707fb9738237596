"""Transition probabilities, overlap distance and Bloch coordinates.

All quantities are computed from expansion coefficients in the ``phi`` basis,
where the biorthogonal pairing becomes the ordinary Euclidean one.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionNotTwo, InternalConsistencyError, SystemMismatch, ZeroState
from ._validation import check_vector
from .system import state_from_coeffs

__all__ = [
    "OverlapResult",
    "probabilities",
    "transition_prob",
    "overlap_distance",
    "fs_line_element",
    "bloch_state",
    "bloch_coords",
]

_CLAMP = 1e-12


@dataclass(frozen=True)
class OverlapResult:
    cos2_half_s: float
    s: float


def _coeffs(sys, psi):
    if psi.system is not sys:
        raise SystemMismatch("state does not belong to this system")
    c = np.asarray(psi.coeffs)
    n2 = np.vdot(c, c).real
    if n2 == 0.0:
        raise ZeroState("zero state has no probabilities")
    return c, n2


def probabilities(sys, psi):
    """Vector of ``p_n = |c_n|^2 / sum_m |c_m|^2``."""
    c, n2 = _coeffs(sys, psi)
    p = (c.conj() * c).real / n2
    if np.any(p < -_CLAMP) or np.any(p > 1 + _CLAMP):
        raise InternalConsistencyError(f"probabilities out of range: {p}")
    p = np.clip(p, 0.0, 1.0)
    return p / p.sum()


def transition_prob(sys, psi, n):
    """Probability of finding ``psi`` in eigenstate ``phi_n``."""
    if not 0 <= n < sys.dim:
        raise IndexError(f"mode index {n} out of range")
    return float(probabilities(sys, psi)[n])


def overlap_distance(sys, xi, eta):
    """Overlap distance ``s`` with ``cos^2(s/2) = |<xi~|eta>|^2 / (<xi~|xi><eta~|eta>)``."""
    c, nc = _coeffs(sys, xi)
    d, nd = _coeffs(sys, eta)
    val = abs(np.vdot(c, d)) ** 2 / (nc * nd)
    val = float(min(max(val, 0.0), 1.0))
    return OverlapResult(cos2_half_s=val, s=float(2.0 * np.arccos(np.sqrt(val))))


def fs_line_element(sys, xi, dxi):
    r"""Squared Fubini-Study line element at ``xi`` along coefficient increment ``dxi``.

    .. math::

        ds^2 = \frac{\langle\tilde\xi|\xi\rangle\langle\widetilde{d\xi}|d\xi\rangle
               - |\langle\tilde\xi|d\xi\rangle|^2}{\langle\tilde\xi|\xi\rangle^2}

    This is the metric of the state space as a sphere of radius 1/2 on two
    levels, i.e. the infinitesimal form of ``s / 2``: for nearby states
    ``(s/2)^2 ~ ds^2``.
    """
    c, n2 = _coeffs(sys, xi)
    dc = check_vector(dxi, sys.dim, "dxi")
    val = (n2 * np.vdot(dc, dc).real - abs(np.vdot(c, dc)) ** 2) / n2**2
    return float(val)


def bloch_state(sys2, theta, phi):
    """Normalised two-level state ``cos(theta/2) phi_1 + sin(theta/2) e^{i phi} phi_2``."""
    if sys2.dim != 2:
        raise DimensionNotTwo(f"Bloch parameterisation needs dim 2, got {sys2.dim}")
    c = np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)])
    return state_from_coeffs(sys2, c, normalize=True)


def bloch_coords(sys2, psi):
    """Inverse of :func:`bloch_state`: ``(theta, phi)`` with ``phi`` in ``[0, 2 pi)``.

    At the poles the azimuth is reported as 0.
    """
    if sys2.dim != 2:
        raise DimensionNotTwo(f"Bloch coordinates need dim 2, got {sys2.dim}")
    c, n2 = _coeffs(sys2, psi)
    a, b = np.abs(c)
    theta = float(2.0 * np.arctan2(b, a))
    if a <= 1e-15 * np.sqrt(n2) or b <= 1e-15 * np.sqrt(n2):
        return theta, 0.0
    az = float(np.mod(np.angle(c[1]) - np.angle(c[0]), 2 * np.pi))
    if az >= 2 * np.pi:
        az = 0.0
    return theta, az

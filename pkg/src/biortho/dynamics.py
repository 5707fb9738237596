"""Time evolution generated by a complex Hamiltonian (hbar = 1).

Evolution is carried out mode by mode on the expansion coefficients,
``c_n(t) = c_n(0) exp(-i kappa_n t)``.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import OverflowRisk, SystemMismatch, ZeroState
from .linalg import gram
from ._validation import frozen
from .system import StateVector, hermitian_split

__all__ = [
    "NormTrajectory",
    "UnitarityReport",
    "DecayReport",
    "evolve",
    "evolution_operator",
    "norm_trajectory",
    "check_unitarity",
    "geometric_identity_defect",
    "decay_analysis",
    "adjoint_equation_residual",
]

_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class NormTrajectory:
    times: np.ndarray
    norms: np.ndarray
    dominant_mode: int
    asymptotic_rate: float


@dataclass(frozen=True)
class UnitarityReport:
    unitary: bool
    max_deviation: float
    trials: int
    t_max: float


@dataclass(frozen=True)
class DecayReport:
    n_star: int
    rates: np.ndarray
    half_life: float
    quotient_discrepancy: float


def _growth_guard(kappa, t):
    expo = np.max(np.imag(kappa) * t)
    if expo > _EXP_LIMIT:
        raise OverflowRisk(f"exp({expo:.1f}) would overflow")


def evolve(sys, psi0, t):
    """Evolve a state for time ``t`` under the system's Hamiltonian."""
    if psi0.system is not sys:
        raise SystemMismatch("state does not belong to this system")
    kappa = np.asarray(sys.kappa)
    _growth_guard(kappa, t)
    c = np.asarray(psi0.coeffs) * np.exp(-1j * kappa * t)
    return StateVector(sys, frozen(c), False)


def evolution_operator(sys, t):
    """Ambient propagator ``sum_n exp(-i kappa_n t) Pi_n``."""
    kappa = np.asarray(sys.kappa)
    _growth_guard(kappa, t)
    return np.asarray(sys.phi) @ np.diag(np.exp(-1j * kappa * t)) @ np.asarray(sys.chi).conj().T


def norm_trajectory(sys, psi0, times):
    """Biorthogonal norm ``sum |c_n|^2 exp(-2 gamma_n t)`` along a time grid.

    ``asymptotic_rate`` is the least-squares slope of ``-ln norm`` over the
    last quarter of the grid.
    """
    if psi0.system is not sys:
        raise SystemMismatch("state does not belong to this system")
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) < 0) or t[0] < 0:
        raise ValueError("times must be a sorted 1-d grid of non-negative values")
    kappa = np.asarray(sys.kappa)
    _growth_guard(kappa, t[-1])
    w = np.abs(np.asarray(psi0.coeffs)) ** 2
    if not np.any(w):
        raise ZeroState("zero initial state")
    gamma = -kappa.imag
    norms = np.exp(-2.0 * np.outer(t, gamma)) @ w

    live = np.flatnonzero(w > 0)
    n_star = int(live[np.argmin(gamma[live])])

    tail = max(2, int(np.ceil(0.25 * t.size)))
    slope = np.polyfit(t[-tail:], np.log(norms[-tail:]), 1)[0]
    return NormTrajectory(frozen(t), frozen(norms), n_star, float(-slope))


def check_unitarity(sys, trials=200, t_max=None, seed=0, tol=1e-9):
    """Sample ``|<phi~_t|psi_t> - <phi~_0|psi_0>|`` over random states and times."""
    rng = np.random.default_rng(seed)
    if t_max is None:
        t_max = 100.0 / max(sys.norm, np.finfo(float).tiny)
    kappa = np.asarray(sys.kappa)
    _growth_guard(kappa, t_max)
    n = sys.dim
    worst = 0.0
    for _ in range(trials):
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        t = rng.uniform(0.0, t_max)
        ph = np.exp(-1j * kappa * t)
        worst = max(worst, abs(np.vdot(a * ph, b * ph) - np.vdot(a, b)))
    return UnitarityReport(bool(sys.spectrum_real and worst <= tol), float(worst), trials, float(t_max))


def geometric_identity_defect(sys):
    """``max |<phi_m|phi_n> - <chi_n|chi_m>|`` in the stored gauge."""
    gp = gram(np.asarray(sys.phi))
    gc = gram(np.asarray(sys.chi))
    return float(np.abs(gp - gc.T).max())


def decay_analysis(sys, psi0):
    """Decay rates ``2 gamma_n``, slowest populated mode and its half-life.

    Rates come from ``-Im kappa_n`` and are cross-checked against
    ``<phi_n|Gamma|phi_n> / <phi_n|phi_n>``.
    """
    if psi0.system is not sys:
        raise SystemMismatch("state does not belong to this system")
    c = np.asarray(psi0.coeffs)
    if not np.any(c):
        raise ZeroState("zero initial state")
    gamma = -np.asarray(sys.kappa).imag
    _, G = hermitian_split(sys.hamiltonian)
    phi = np.asarray(sys.phi)
    quot = np.einsum("in,in->n", phi.conj(), G @ phi).real / np.linalg.norm(phi, axis=0) ** 2
    live = np.flatnonzero(c != 0)
    n_star = int(live[np.argmin(gamma[live])])
    g = gamma[n_star]
    half = float(np.log(2.0) / (2.0 * g)) if g > 0 else float("inf")
    return DecayReport(n_star, frozen(2.0 * gamma), half, float(np.abs(quot - gamma).max()))


def adjoint_equation_residual(sys, psi0, t, dt=None):
    """``||i d/dt psi~_t - K^H psi~_t||`` by central differences.

    Vanishes (to discretisation error) when the spectrum is real.
    """
    if dt is None:
        dt = 1e-5 / max(sys.norm, np.finfo(float).tiny)
    chi = np.asarray(sys.chi)

    def assoc(s):
        return chi @ np.asarray(evolve(sys, psi0, s).coeffs)

    deriv = (assoc(t + dt) - assoc(t - dt)) / (2.0 * dt)
    k_h = np.asarray(sys.hamiltonian).conj().T
    return float(np.linalg.norm(1j * deriv - k_h @ assoc(t)))

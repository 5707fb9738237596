"""Observables and density matrices expressed in a biorthogonal basis.

An operator is stored by its coefficient matrix ``f`` in the dyads
``|phi_n><chi_m|``; the ordinary (ambient) matrix is ``F = U f V^H`` with
``U`` the ``phi`` columns and ``V`` the ``chi`` columns. Products of operators
correspond to products of coefficient matrices.
"""

import numpy as np

from ._validation import check_square, frozen
from .exceptions import ComplexSpectrum, DimensionNotTwo, ShapeMismatch, SystemMismatch, ZeroState
from .linalg import gram

__all__ = [
    "Observable",
    "DensityMatrix",
    "observable_from_coeffs",
    "observable_from_ambient",
    "is_biortho_hermitian",
    "expectation_pure",
    "expectation_mixed",
    "deformed_pauli",
    "thermal_state",
    "von_neumann_entropy",
    "same_class_2level",
]

HERMITIAN_TOL = 1e-10

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class Observable:
    """Operator ``sum f[n, m] |phi_n><chi_m|`` on a fixed system.

    Parameters
    ----------
    system : BiorthogonalSystem
    f : (N, N) array_like
        Coefficient matrix.
    """

    def __init__(self, system, f):
        f = np.asarray(f)
        if f.shape != (system.dim, system.dim):
            raise ShapeMismatch(f"coefficient matrix must be {system.dim}x{system.dim}, got {f.shape}")
        self.system = system
        self.f = frozen(check_square(f, "f"))
        self.ambient = frozen(np.asarray(system.phi) @ self.f @ np.asarray(system.chi).conj().T)

    def __matmul__(self, other):
        if other.system is not self.system:
            raise SystemMismatch("observables live on different systems")
        return Observable(self.system, self.f @ other.f)

    def __repr__(self):
        return f"Observable(dim={self.system.dim}, biortho_hermitian={is_biortho_hermitian(self)})"


class DensityMatrix:
    """Mixed state ``sum rho[n, m] |phi_n><chi_m|``.

    The coefficient matrix must be Hermitian, positive semidefinite (to
    ``1e-10``) and of unit trace.
    """

    def __init__(self, system, rho, tol=1e-10):
        rho = check_square(rho, "rho")
        if rho.shape != (system.dim, system.dim):
            raise ShapeMismatch(f"rho must be {system.dim}x{system.dim}, got {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > tol:
            raise ValueError("rho is not biorthogonally Hermitian")
        rho = 0.5 * (rho + rho.conj().T)
        if np.linalg.eigvalsh(rho).min() < -tol:
            raise ValueError("rho has negative eigenvalues")
        if abs(np.trace(rho) - 1.0) > tol:
            raise ValueError(f"rho has trace {np.trace(rho)}, expected 1")
        self.system = system
        self.rho = frozen(rho)

    @classmethod
    def pure(cls, psi):
        c = np.asarray(psi.coeffs)
        n2 = np.vdot(c, c).real
        if n2 == 0.0:
            raise ZeroState("zero state has no density matrix")
        return cls(psi.system, np.outer(c, c.conj()) / n2)

    @property
    def ambient(self):
        return np.asarray(self.system.phi) @ self.rho @ np.asarray(self.system.chi).conj().T


def observable_from_coeffs(sys, f):
    return Observable(sys, f)


def observable_from_ambient(sys, F):
    """Coefficients ``f = V^H F U`` of an ordinary matrix ``F``."""
    F = check_square(F, "F")
    if F.shape[0] != sys.dim:
        raise ShapeMismatch("operator dimension does not match the system")
    return Observable(sys, np.asarray(sys.chi).conj().T @ F @ np.asarray(sys.phi))


def is_biortho_hermitian(obs, tol=HERMITIAN_TOL):
    f = np.asarray(obs.f)
    return bool(np.abs(f.conj().T - f).max() <= tol)


def expectation_pure(obs, psi):
    """``<psi~|F|psi> / <psi~|psi>`` evaluated on coefficients."""
    if psi.system is not obs.system:
        raise SystemMismatch("state and observable live on different systems")
    c = np.asarray(psi.coeffs)
    n2 = np.vdot(c, c).real
    if n2 == 0.0:
        raise ZeroState("expectation in the zero state")
    return complex(np.vdot(c, obs.f @ c) / n2)


def expectation_mixed(obs, rho):
    """``tr(rho F) = sum rho[n, m] f[m, n]``."""
    if rho.system is not obs.system:
        raise SystemMismatch("density matrix and observable live on different systems")
    return complex(np.sum(rho.rho * np.asarray(obs.f).T))


def deformed_pauli(sys2):
    """Pauli triple built from the biorthogonal basis of a two-level system.

    ``sigma_x = |phi_1><chi_2| + |phi_2><chi_1|``,
    ``sigma_y = -i|phi_1><chi_2| + i|phi_2><chi_1|``,
    ``sigma_z = |phi_1><chi_1| - |phi_2><chi_2|``; i.e. the coefficient
    matrices are the standard Pauli matrices.
    """
    if sys2.dim != 2:
        raise DimensionNotTwo(f"deformed Pauli matrices need dim 2, got {sys2.dim}")
    return tuple(Observable(sys2, p) for p in _PAULI)


def thermal_state(sys, beta):
    """Canonical state ``exp(-beta K) / Z`` as a diagonal coefficient matrix."""
    beta = float(beta)
    if not np.isfinite(beta) or beta < 0:
        raise ValueError("beta must be finite and non-negative")
    if not sys.spectrum_real:
        raise ComplexSpectrum("thermal state needs a real spectrum; the dynamics has no equilibrium")
    e = np.asarray(sys.kappa).real
    w = np.exp(-beta * (e - e.min()))
    return DensityMatrix(sys, np.diag(w / w.sum()))


def von_neumann_entropy(rho):
    """``-sum lam ln lam`` over eigenvalues of the coefficient matrix (nats)."""
    lam = np.clip(np.linalg.eigvalsh(np.asarray(rho.rho)), 0.0, None)
    lam = lam[lam > 0]
    return float(max(-np.sum(lam * np.log(lam)), 0.0))


def same_class_2level(sysA, sysB, class_tol=1e-9):
    """Whether two two-level systems define the same class of observables.

    Compared through ``|<phi_1|phi_2>|`` with unit-norm eigenvectors.
    """
    overlaps = []
    for s in (sysA, sysB):
        if s.dim != 2:
            raise DimensionNotTwo("class comparison is only defined for dim 2")
        u = np.asarray(s.phi) / np.linalg.norm(s.phi, axis=0)
        overlaps.append(abs(gram(u)[0, 1]))
    return bool(abs(overlaps[0] - overlaps[1]) <= class_tol)

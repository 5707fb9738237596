"""Composite biorthogonal systems, product and entangled states, spin coherent states.

Basis vectors of ``A (x) B`` are Kronecker products ``phi_n (x) phi'_m`` and
``chi_n (x) chi'_m``, flattened row-major: ``I = n * dim(B) + m``.
"""

from dataclasses import dataclass
from math import comb
from itertools import product

import numpy as np

from ._validation import frozen
from .exceptions import DimensionNotTwo, InvalidSpin, SystemMismatch
from .observables import Observable
from .system import BiorthogonalSystem, StateVector

__all__ = [
    "CompositeSystem",
    "SpinSpace",
    "tensor_systems",
    "tensor_observable",
    "product_state",
    "singlet",
    "coherent_spin_state",
]


@dataclass(frozen=True, eq=False)
class CompositeSystem(BiorthogonalSystem):
    """Product of two biorthogonal systems.

    ``hamiltonian`` is the non-interacting generator ``K (x) 1 + 1 (x) K'``
    whose eigenvalues are ``kappa_n + kappa'_m``.
    """

    factors: tuple = ()

    def flat_index(self, n, m):
        return n * self.factors[1].dim + m

    def multi_index(self, flat):
        return divmod(int(flat), self.factors[1].dim)

    def __repr__(self):
        dims = "x".join(str(f.dim) for f in self.factors)
        return f"CompositeSystem(dims={dims}, gauge={self.gauge!r})"


def tensor_systems(A, B):
    """Combine two systems into ``A (x) B``."""
    phi = np.kron(np.asarray(A.phi), np.asarray(B.phi))
    chi = np.kron(np.asarray(A.chi), np.asarray(B.chi))
    kappa = (np.asarray(A.kappa)[:, None] + np.asarray(B.kappa)[None, :]).ravel()
    H = np.kron(A.hamiltonian, np.eye(B.dim)) + np.kron(np.eye(A.dim), B.hamiltonian)
    defect = float(np.abs(chi.conj().T @ phi - np.eye(phi.shape[1])).max())
    gauge = "c_norm" if A.gauge == B.gauge == "c_norm" else "balanced"
    tol = {k: max(A.tolerances[k], B.tolerances[k]) for k in A.tolerances}
    return CompositeSystem(
        hamiltonian=frozen(H),
        kappa=frozen(kappa),
        phi=frozen(phi),
        chi=frozen(chi),
        gauge=gauge,
        biortho_defect=defect,
        spectrum_real=bool(A.spectrum_real and B.spectrum_real),
        tolerances=tol,
        factors=(A, B),
    )


def _check_factors(sysAB, a, b, what):
    if not isinstance(sysAB, CompositeSystem):
        raise SystemMismatch("target is not a composite system")
    if a is not sysAB.factors[0] or b is not sysAB.factors[1]:
        raise SystemMismatch(f"{what} do not live on the factors of this composite system")


def tensor_observable(FA, FB, sysAB=None):
    """``F_A (x) F_B`` on ``A (x) B``; the composite is built if not given."""
    if sysAB is None:
        sysAB = tensor_systems(FA.system, FB.system)
    _check_factors(sysAB, FA.system, FB.system, "observables")
    return Observable(sysAB, np.kron(FA.f, FB.f))


def product_state(psiA, psiB, sysAB=None):
    """Product state with coefficients ``c_n c'_m``."""
    if sysAB is None:
        sysAB = tensor_systems(psiA.system, psiB.system)
    _check_factors(sysAB, psiA.system, psiB.system, "states")
    return StateVector(sysAB, frozen(np.kron(psiA.coeffs, psiB.coeffs)), psiA.normalized and psiB.normalized)


def singlet(A, B, sysAB=None):
    """Spin-0 state ``(|phi_1, phi'_2> - |phi_2, phi'_1>) / sqrt(2)``."""
    if A.dim != 2 or B.dim != 2:
        raise DimensionNotTwo("singlet needs two two-level systems")
    if sysAB is None:
        sysAB = tensor_systems(A, B)
    _check_factors(sysAB, A, B, "systems")
    c = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
    return StateVector(sysAB, frozen(c), True)


@dataclass(frozen=True, eq=False)
class SpinSpace:
    """Symmetric ``2j + 1``-dimensional subspace of ``2j`` copies of a two-level system.

    States on it are stored by their coefficients over the symmetrised
    basis; :meth:`phi` and :meth:`chi` build the ambient ``2^(2j)``-dimensional
    basis vectors on demand.
    """

    base: BiorthogonalSystem
    twice_j: int

    @property
    def j(self):
        return self.twice_j / 2

    @property
    def dim(self):
        return self.twice_j + 1

    def _symmetrised(self, vecs):
        n = self.twice_j
        out = np.zeros((2**n, n + 1), dtype=complex)
        for word in product((0, 1), repeat=n):
            v = np.ones(1, dtype=complex)
            for w in word:
                v = np.kron(v, vecs[:, w])
            out[:, sum(word)] += v
        return out / np.sqrt([comb(n, k) for k in range(n + 1)])

    @property
    def phi(self):
        return self._symmetrised(np.asarray(self.base.phi))

    @property
    def chi(self):
        return self._symmetrised(np.asarray(self.base.chi))


def _twice_spin(j):
    try:
        tj = 2 * float(j)
    except (TypeError, ValueError):
        raise InvalidSpin(f"spin {j!r} is not a number") from None
    if not np.isfinite(tj) or tj < 1 or tj != round(tj):
        raise InvalidSpin(f"spin must be a positive half-integer, got {j!r}")
    return int(round(tj))


def coherent_spin_state(sys2, j, theta, phi):
    """Spin-``j`` coherent state generated by ``cos(theta/2) phi_1 + sin(theta/2) e^{i phi} phi_2``.

    Coefficients over the symmetrised basis are
    ``sqrt(C(2j, k)) c1^(2j-k) c2^k`` for ``k = 0..2j``.
    """
    if sys2.dim != 2:
        raise DimensionNotTwo(f"coherent spin states are built on dim 2, got {sys2.dim}")
    n = _twice_spin(j)
    c1 = np.cos(theta / 2)
    c2 = np.sin(theta / 2) * np.exp(1j * phi)
    k = np.arange(n + 1)
    binom = np.array([comb(n, int(i)) for i in k], dtype=float)
    c = np.sqrt(binom) * c1 ** (n - k) * c2**k
    return StateVector(SpinSpace(sys2, n), frozen(c.astype(complex)), True)

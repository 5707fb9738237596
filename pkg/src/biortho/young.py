"""Finite truncation of Young's biorthogonal system.

With ``phi_n = e_1 + e_n`` and ``chi_n = e_n`` (``n = 2..N``) the pair is
biorthonormal, yet the uniform average of the ``phi_n`` has biorthogonal norm
``1 / (N - 1)`` while its Hermitian norm stays above 1. In the infinite
limit the ``chi`` system annihilates ``e_1``, which is the null conjugate
state that keeps the ``phi`` system from being a Riesz basis.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["YoungReport", "young_pair", "young_truncation"]


@dataclass(frozen=True)
class YoungReport:
    N: int
    biortho_defect: float
    norm: float
    hermitian_norm: float


def young_pair(N):
    """Columns ``phi_n = e_1 + e_n`` and ``chi_n = e_n`` for ``n = 2..N`` in ``C^N``."""
    N = int(N)
    if N < 3:
        raise ValueError(f"Young truncation needs N >= 3, got {N}")
    chi = np.zeros((N, N - 1), dtype=complex)
    chi[np.arange(1, N), np.arange(N - 1)] = 1.0
    phi = chi.copy()
    phi[0, :] = 1.0
    return phi, chi


def young_truncation(N):
    """Biorthogonal norm of ``psi = (N - 1)^-1 sum_n phi_n``."""
    phi, chi = young_pair(N)
    m = phi.shape[1]
    defect = float(np.abs(chi.conj().T @ phi - np.eye(m)).max())
    c = np.full(m, 1.0 / m)
    psi = phi @ c
    coeffs = chi.conj().T @ psi
    return YoungReport(
        N=int(N),
        biortho_defect=defect,
        norm=float(np.vdot(coeffs, coeffs).real),
        hermitian_norm=float(np.vdot(psi, psi).real),
    )

"""Dense complex eigensolver and basis utilities.

The general eigensolver reduces the input to upper Hessenberg form with
Householder reflectors, runs a single-shift complex QR iteration (Wilkinson
shifts, Givens bulge chasing) to a complex Schur form ``A = Z T Z^H``, and then
recovers eigenvectors by back substitution on ``T`` followed by one step of
inverse iteration on ``A``. Matrices of order one and two use closed forms.

Intended for desk-scale problems (order up to a few dozen).
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_positive, check_square, frozen
from .exceptions import ConvergenceFailure, PairingAmbiguous, ShapeMismatch, SingularBasis

__all__ = [
    "RawSpectrum",
    "eig_general",
    "left_from_right",
    "pair_left_right",
    "gram",
    "hessenberg",
    "schur",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RawSpectrum:
    """Eigenpairs of a general complex matrix before any gauge fixing.

    ``right_vectors`` holds one unit-norm eigenvector per column, in the same
    order as ``eigenvalues``. ``matrix_norm`` is the Frobenius norm of the
    decomposed matrix and sets the scale for every tolerance.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    residuals: np.ndarray
    matrix_norm: float

    @property
    def dim(self):
        return self.eigenvalues.shape[0]


def hessenberg(a):
    """Householder reduction ``a = q h q^H`` with ``h`` upper Hessenberg."""
    h = check_square(a)
    n = h.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _givens(a, b):
    # unitary [[c, s], [-conj(s), c]] mapping (a, b) to (r, 0), c real
    if b == 0:
        return 1.0, 0.0j
    if a == 0:
        return 0.0, 1.0 + 0.0j
    absa = abs(a)
    nrm = np.hypot(absa, abs(b))
    c = absa / nrm
    s = (a / absa) * np.conj(b) / nrm
    return c, s


def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    m = 0.5 * (a + d)
    disc = np.sqrt((0.5 * (a - d)) ** 2 + b * c)
    l1, l2 = m + disc, m - disc
    return l1 if abs(l1 - d) <= abs(l2 - d) else l2


def schur(a, max_iter_per_eig=60):
    """Complex Schur form ``a = z t z^H`` with ``t`` upper triangular.

    Raises
    ------
    ConvergenceFailure
        If some eigenvalue fails to deflate within ``max_iter_per_eig`` sweeps.
    """
    t, z = hessenberg(a)
    n = t.shape[0]
    hnorm = np.linalg.norm(t)
    if hnorm == 0.0:
        return t, z
    small = _EPS * hnorm
    hi = n - 1
    its = 0
    while hi > 0:
        lo = 0
        for l in range(hi, 0, -1):
            sub = abs(t[l, l - 1])
            ref = abs(t[l, l]) + abs(t[l - 1, l - 1])
            if sub <= _EPS * ref or sub <= small:
                t[l, l - 1] = 0.0
                lo = l
                break
        if lo == hi:
            hi -= 1
            its = 0
            continue
        its += 1
        if its > max_iter_per_eig:
            raise ConvergenceFailure(
                f"QR iteration did not deflate eigenvalue {hi} within {max_iter_per_eig} sweeps"
            )
        if its % 11 == 0:
            # exceptional shift to break cycles
            mu = t[hi, hi] + 0.75 * abs(t[hi, hi - 1]) * (1.0 + 1.0j)
        else:
            mu = _wilkinson_shift(t[hi - 1, hi - 1], t[hi - 1, hi], t[hi, hi - 1], t[hi, hi])

        x, y = t[lo, lo] - mu, t[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x, y = t[k, k - 1], t[k + 1, k - 1]
            c, s = _givens(x, y)
            g = np.array([[c, s], [-np.conj(s), c]])
            col0 = max(k - 1, lo) if k > lo else k
            t[k:k + 2, col0:] = g @ t[k:k + 2, col0:]
            if k > lo:
                t[k + 1, k - 1] = 0.0
            rmax = min(k + 3, hi + 1)
            gh = g.conj().T
            t[:rmax, k:k + 2] = t[:rmax, k:k + 2] @ gh
            z[:, k:k + 2] = z[:, k:k + 2] @ gh
    return np.triu(t), z


def _triangular_eigvecs(t):
    n = t.shape[0]
    tnorm = max(np.linalg.norm(t), np.finfo(float).tiny)
    floor = _EPS * tnorm
    x = np.zeros((n, n), dtype=complex)
    for k in range(n):
        x[k, k] = 1.0
        lam = t[k, k]
        for i in range(k - 1, -1, -1):
            den = t[i, i] - lam
            if abs(den) < floor:
                den = floor
            x[i, k] = -(t[i, i + 1:k + 1] @ x[i + 1:k + 1, k]) / den
    return x


def _refine(m, lam, v, mnorm):
    # one inverse-iteration step; keep it only when the residual improves
    n = m.shape[0]
    r0 = np.linalg.norm(m @ v - lam * v)
    if r0 == 0.0:
        return v, r0
    delta = 8 * _EPS * mnorm
    try:
        w = np.linalg.solve(m - (lam + delta) * np.eye(n), v)
    except np.linalg.LinAlgError:
        return v, r0
    nw = np.linalg.norm(w)
    if not np.isfinite(nw) or nw == 0.0:
        return v, r0
    w = w / nw
    r1 = np.linalg.norm(m @ w - lam * w)
    return (w, r1) if r1 < r0 else (v, r0)


def _closed_form_2x2(m):
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if b == 0 and c == 0:
        return np.array([a, d]), np.eye(2, dtype=complex)
    mid = 0.5 * (a + d)
    disc = np.sqrt((0.5 * (a - d)) ** 2 + b * c)
    # pick the branch without cancellation, recover the other from the determinant
    if (np.conj(mid) * disc).real < 0:
        disc = -disc
    l1 = mid + disc
    det = a * d - b * c
    l2 = det / l1 if l1 != 0 else mid - disc
    vecs = np.empty((2, 2), dtype=complex)
    for j, lam in enumerate((l1, l2)):
        u1 = np.array([b, lam - a])
        u2 = np.array([lam - d, c])
        u = u1 if np.linalg.norm(u1) >= np.linalg.norm(u2) else u2
        if np.linalg.norm(u) == 0.0:
            u = np.eye(2, dtype=complex)[:, j]
        vecs[:, j] = u / np.linalg.norm(u)
    return np.array([l1, l2]), vecs


def _sort_order(vals, vecs, tie):
    n = vals.shape[0]
    idx = sorted(range(n), key=lambda i: -vals[i].real)
    groups, cur = [], [idx[0]]
    for i in idx[1:]:
        if abs(vals[i].real - vals[cur[0]].real) <= tie:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)

    def key(i):
        lex = tuple(x for z in vecs[:, i] for x in (z.real, z.imag))
        return (-vals[i].imag, lex)

    order = []
    for grp in groups:
        order.extend(sorted(grp, key=key))
    return np.array(order, dtype=int)


def eig_general(M, eig_tol=1e-10):
    """All eigenpairs of a general complex square matrix.

    Eigenvalues come sorted by descending real part, ties (within
    ``eig_tol * ||M||_F``) broken by descending imaginary part.

    Parameters
    ----------
    M : (N, N) array_like
    eig_tol : float
        Relative residual bound; every pair must satisfy
        ``||M v - lam v|| <= eig_tol * ||M||_F``.

    Returns
    -------
    RawSpectrum
    """
    m = check_square(M, "M")
    eig_tol = check_positive(eig_tol, "eig_tol")
    n = m.shape[0]
    mnorm = float(np.linalg.norm(m))

    if n == 1:
        vals, vecs = m[0].copy(), np.ones((1, 1), dtype=complex)
    elif n == 2:
        vals, vecs = _closed_form_2x2(m)
    else:
        t, z = schur(m)
        vals = np.diag(t).copy()
        vecs = z @ _triangular_eigvecs(t)
        vecs /= np.linalg.norm(vecs, axis=0)

    residuals = np.empty(n)
    for k in range(n):
        if n > 2:
            vecs[:, k], residuals[k] = _refine(m, vals[k], vecs[:, k], mnorm)
        else:
            residuals[k] = np.linalg.norm(m @ vecs[:, k] - vals[k] * vecs[:, k])
    bound = eig_tol * mnorm
    if np.any(residuals > bound):
        worst = int(np.argmax(residuals))
        raise ConvergenceFailure(
            f"eigenpair {worst} residual {residuals[worst]:.3e} exceeds {bound:.3e}"
        )

    order = _sort_order(vals, vecs, eig_tol * mnorm)
    return RawSpectrum(
        eigenvalues=frozen(vals[order]),
        right_vectors=frozen(vecs[:, order]),
        residuals=frozen(residuals[order]),
        matrix_norm=mnorm,
    )


def left_from_right(U, inv_tol=1e-12):
    """Left-conjugate vectors ``V`` with ``V^H U = I``.

    Column ``n`` of ``V`` is the dual partner of column ``n`` of ``U``.

    Raises
    ------
    SingularBasis
        If the smallest singular value of ``U`` is not above
        ``inv_tol`` times the largest (coalescing columns).
    """
    u = check_square(U, "U")
    inv_tol = check_positive(inv_tol, "inv_tol")
    sv = np.linalg.svd(u, compute_uv=False)
    if not sv[-1] > inv_tol * sv[0]:
        raise SingularBasis(
            f"basis matrix is numerically singular (sigma_min/sigma_max = {sv[-1] / sv[0]:.3e})"
        )
    return np.linalg.inv(u).conj().T


def pair_left_right(specK, specKdag, pair_tol=1e-8):
    """Match eigenvalues of K with conjugated eigenvalues of K^H.

    Returns ``perm`` such that ``kappa[n]`` matches ``conj(nu[perm[n]])``
    within ``pair_tol * ||K||_F``.
    """
    if specK.dim != specKdag.dim:
        raise ShapeMismatch("spectra have different dimensions")
    tol = pair_tol * max(specK.matrix_norm, specKdag.matrix_norm, 1.0)
    target = np.conj(np.asarray(specKdag.eigenvalues))
    perm = np.empty(specK.dim, dtype=int)
    for n, kap in enumerate(specK.eigenvalues):
        hits = np.flatnonzero(np.abs(kap - target) <= tol)
        if hits.size != 1:
            raise PairingAmbiguous(
                f"eigenvalue {kap} has {hits.size} partners within {tol:.3e}"
            )
        perm[n] = hits[0]
    if np.unique(perm).size != perm.size:
        raise PairingAmbiguous("pairing is not a permutation")
    return perm


def gram(vectors):
    """Hermitian Gram matrix ``G[m, n] = <v_m | v_n>``.

    ``vectors`` is either a sequence of equal-length 1-d vectors or a 2-d
    array whose columns are the vectors.
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        a = vectors.astype(complex)
    else:
        vs = [np.asarray(v, dtype=complex) for v in vectors]
        if not vs:
            raise ShapeMismatch("gram needs at least one vector")
        if any(v.ndim != 1 or v.shape != vs[0].shape for v in vs):
            raise ShapeMismatch("gram vectors must be 1-d and of equal length")
        a = np.column_stack(vs)
    g = a.conj().T @ a
    return 0.5 * (g + g.conj().T)
